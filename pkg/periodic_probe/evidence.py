# periodic_probe/evidence.py
"""
Multi-scale evidence that a periodic point is a singleton complement
component: at each scale, a closed 8-connected chain of in-level cells must
surround z0 inside the annulus inner_ratio*rho < |z - z0| < rho.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from core.exceptions import ConfigError
from escape_classify.classify import GridSpec, classify_grid
from escape_classify.components import label_components
from function_core.families import EntireFunctionSpec
from function_core.ladder import RadiusLadder

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScaleEvidence:
    radius: float
    inner_radius: float
    surrounded: bool
    barrier_cells: int

    @property
    def status(self) -> str:
        return 'surrounded' if self.surrounded else 'inconclusive'


@dataclass(frozen=True)
class SingletonEvidence:
    z0: complex
    scales: tuple
    level: int
    depth: int
    resolution: int

    @property
    def evidence_positive(self) -> bool:
        return bool(self.scales) and all(scale.surrounded for scale in self.scales)

    def to_dict(self) -> dict:
        return {
            'z0': self.z0,
            'level': self.level,
            'depth': self.depth,
            'resolution': self.resolution,
            'scales': [
                {'radius': s.radius, 'inner_radius': s.inner_radius, 'status': s.status, 'barrier_cells': s.barrier_cells}
                for s in self.scales
            ],
            'evidence_positive': self.evidence_positive,
            'evidence': getattr(settings, 'SPIDERWEB_EVIDENCE_BANNER', ''),
        }


def surrounding_chain(in_level: np.ndarray, gridspec: GridSpec, z0: complex, inner: float, outer: float) -> tuple:
    """
    (surrounded, barrier_cells). The in-level cells of the annulus surround z0
    through an 8-connected chain iff the 4-connected rest of the grid around
    z0 stays off the grid border.
    """
    distance = np.abs(gridspec.cell_centers() - z0)
    barrier = np.asarray(in_level, dtype=bool) & (distance > inner) & (distance < outer)
    centre = gridspec.cell_of(z0)
    if centre is None:
        raise ConfigError(f'z0={z0} is not on the evidence grid.')
    cm = label_components(~barrier)
    label = cm.label_at(centre)
    return bool(label and cm.is_bounded(label)), int(barrier.sum())


def singleton_evidence(spec: EntireFunctionSpec, ladder: RadiusLadder, z0: complex, scales, gridres: int = 128,
                       level: int = 0, inner_ratio: float = 0.2, depth: int = 8, threads: int = None) -> SingletonEvidence:
    scales = tuple(float(rho) for rho in scales)
    if not scales or any(rho <= 0 for rho in scales) or any(b >= a for a, b in zip(scales, scales[1:])):
        raise ConfigError(f'Scales must be positive and strictly decreasing, got {list(scales)}.')
    if not 0 < inner_ratio < 1:
        raise ConfigError(f'inner_ratio must lie in (0, 1), got {inner_ratio}.')

    found = []
    for rho in scales:
        gridspec = GridSpec(complex(z0), rho, gridres, depth=depth, level=level)
        gc = classify_grid(spec, ladder, gridspec, threads=threads)
        surrounded, barrier = surrounding_chain(gc.in_level, gridspec, z0, inner_ratio * rho, rho)
        found.append(ScaleEvidence(rho, inner_ratio * rho, surrounded, barrier))
        if not surrounded:
            logger.warning(f"⚠️ No surrounding in-level chain around {z0:.6g} at scale {rho:g}")

    evidence = SingletonEvidence(complex(z0), tuple(found), level, depth, gridres)
    logger.info(
        f"{'✅' if evidence.evidence_positive else '⚠️'} Singleton evidence at {z0:.6g}: "
        f"{sum(s.surrounded for s in found)} of {len(found)} scales surrounded"
    )
    return evidence
