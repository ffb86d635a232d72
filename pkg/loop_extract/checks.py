# loop_extract/checks.py
"""Numerical checks of the fundamental hole and loop relations."""
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from core.exceptions import DisjointnessNotFound, EvaluationOverflow, InsufficientLoops
from function_core.families import EntireFunctionSpec, is_overflowed
from utils.geometry import distance_to_polyline, polyline_separation, resample_polyline

logger = logging.getLogger(__name__)


@dataclass
class NestingReport:
    passed: bool = True
    entries: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {'passed': self.passed, 'entries': self.entries}


def _first_cell(mask: np.ndarray):
    cells = np.argwhere(mask)
    return [int(v) for v in cells[0]] if len(cells) else None


def check_nesting(ls) -> NestingReport:
    """Cellwise H_n within H_(n+1), and the disk |z| < M^n(R) within H_n."""
    holes = ls.holes
    if len(holes) < 2:
        raise InsufficientLoops(f'Nesting needs at least 2 holes, got {len(holes)}.')
    report = NestingReport()
    centres = holes[0].gridspec.cell_centers()

    for k, hole in enumerate(holes):
        entry = {'n': hole.index}
        if k + 1 < len(holes):
            outside = hole.cells & ~holes[k + 1].cells
            entry['outside_next'] = int(np.count_nonzero(outside))
            entry['outside_next_witness'] = _first_cell(outside)
            report.passed &= entry['outside_next'] == 0

        radius = ls.ladder.rung(hole.index) if ls.ladder is not None else math.inf
        if math.isfinite(radius):
            missing = (np.abs(centres) < radius) & ~hole.cells
            entry['disk_radius'] = radius
            entry['disk_missing'] = int(np.count_nonzero(missing))
            entry['disk_witness'] = _first_cell(missing)
            report.passed &= entry['disk_missing'] == 0
        else:
            entry['disk_radius'] = None
        report.entries.append(entry)

    if report.passed:
        logger.info(f"✅ Nesting holds for H_{holes[0].index}..H_{holes[-1].index}")
    else:
        logger.warning(f"⚠️ Nesting failed: {report.entries}")
    return report


@dataclass(frozen=True)
class ForwardMapReport:
    m: int
    samples: int
    distance: float
    distance_cells: float
    median_cells: float
    bound_cells: float = 2.0

    @property
    def within_bound(self) -> bool:
        return self.distance_cells <= self.bound_cells

    def to_dict(self) -> dict:
        return {
            'm': self.m,
            'samples': self.samples,
            'distance': self.distance,
            'distance_cells': self.distance_cells,
            'median_cells': self.median_cells,
            'bound_cells': self.bound_cells,
            'within_bound': self.within_bound,
        }


def check_forward_loop_map(spec: EntireFunctionSpec, ls, m: int, samples: int = 512, bound_cells: float = None) -> ForwardMapReport:
    """One-sided Hausdorff distance from f(L_m) to L_(m+1), flagged against a bound in grid cells."""
    if bound_cells is None:
        bound_cells = getattr(settings, 'SPIDERWEB_FORWARD_MAP_CELLS', 2.0)
    source, target = ls.loop(m), ls.loop(m + 1)
    points = resample_polyline(source.vertices, samples)
    images = spec.evaluate_array(points)
    if is_overflowed(images).any():
        raise EvaluationOverflow(f'Images of L_{m} leave the representable range.', m=m)
    distances = distance_to_polyline(images, target.vertices)
    report = ForwardMapReport(
        m=m,
        samples=samples,
        distance=float(distances.max()),
        distance_cells=float(distances.max() / ls.cell_size),
        median_cells=float(np.median(distances) / ls.cell_size),
        bound_cells=float(bound_cells),
    )
    if report.within_bound:
        logger.info(f"✅ f(L_{m}) lies within {report.distance_cells:.3g} cells of L_{m + 1}")
    else:
        logger.warning(
            f"⚠️ f(L_{m}) reaches {report.distance_cells:.3g} cells from L_{m + 1}, "
            f"beyond {bound_cells:g} (median {report.median_cells:.3g})"
        )
    return report


@dataclass(frozen=True)
class DisjointnessResult:
    N: int
    separations: dict
    resolution_limited: bool

    def to_dict(self) -> dict:
        return {
            'N': self.N,
            'separations': {f'{a}-{b}': s for (a, b), s in self.separations.items()},
            'resolution_limited': self.resolution_limited,
        }


def find_disjointness_N(ls) -> DisjointnessResult:
    """Smallest N with L_m and L_(m+N) more than one cell apart for every stored m."""
    indices = [loop.index for loop in ls.loops]
    if len(indices) < 2:
        raise InsufficientLoops(f'Disjointness needs at least 2 loops, got {len(indices)}.')

    tried = {}
    for N in range(1, len(indices)):
        separations = {}
        for m in indices:
            if m + N in indices:
                sep = polyline_separation(ls.loop(m).vertices, ls.loop(m + N).vertices) / ls.cell_size
                separations[(m, m + N)] = sep
        tried[N] = separations
        if separations and all(s > 1.0 for s in separations.values()):
            limited = min(separations.values()) < 2.0
            if limited:
                logger.warning(f"⚠️ Disjointness at N={N} is within two cells; resolution-limited")
            logger.info(f"✅ Loops are disjoint at stride N={N}")
            return DisjointnessResult(N, separations, limited)

    raise DisjointnessNotFound(
        f'No stride up to {len(indices) - 1} separates the stored loops.',
        separations={N: min(s.values()) for N, s in tried.items() if s},
    )
