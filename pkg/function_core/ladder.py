# function_core/ladder.py
"""Radius certificates and the iterated maximum-modulus ladder M^n(R, f)."""
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from core.exceptions import EvaluationOverflow, InvalidRadius, LadderTooShort
from .families import EntireFunctionSpec
from .modulus import max_modulus

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RadiusCertificate:
    """Finite-range evidence that M(r) > r on [R, r_max]; not a proof."""
    passed: bool
    base_R: float
    r_max: float
    grid: tuple
    witness: float = None
    growth_ok: bool = True

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'R': self.base_R,
            'r_max': self.r_max,
            'grid_points': len(self.grid),
            'witness': self.witness,
            'growth_ok': self.growth_ok,
        }


@dataclass(frozen=True)
class RadiusLadder:
    spec: EntireFunctionSpec
    base_R: float
    values: tuple
    depth: int
    tolerance: float
    certificate: RadiusCertificate
    truncated: bool = False
    ladder_id: str = field(default='', compare=False)

    def rung(self, k: int) -> float:
        """M^k(R); +inf past an overflow truncation."""
        if k < 0 or k > self.depth:
            raise LadderTooShort(f'Rung {k} requested from a ladder of depth {self.depth}.')
        if k < len(self.values):
            return self.values[k]
        return math.inf

    def rungs(self, count: int) -> np.ndarray:
        return np.array([self.rung(k) for k in range(count)])

    def to_dict(self) -> dict:
        return {
            **self.spec.to_dict(),
            'R': self.base_R,
            'depth': self.depth,
            'values': list(self.values),
            'truncated': self.truncated,
            'tolerance': self.tolerance,
            'certificate': self.certificate.to_dict(),
            'ladder_id': self.ladder_id,
        }


def _modulus_or_inf(spec, r) -> float:
    try:
        return max_modulus(spec, r)
    except EvaluationOverflow:
        return math.inf


def validate_radius(spec: EntireFunctionSpec, R: float, r_max: float, points: int = None) -> RadiusCertificate:
    """Check M(r) > r on a geometric grid over [R, r_max] plus growth of M(r)/r at r_max."""
    if R <= 0 or r_max <= R:
        raise InvalidRadius(f'Need 0 < R < r_max, got R={R}, r_max={r_max}.')
    points = points or getattr(settings, 'SPIDERWEB_RADIUS_GRID_POINTS', 64)
    grid = tuple(float(r) for r in np.geomspace(R, r_max, points))

    for r in grid:
        if _modulus_or_inf(spec, r) <= r:
            logger.warning(f"⚠️ Radius check failed for {spec.label}: M({r:.6g}) <= {r:.6g}")
            return RadiusCertificate(False, R, r_max, grid, witness=r, growth_ok=False)

    inner = r_max / 1.01
    outer_ratio = _modulus_or_inf(spec, r_max) / r_max
    inner_ratio = _modulus_or_inf(spec, inner) / inner
    growth_ok = outer_ratio >= inner_ratio * (1 - 1e-12) or math.isinf(outer_ratio)
    if not growth_ok:
        logger.warning(f"⚠️ M(r)/r decreases at r_max={r_max} for {spec.label}")
    return RadiusCertificate(growth_ok, R, r_max, grid, growth_ok=growth_ok)


def ladder_fingerprint(spec: EntireFunctionSpec, R: float, values) -> str:
    payload = json.dumps({**spec.to_dict(), 'R': R, 'values': [repr(v) for v in values]}, sort_keys=True)
    return hashlib.sha256(payload.encode('utf-8')).hexdigest()[:16]


def build_ladder(spec: EntireFunctionSpec, R: float, depth: int, certificate: RadiusCertificate) -> RadiusLadder:
    """values[0] = R, values[n+1] = M(values[n]); stops at the first overflowing rung."""
    if certificate is None or not certificate.passed:
        raise InvalidRadius(f'build_ladder needs a passing radius certificate for R={R}.')
    if certificate.base_R != R:
        raise InvalidRadius(f'Certificate is for R={certificate.base_R}, not R={R}.')
    if depth < 0:
        raise InvalidRadius(f'Ladder depth must be nonnegative, got {depth}.')

    values = [float(R)]
    truncated = False
    for n in range(depth):
        try:
            values.append(max_modulus(spec, values[-1]))
        except EvaluationOverflow:
            truncated = True
            logger.info(f"Ladder for {spec.label} truncated at rung {n + 1} (overflow)")
            break

    tolerance = getattr(settings, 'SPIDERWEB_MODULUS_RTOL', 1e-9)
    ladder = RadiusLadder(
        spec=spec,
        base_R=float(R),
        values=tuple(values),
        depth=depth,
        tolerance=0.0 if spec.positive_coefficients else tolerance,
        certificate=certificate,
        truncated=truncated,
        ladder_id=ladder_fingerprint(spec, R, values),
    )
    logger.info(f"✅ Built ladder {ladder.ladder_id} for {spec.label}: {len(values)} finite rungs of {depth + 1}")
    return ladder


def prepare_ladder(spec: EntireFunctionSpec, R: float, depth: int, r_max: float = None) -> RadiusLadder:
    """validate_radius followed by build_ladder."""
    certificate = validate_radius(spec, R, r_max or max(100.0, 10.0 * R))
    return build_ladder(spec, R, depth, certificate)
