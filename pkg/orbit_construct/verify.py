# orbit_construct/verify.py
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from core.exceptions import ConfigError
from function_core.families import EntireFunctionSpec, iterate_array
from function_core.ladder import RadiusLadder
from itinerary.partition import PLAIN, PartitionIndexer
from .generate import BOUNDED_A, BOUNDED_SUBORBIT_B, ESCAPING_C, SLOW_ESCAPE, OrbitTypeParams, _Rule

logger = logging.getLogger(__name__)

TREND_WINDOW = 5


@dataclass(frozen=True)
class OrbitReport:
    kind: str
    passed: bool
    checks: dict = field(default_factory=dict)
    violations: tuple = ()

    def to_dict(self) -> dict:
        return {
            'kind': self.kind,
            'passed': self.passed,
            'checks': self.checks,
            'violations': list(self.violations),
        }


def stride_orbit(spec: EntireFunctionSpec, z: complex, stride: int, depth: int) -> np.ndarray:
    """[z, F(z), ..., F^depth(z)] with F = f^stride; inf after overflow."""
    points = np.empty(depth + 1, dtype=complex)
    points[0] = z
    for n in range(depth):
        points[n + 1] = iterate_array(spec, points[n:n + 1], stride)[0]
    return points


def _plain(p: PartitionIndexer, points) -> np.ndarray:
    kinds, values = p.classify_points(points)
    return np.where(kinds == PLAIN, values, -1)


def _verify_bounded(p, rule, points):
    wanted = rule.target + 1
    bound = min(wanted, p.top_index)
    if bound < wanted:
        logger.warning(f"⚠️ Loop {wanted} is beyond the partition; bounding by loop {bound} instead")
    outer = p.geometry()[bound][1]
    moduli = np.abs(points)
    escaped = np.flatnonzero(~(moduli <= outer))
    checks = {
        'bound_index': bound,
        'bound_clamped': bound < wanted,
        'bound_radius': outer,
        'max_modulus': float(np.max(moduli)),
    }
    return checks, [f'step {int(n)}: |F^n(z)| = {moduli[n]:.6g} exceeds {outer:.6g}' for n in escaped]


def _verify_bounded_suborbit(p, rule, points):
    expected = rule.extend([rule.start()], len(points))
    indices = _plain(p, points)
    resets = [n for n in range(1, len(points)) if expected[n] == 0]
    violations = [f'step {n}: expected a return to B_0, index {int(indices[n])}' for n in resets if indices[n] != 0]

    moduli = np.abs(points)
    bounds = [0] + resets + [len(points)]
    excursions = [float(np.max(moduli[a:b])) for a, b in zip(bounds, bounds[1:]) if b > a]
    growing = all(b > a for a, b in zip(excursions, excursions[1:]))
    if not growing:
        violations.append(f'excursion maxima do not grow: {excursions}')
    return {'reset_steps': resets, 'excursion_maxima': excursions}, violations


def _verify_escaping(p, rule, points, ladder):
    violations = []
    twice = []
    for i, m in rule.schedule:
        n = 2 * i - rule.I
        rung = ladder.rung(i)
        if n >= len(points) or not math.isfinite(rung):
            continue
        value = abs(points[n])
        ok = value < rung
        twice.append({'i': i, 'n': n, 'modulus': value, 'rung': rung, 'passed': ok})
        if not ok:
            violations.append(f'i={i}: |F^{n}(z)| = {value:.6g} is not below M^{i}(R) = {rung:.6g}')

    indices = _plain(p, points)
    known = indices[indices >= 0]
    trend = bool(known.size >= 2 and np.all(np.diff(known) >= 0) and known[-1] > known[0])
    if not trend:
        violations.append(f'annulus indices do not climb: {known.tolist()}')

    window = modulus_window(points)
    rising = bool(window.size >= 2 and np.all(np.diff(window) > 0))
    if not rising:
        violations.append(f'|F^n(z)| is not increasing over the last {TREND_WINDOW} strides: {window.tolist()}')
    checks = {
        'I': rule.I,
        'twice_inequality': twice,
        'escaping_trend': trend,
        'modulus_trend': rising,
        'trend_moduli': window.tolist(),
    }
    return checks, violations


def modulus_window(points, window: int = TREND_WINDOW) -> np.ndarray:
    """|F^n(z)| over the last `window` recorded strides; overflowed strides are not recorded."""
    moduli = np.abs(np.asarray(points, dtype=complex))
    return moduli[np.isfinite(moduli)][-window:]


def _verify_slow(p, rule, points):
    moduli = np.abs(points)
    expected = rule.extend([rule.start()], len(points))
    left = next((n for n, s in enumerate(expected) if s != 0), len(points))
    violations = [
        f'step {n}: |F^n(z)| = {moduli[n]:.6g} exceeds the rate {rule.rate(n):.6g}'
        for n in range(left, len(points)) if not moduli[n] <= rule.rate(n)
    ]
    return {'checked_from': left}, violations


def verify_orbit_type(spec: EntireFunctionSpec, ladder: RadiusLadder, z: complex, params: OrbitTypeParams, depth: int,
                      p: PartitionIndexer, mset) -> OrbitReport:
    """Check the defining property of the orbit type along `depth` strides of the orbit of z."""
    if depth < 1:
        raise ConfigError(f'Verification depth must be at least 1, got {depth}.')
    rule = _Rule(params, mset, p.geometry(), ladder)
    points = stride_orbit(spec, z, p.stride, depth)

    if params.kind == BOUNDED_A:
        checks, violations = _verify_bounded(p, rule, points)
    elif params.kind == BOUNDED_SUBORBIT_B:
        checks, violations = _verify_bounded_suborbit(p, rule, points)
    elif params.kind == ESCAPING_C:
        checks, violations = _verify_escaping(p, rule, points, ladder)
    elif params.kind == SLOW_ESCAPE:
        checks, violations = _verify_slow(p, rule, points)

    report = OrbitReport(params.kind, not violations, checks, tuple(violations))
    if report.passed:
        logger.info(f"✅ {params.kind} verified for z={z:.6g} over {depth} strides")
    else:
        logger.warning(f"⚠️ {params.kind} check failed for z={z:.6g}: {violations[0]}")
    return report
