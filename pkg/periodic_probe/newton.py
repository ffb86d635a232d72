# periodic_probe/newton.py
"""
Periodic points by Newton's method on g(z) = f^p(z) - z from a uniform seed
grid. One record per cycle, with the multiplier taken along the cycle.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from core.exceptions import ConfigError
from escape_classify.classify import GridSpec
from function_core.families import EntireFunctionSpec, iterate_array, iterate_with_derivative

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeriodicPointRecord:
    z0: complex
    period: int
    multiplier: complex
    residual: float
    cycle: tuple = ()

    @property
    def repelling(self) -> bool:
        return abs(self.multiplier) > 1


@dataclass(frozen=True)
class PeriodicSearch:
    records: tuple
    period: int
    seeds: int
    converged: int
    dropped: int
    non_minimal: int = 0
    region: GridSpec = field(default=None, repr=False)


def _tolerance(z, tolerance: float):
    return tolerance * np.maximum(1.0, np.abs(z))


def newton_periodic(spec: EntireFunctionSpec, seeds, period: int, max_iter: int) -> np.ndarray:
    """Vectorised Newton for f^period(z) = z; diverged entries come back non-finite."""
    z = np.array(seeds, dtype=complex, copy=True)
    with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
        for _ in range(max_iter):
            value, slope = iterate_with_derivative(spec, z, period)
            step = (value - z) / (slope - 1)
            live = np.isfinite(step)
            z[~live] = np.nan
            z[live] -= step[live]
            if not live.any() or np.all(np.abs(step[live]) <= 1e-15 * np.maximum(1.0, np.abs(z[live]))):
                break
    return z


def residual(spec: EntireFunctionSpec, z, period: int) -> np.ndarray:
    with np.errstate(invalid='ignore'):
        return np.abs(iterate_array(spec, z, period) - z)


def has_smaller_period(spec: EntireFunctionSpec, z: complex, period: int, tolerance: float) -> bool:
    for q in range(1, period):
        if period % q == 0 and residual(spec, np.asarray([z]), q)[0] <= 10 * _tolerance(z, tolerance):
            return True
    return False


def cycle_of(spec: EntireFunctionSpec, z: complex, period: int) -> tuple:
    points = [complex(z)]
    for _ in range(period - 1):
        points.append(complex(spec.evaluate_array(np.asarray([points[-1]]))[0]))
    return tuple(points)


def _sort_key(z: complex) -> tuple:
    return (round(z.real, 9), round(z.imag, 9))


def _in_region(region: GridSpec, z) -> np.ndarray:
    offset = np.asarray(z) - region.center
    return (np.abs(offset.real) <= region.half_width) & (np.abs(offset.imag) <= region.half_width)


def find_periodic_points(spec: EntireFunctionSpec, region: GridSpec, period: int, seeds: int = None,
                         tolerance: float = None, max_iter: int = None) -> PeriodicSearch:
    """
    Seeds are the cell centres of a `seeds` x `seeds` grid over `region`.
    Roots that also solve a proper-divisor period are dropped, and roots on a
    cycle already found are merged into it.
    """
    if period < 1:
        raise ConfigError(f'Period must be at least 1, got {period}.')
    seeds = seeds or getattr(settings, 'SPIDERWEB_NEWTON_SEEDS', 64)
    tolerance = tolerance or getattr(settings, 'SPIDERWEB_ROOT_TOLERANCE', 1e-10)
    max_iter = max_iter or getattr(settings, 'SPIDERWEB_NEWTON_MAX_ITER', 80)

    grid = GridSpec(region.center, region.half_width, seeds)
    roots = newton_periodic(spec, grid.cell_centers().ravel(), period, max_iter)
    finite = np.isfinite(roots)
    ok = np.zeros(roots.size, dtype=bool)
    ok[finite] = residual(spec, roots[finite], period) <= _tolerance(roots[finite], tolerance)
    ok &= _in_region(region, roots)
    converged = roots[ok]

    cycles, non_minimal = [], 0
    merge = 1e3 * tolerance
    for z in sorted((complex(z) for z in converged), key=_sort_key):
        if any(abs(z - w) <= merge * max(1.0, abs(z)) for cycle in cycles for w in cycle):
            continue
        if has_smaller_period(spec, z, period, tolerance):
            non_minimal += 1
            cycles.append(cycle_of(spec, z, 1))
            continue
        cycles.append(cycle_of(spec, z, period))

    records = []
    for cycle in cycles:
        if len(cycle) != period:
            continue
        z0 = min(cycle, key=_sort_key)
        _, multiplier = iterate_with_derivative(spec, np.asarray([z0]), period)
        records.append(PeriodicPointRecord(
            z0=z0,
            period=period,
            multiplier=complex(multiplier[0]),
            residual=float(residual(spec, np.asarray([z0]), period)[0]),
            cycle=tuple(sorted(cycle, key=_sort_key)),
        ))
    records.sort(key=lambda record: _sort_key(record.z0))

    dropped = int(roots.size - ok.sum())
    repelling = sum(record.repelling for record in records)
    logger.info(
        f"✅ Period {period} search for {spec.label}: {len(records)} cycles ({repelling} repelling) "
        f"from {roots.size} seeds, {dropped} dropped, {non_minimal} of smaller period"
    )
    return PeriodicSearch(tuple(records), period, int(roots.size), int(ok.sum()), dropped, non_minimal, region)
