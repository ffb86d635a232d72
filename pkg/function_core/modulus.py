# function_core/modulus.py
"""Maximum and minimum modulus of f on circles |z| = r."""
import logging

import numpy as np
from django.conf import settings
from scipy.optimize import minimize_scalar

from core.exceptions import EvaluationOverflow
from .families import EntireFunctionSpec, evaluate, is_overflowed

logger = logging.getLogger(__name__)


def _circle_moduli(spec: EntireFunctionSpec, r: float, theta: np.ndarray) -> np.ndarray:
    values = spec.evaluate_array(r * np.exp(1j * theta))
    moduli = np.abs(values)
    moduli[is_overflowed(values)] = np.inf
    return moduli


def _local_extrema(moduli: np.ndarray, count: int, largest: bool) -> np.ndarray:
    signed = moduli if largest else -moduli
    left = np.roll(signed, 1)
    right = np.roll(signed, -1)
    peaks = np.flatnonzero((signed >= left) & (signed >= right))
    if len(peaks) == 0:
        peaks = np.arange(len(moduli))
    order = np.argsort(-signed[peaks], kind='stable')
    return peaks[order[:count]]


def _sampled_extreme(spec, r, samples, arcs, largest) -> float:
    theta = 2 * np.pi * np.arange(samples) / samples
    moduli = _circle_moduli(spec, r, theta)
    overflowed = ~np.isfinite(moduli)

    if largest and overflowed.any():
        raise EvaluationOverflow(f'M({r}) exceeds the representable range.', r=r)
    if not largest and overflowed.all():
        raise EvaluationOverflow(f'Every sample on |z| = {r} overflowed.', r=r)

    best = moduli.max() if largest else moduli[~overflowed].min()
    half_arc = 2 * np.pi / samples
    sign = -1.0 if largest else 1.0

    def objective(t):
        m = _circle_moduli(spec, r, np.asarray([t]))[0]
        if not np.isfinite(m):
            return -np.inf if largest else np.inf
        return sign * m

    for k in _local_extrema(np.where(overflowed, 0.0, moduli), arcs, largest):
        centre = theta[k]
        result = minimize_scalar(
            objective,
            bounds=(centre - half_arc, centre + half_arc),
            method='bounded',
            options={'xatol': 1e-13},
        )
        refined = sign * result.fun
        if largest:
            best = max(best, refined)
        else:
            best = min(best, refined)
    if not np.isfinite(best):
        raise EvaluationOverflow(f'Extreme modulus on |z| = {r} exceeds the representable range.', r=r)
    return float(best)


def sampled_max_modulus(spec: EntireFunctionSpec, r: float, samples: int = None, arcs: int = None) -> float:
    """Dense circle sampling followed by bounded Brent refinement of the best arcs."""
    samples = samples or getattr(settings, 'SPIDERWEB_CIRCLE_SAMPLES', 4096)
    arcs = arcs or getattr(settings, 'SPIDERWEB_REFINE_ARCS', 8)
    if r == 0:
        return abs(evaluate(spec, 0j))
    return _sampled_extreme(spec, float(r), samples, arcs, largest=True)


def max_modulus(spec: EntireFunctionSpec, r: float, samples: int = None, arcs: int = None) -> float:
    """
    M(r, f). For nonnegative Taylor coefficients the maximum sits on the
    positive real axis, so f(r) is returned exactly; that keeps ladder rungs
    bit-identical to orbits on the positive axis.
    """
    if r < 0:
        raise ValueError(f'Radius must be nonnegative, got {r}.')
    if r == 0 or spec.positive_coefficients:
        return abs(evaluate(spec, complex(r)))
    return sampled_max_modulus(spec, r, samples, arcs)


def min_modulus(spec: EntireFunctionSpec, r: float, samples: int = None, arcs: int = None) -> float:
    """m(r, f) with the same sampling strategy, minimising."""
    if r < 0:
        raise ValueError(f'Radius must be nonnegative, got {r}.')
    samples = samples or getattr(settings, 'SPIDERWEB_CIRCLE_SAMPLES', 4096)
    arcs = arcs or getattr(settings, 'SPIDERWEB_REFINE_ARCS', 8)
    if r == 0:
        return abs(evaluate(spec, 0j))
    return _sampled_extreme(spec, float(r), samples, arcs, largest=False)
