# function_core/families.py
"""
The closed enumeration of entire maps the pipelines can iterate.

Every family is evaluated on NumPy arrays; non-finite entries mark overflow
and the scalar helpers turn them into EvaluationOverflow.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from core.exceptions import ConfigError, EvaluationOverflow

logger = logging.getLogger(__name__)

FAMILY_CHOICES = (
    ('cos_cosh', 'cos z + cosh z'),
    ('exp', 'lambda * exp(z)'),
    ('poly', 'test polynomial'),
    ('linear', 'linear stub a * z (test harness only)'),
)

FAMILY_IDS = tuple(choice[0] for choice in FAMILY_CHOICES)


def overflow_threshold() -> float:
    return getattr(settings, 'SPIDERWEB_OVERFLOW_THRESHOLD', 1e300)


def evaluation_tolerance() -> float:
    return getattr(settings, 'SPIDERWEB_EVAL_TOLERANCE', 1e-12)


@dataclass(frozen=True)
class EntireFunctionSpec:
    family: str
    params: dict = field(default_factory=dict)
    positive_coefficients: bool = False
    transcendental: bool = True

    @property
    def label(self) -> str:
        if self.family == 'cos_cosh':
            return 'cos z + cosh z'
        if self.family == 'exp':
            return f"{self.params['lambda']}*exp(z)"
        if self.family == 'poly':
            terms = [f'{c}*z^{k}' for k, c in enumerate(self.params['coeffs']) if c != 0]
            return ' + '.join(terms) or '0'
        return f"{self.params['a']}*z"

    def evaluate_array(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        with np.errstate(over='ignore', invalid='ignore'):
            if self.family == 'cos_cosh':
                return np.cos(z) + np.cosh(z)
            if self.family == 'exp':
                return self.params['lambda'] * np.exp(z)
            if self.family == 'poly':
                return np.polyval(self.params['coeffs'][::-1], z)
            return self.params['a'] * z

    def derivative_array(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        with np.errstate(over='ignore', invalid='ignore'):
            if self.family == 'cos_cosh':
                return np.sinh(z) - np.sin(z)
            if self.family == 'exp':
                return self.params['lambda'] * np.exp(z)
            if self.family == 'poly':
                coeffs = self.params['coeffs']
                deriv = [k * coeffs[k] for k in range(1, len(coeffs))]
                return np.polyval(deriv[::-1], z) if deriv else np.zeros_like(z)
            return np.full_like(z, self.params['a'])

    def to_dict(self) -> dict:
        params = {}
        for name, value in sorted(self.params.items()):
            if isinstance(value, (list, tuple)):
                params[name] = [_jsonable(v) for v in value]
            else:
                params[name] = _jsonable(value)
        return {'family': self.family, 'params': params}


def _jsonable(value):
    value = complex(value)
    if value.imag == 0:
        return value.real
    return [value.real, value.imag]


def _real_nonnegative(value) -> bool:
    value = complex(value)
    return value.imag == 0 and value.real >= 0


def family_spec(family_id: str, params: dict = None) -> EntireFunctionSpec:
    """Build a spec from the closed family enumeration with its metadata filled in."""
    params = dict(params or {})
    if family_id == 'cos_cosh':
        if params:
            raise ConfigError(f"Family 'cos_cosh' takes no parameters, got {sorted(params)}.")
        return EntireFunctionSpec('cos_cosh', {}, positive_coefficients=True, transcendental=True)

    if family_id == 'exp':
        lam = params.pop('lambda', 1.0)
        if params:
            raise ConfigError(f"Unknown parameters for 'exp': {sorted(params)}.")
        if complex(lam) == 0:
            raise ConfigError("Parameter 'lambda' must be nonzero.")
        return EntireFunctionSpec(
            'exp', {'lambda': lam},
            positive_coefficients=_real_nonnegative(lam),
            transcendental=True,
        )

    if family_id == 'poly':
        if 'degree' in params:
            degree = int(complex(params.pop('degree')).real)
            coeffs = [0.0] * degree + [1.0]
        else:
            coeffs = params.pop('coeffs', None)
            if coeffs is None:
                raise ConfigError("Family 'poly' needs 'degree' or 'coeffs'.")
            coeffs = list(coeffs) if isinstance(coeffs, (list, tuple)) else [coeffs]
        if params:
            raise ConfigError(f"Unknown parameters for 'poly': {sorted(params)}.")
        while len(coeffs) > 1 and complex(coeffs[-1]) == 0:
            coeffs.pop()
        if len(coeffs) - 1 < 2:
            raise ConfigError('Test polynomials must have degree at least 2.')
        return EntireFunctionSpec(
            'poly', {'coeffs': tuple(coeffs)},
            positive_coefficients=all(_real_nonnegative(c) for c in coeffs),
            transcendental=False,
        )

    if family_id == 'linear':
        a = params.pop('a', 1.0)
        if params:
            raise ConfigError(f"Unknown parameters for 'linear': {sorted(params)}.")
        return EntireFunctionSpec(
            'linear', {'a': a},
            positive_coefficients=_real_nonnegative(a),
            transcendental=False,
        )

    raise ConfigError(f"Unknown function family '{family_id}'. Choose one of {', '.join(FAMILY_IDS)}.")


def is_overflowed(values: np.ndarray) -> np.ndarray:
    """True where a value is non-finite or beyond the overflow threshold."""
    with np.errstate(invalid='ignore', over='ignore'):
        return ~np.isfinite(values) | (np.abs(values) > overflow_threshold())


def evaluate(spec: EntireFunctionSpec, z: complex) -> complex:
    value = complex(spec.evaluate_array(np.asarray([z], dtype=complex))[0])
    if is_overflowed(np.asarray([value]))[0]:
        raise EvaluationOverflow(f'|f({z})| exceeds the representable range.', z=z)
    return value


def derivative(spec: EntireFunctionSpec, z: complex) -> complex:
    value = complex(spec.derivative_array(np.asarray([z], dtype=complex))[0])
    if is_overflowed(np.asarray([value]))[0]:
        raise EvaluationOverflow(f"|f'({z})| exceeds the representable range.", z=z)
    return value


def iterate_array(spec: EntireFunctionSpec, z, times: int) -> np.ndarray:
    """f^times on an array; overflowed entries become inf and stay there."""
    w = np.array(z, dtype=complex, copy=True)
    dead = is_overflowed(w)
    w[dead] = np.inf
    for _ in range(times):
        live = ~dead
        if not live.any():
            break
        w[live] = spec.evaluate_array(w[live])
        dead |= is_overflowed(w)
        w[dead] = np.inf
    return w


def iterate_with_derivative(spec: EntireFunctionSpec, z, times: int) -> tuple:
    """(f^times(z), (f^times)'(z)) by the chain rule along the orbit."""
    w = np.array(z, dtype=complex, copy=True)
    d = np.ones_like(w)
    with np.errstate(over='ignore', invalid='ignore'):
        for _ in range(times):
            d = d * spec.derivative_array(w)
            w = spec.evaluate_array(w)
    return w, d


def orbit(spec: EntireFunctionSpec, z: complex, steps: int) -> list:
    """[z, f(z), ..., f^steps(z)], stopping early after the first overflowed point."""
    points = [complex(z)]
    w = complex(z)
    for _ in range(steps):
        w = complex(spec.evaluate_array(np.asarray([w]))[0])
        points.append(w)
        if is_overflowed(np.asarray([w]))[0]:
            break
    return points
