# orbit_construct/generate.py
"""
Admissible itineraries for the orbit types: bounded (A), unbounded with a
bounded suborbit (B), escaping (C) and slowly escaping.

mset is the sorted expanding-index set m(0) = 0 < m(1) < ...; `j` always
indexes into it.
"""
import logging
import math
from dataclasses import dataclass

from core.exceptions import ConfigError, MsetInsufficient, NoBranchAvailable
from itinerary.symbols import Itinerary

logger = logging.getLogger(__name__)

BOUNDED_A = 'bounded_a'
BOUNDED_SUBORBIT_B = 'bounded_suborbit_b'
ESCAPING_C = 'escaping_c'
SLOW_ESCAPE = 'slow_escape'

KIND_CHOICES = (
    (BOUNDED_A, 'Bounded orbit'),
    (BOUNDED_SUBORBIT_B, 'Unbounded orbit with a bounded suborbit'),
    (ESCAPING_C, 'Escaping orbit outside A(f)'),
    (SLOW_ESCAPE, 'Slowly escaping orbit (experimental)'),
)


@dataclass(frozen=True)
class OrbitTypeParams:
    kind: str
    j0: int = 2
    rate: tuple = ()
    length: int = 8

    def __post_init__(self):
        if self.kind not in dict(KIND_CHOICES):
            raise ConfigError(f"Unknown orbit kind '{self.kind}'.")
        if self.length < 1:
            raise ConfigError(f'Itinerary length must be at least 1, got {self.length}.')
        if self.kind == BOUNDED_A and self.j0 < 2:
            raise ConfigError(f'Bounded orbits need j0 >= 2, got {self.j0}.')
        if self.kind == SLOW_ESCAPE and not self.rate:
            raise ConfigError('Slow escape needs a rate sequence.')

    def to_dict(self) -> dict:
        return {'kind': self.kind, 'j0': self.j0, 'rate': list(self.rate), 'length': self.length}


def escape_schedule(mset, geometry, ladder) -> list:
    """
    (i, m(j_i)) for every i >= 1 with a finite rung: j_i is the largest j whose
    loop lies inside |z| < M^i(R), or 0 when there is none.
    """
    mset = sorted(mset)
    schedule = []
    for i in range(1, ladder.depth + 1):
        rung = ladder.rung(i)
        if not math.isfinite(rung):
            break
        j_i = 0
        for j, m in enumerate(mset):
            if m < len(geometry) and geometry[m][1] < rung:
                j_i = j
        schedule.append((i, mset[j_i]))
    return schedule


class _Rule:
    """Next-symbol rule of one construction; `history` is s_0..s_n."""

    def __init__(self, params: OrbitTypeParams, mset, geometry=None, ladder=None):
        self.params = params
        self.mset = sorted(set(mset))
        self.expanding = set(self.mset)
        self.geometry = geometry
        if params.kind in (BOUNDED_A, ESCAPING_C) and len(self.mset) < 2:
            raise MsetInsufficient(f'Kind {params.kind} needs an expanding index beyond 0, got {self.mset}.')

        if params.kind == BOUNDED_A:
            if params.j0 >= len(self.mset):
                raise MsetInsufficient(f'm(j0) with j0={params.j0} is not available in {self.mset}.')
            self.target = self.mset[params.j0]
        elif params.kind == BOUNDED_SUBORBIT_B:
            if len(self.mset) < 3:
                raise MsetInsufficient(f'Kind B resets at m(j), j >= 2, which needs 3 expanding indices, got {self.mset}.')
            self.resets = set(self.mset[2:])
        elif params.kind == ESCAPING_C:
            if geometry is None or ladder is None:
                raise ConfigError('Escaping orbits need loop geometry and a ladder.')
            schedule = escape_schedule(self.mset, geometry, ladder)
            starts = [i for i, m in schedule if m != 0]
            if not starts:
                raise MsetInsufficient('No finite rung encloses a loop with a nonzero expanding index.')
            self.I = starts[0]
            self.schedule = [(i, m) for i, m in schedule if i >= self.I]
            # Several i can share one m(j_i); the dwell lasts until the largest of them.
            self.dwell_until = {}
            for i, m in schedule:
                if i >= self.I and m != 0:
                    self.dwell_until[m] = 2 * i - self.I
        elif params.kind == SLOW_ESCAPE:
            if geometry is None:
                raise ConfigError('Slow escape needs loop geometry.')

    def start(self) -> int:
        kind = self.params.kind
        if kind == BOUNDED_A:
            return self.target
        if kind == ESCAPING_C:
            return min(self.dwell_until)
        return 0

    def rate(self, n: int) -> float:
        rate = self.params.rate
        return rate[n] if n < len(rate) else rate[-1]

    def _climb_fits(self, n: int, m: int) -> bool:
        following = [e for e in self.mset if e > m]
        target = following[0] if following else len(self.geometry)
        for k in range(1, target - m + 1):
            if m + k >= len(self.geometry) or self.geometry[m + k][1] > self.rate(n + k):
                return False
        return True

    def next(self, history) -> int:
        n, s = len(history) - 1, history[-1]
        kind = self.params.kind
        if kind == BOUNDED_A:
            return self.target - 1 if s == self.target else s + 1
        if kind == BOUNDED_SUBORBIT_B:
            return 0 if s in self.resets and s not in history[:-1] else s + 1
        if kind == ESCAPING_C:
            return s if s in self.dwell_until and n <= self.dwell_until[s] else s + 1
        if s in self.expanding and not self._climb_fits(n, s):
            return s
        return s + 1

    def alternative(self, history, primary: int):
        """The other admissible choice at a branching decision, or None."""
        n, s = len(history) - 1, history[-1]
        kind = self.params.kind
        if kind == BOUNDED_A and s == self.target and self.target >= 2:
            return self.target - 2
        if kind == BOUNDED_SUBORBIT_B and primary == 0 and s in self.resets:
            return 1
        if kind == ESCAPING_C and s in self.dwell_until and n == self.dwell_until[s] + 1:
            return s
        if kind == SLOW_ESCAPE and s in self.expanding and primary == s + 1:
            return s
        return None

    def extend(self, history, length: int) -> list:
        history = list(history)
        while len(history) < length:
            history.append(self.next(history))
        return history


def _check_range(symbols, top_index):
    if top_index is not None and max(symbols) > top_index:
        n = next(k for k, s in enumerate(symbols) if s > top_index)
        raise MsetInsufficient(
            f'The itinerary needs index {symbols[n]} at step {n}; the partition stops at {top_index}.',
            step=n,
        )


def generate_itinerary(params: OrbitTypeParams, mset, length: int = None, *, geometry=None, ladder=None,
                       top_index: int = None, stride: int = 1) -> Itinerary:
    length = length or params.length
    rule = _Rule(params, mset, geometry, ladder)
    symbols = rule.extend([rule.start()], length)
    _check_range(symbols, top_index)
    logger.info(f"Generated {params.kind} itinerary {symbols}")
    return Itinerary(tuple(symbols), stride, tuple(rule.mset), 'constructed')


def branch_pair(params: OrbitTypeParams, mset, branch_step: int, length: int = None, *, geometry=None,
                ladder=None, top_index: int = None, stride: int = 1) -> tuple:
    """Two itineraries equal through s_(branch_step) and different at s_(branch_step + 1)."""
    length = max(length or params.length, branch_step + 2)
    rule = _Rule(params, mset, geometry, ladder)
    primary = rule.extend([rule.start()], length)
    history = primary[:branch_step + 1]
    alternative = rule.alternative(history, primary[branch_step + 1])
    if alternative is None or alternative == primary[branch_step + 1]:
        raise NoBranchAvailable(
            f'Step {branch_step} (s={history[-1]}) is forced for kind {params.kind}.', step=branch_step,
        )
    other = rule.extend(history + [alternative], length)
    _check_range(primary, top_index)
    _check_range(other, top_index)
    mset = tuple(rule.mset)
    return (
        Itinerary(tuple(primary), stride, mset, 'constructed'),
        Itinerary(tuple(other), stride, mset, 'constructed'),
    )
