# itinerary/symbols.py
import logging
from dataclasses import dataclass, field

import numpy as np

from function_core.families import EntireFunctionSpec, iterate_array
from .partition import ON_LOOP, OUTSIDE, PLAIN, PartitionIndexer

logger = logging.getLogger(__name__)

TRUNCATION_CHOICES = (
    ('depth', 'Requested depth reached'),
    ('outside', 'Left the covered region'),
    ('on_loop', 'Landed within half a cell of a loop'),
    ('overflow', 'Orbit overflowed'),
    ('start_not_plain', 'Start point has no plain index'),
    ('constructed', 'Generated, not computed from an orbit'),
)


@dataclass(frozen=True)
class Itinerary:
    symbols: tuple
    stride: int = 1
    mset: tuple = (0,)
    truncation: str = 'depth'
    start: complex = None

    def __len__(self):
        return len(self.symbols)


@dataclass(frozen=True)
class ExpandingIndices:
    mset: tuple
    confidence: dict = field(default_factory=dict)
    samples: int = 0
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            'mset': list(self.mset),
            'confidence': {str(m): c for m, c in self.confidence.items()},
            'samples': self.samples,
            'seed': self.seed,
            'one_sided': True,
        }


def compute_itineraries(spec: EntireFunctionSpec, p: PartitionIndexer, points, depth: int, mset=(0,)) -> list:
    """Itineraries under f^N for many start points at once; at most `depth` symbols each."""
    w = np.array(np.atleast_1d(points), dtype=complex).ravel()
    starts = w.copy()
    symbols = [[] for _ in range(w.size)]
    truncation = ['depth'] * w.size
    live = np.ones(w.size, dtype=bool)

    for k in range(depth):
        idx = np.flatnonzero(live)
        if not idx.size:
            break
        kinds, values = p.classify_points(w[idx])
        for i, kind, value in zip(idx, kinds, values):
            if kind == PLAIN:
                symbols[i].append(int(value))
            else:
                truncation[i] = 'start_not_plain' if k == 0 else ('outside' if kind == OUTSIDE else 'on_loop')
                live[i] = False
        if k == depth - 1:
            break
        idx = np.flatnonzero(live)
        w[idx] = iterate_array(spec, w[idx], p.stride)
        over = idx[~np.isfinite(w[idx])]
        for i in over:
            truncation[i] = 'overflow'
        live[over] = False

    mset = tuple(sorted(set(mset)))
    return [
        Itinerary(tuple(symbols[i]), p.stride, mset, truncation[i], complex(starts[i]))
        for i in range(w.size)
    ]


def compute_itinerary(spec: EntireFunctionSpec, p: PartitionIndexer, z: complex, depth: int, mset=(0,)) -> Itinerary:
    return compute_itineraries(spec, p, [z], depth, mset)[0]


def _sample_annulus(p: PartitionIndexer, m: int, samples: int, rng) -> np.ndarray:
    cells = np.argwhere(p.cells_in(m))
    if not len(cells):
        return np.empty(0, dtype=complex)
    gs = p.sample_grid
    chosen = cells if len(cells) <= samples else cells[np.sort(rng.choice(len(cells), samples, replace=False))]
    centres = gs.origin + ((chosen[:, 1] + 0.5) + 1j * (chosen[:, 0] + 0.5)) * gs.cell_size
    picks = cells[rng.integers(0, len(cells), size=samples)]
    offsets = rng.random((samples, 2))
    jitter = gs.origin + ((picks[:, 1] + offsets[:, 0]) + 1j * (picks[:, 0] + offsets[:, 1])) * gs.cell_size
    candidates = np.concatenate([centres, jitter])
    kinds, values = p.classify_points(candidates)
    return candidates[(kinds == PLAIN) & (values == m)]


def detect_expanding_indices(spec: EntireFunctionSpec, p: PartitionIndexer, samples: int = 2048, seed: int = 0) -> ExpandingIndices:
    """
    m is expanding when some sampled point of B_m lands at a plain index <= m
    under f^N. Index 0 is always expanding. Sampling can only miss indices.
    """
    rng = np.random.default_rng(seed)
    mset = [0]
    confidence = {0: None}
    for m in range(1, p.top_index + 1):
        points = _sample_annulus(p, m, samples, rng)
        if not points.size:
            confidence[m] = 0.0
            logger.warning(f"⚠️ No grid cells carry index {m}; treated as non-expanding")
            continue
        kinds, values = p.classify_points(iterate_array(spec, points, p.stride))
        hits = (kinds == PLAIN) & (values <= m)
        confidence[m] = float(hits.mean())
        if hits.any():
            mset.append(m)
    logger.info(f"✅ Expanding indices {mset} from {samples} samples per index")
    return ExpandingIndices(tuple(mset), confidence, samples, seed)


@dataclass(frozen=True)
class RuleCheck:
    valid: bool
    index: int = None
    message: str = ''

    def to_dict(self) -> dict:
        return {'valid': self.valid, 'index': self.index, 'message': self.message}


def validate_itinerary_rule(it: Itinerary, mset=None) -> RuleCheck:
    """From an expanding index m the next symbol is any of 0..m+1; otherwise it is s_n + 1."""
    mset = set(it.mset if mset is None else mset)
    s = it.symbols
    for n in range(len(s) - 1):
        if s[n] in mset:
            if not 0 <= s[n + 1] <= s[n] + 1:
                return RuleCheck(False, n, f's_{n}={s[n]} is expanding, so s_{n + 1} must be in 0..{s[n] + 1}, got {s[n + 1]}')
        elif s[n + 1] != s[n] + 1:
            return RuleCheck(False, n, f's_{n}={s[n]} is not expanding, so s_{n + 1} must be {s[n] + 1}, got {s[n + 1]}')
    return RuleCheck(True)
