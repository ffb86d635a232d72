# escape_classify/classify.py
"""
Truncated-depth membership in the levels A_R^L(f).

A point passes when |f^n(z)| >= M^(n+L)(R) for every n in max(0, -L)..depth,
up to the relative evaluation tolerance.
An orbit that overflows is beyond every stored rung and counts as passing
for the remaining steps.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from core.exceptions import ConfigError, LadderTooShort
from function_core.families import EntireFunctionSpec, evaluation_tolerance, is_overflowed
from function_core.ladder import RadiusLadder

logger = logging.getLogger(__name__)

IN_LEVEL = 0
COMPLEMENT = 1
OVERFLOW_IN_LEVEL = 2

STATUS_CHOICES = (
    ('in_level_up_to_depth', 'In level up to depth'),
    ('failed_at_step', 'Failed at step'),
    ('overflowed_at_step', 'Overflowed at step'),
)

_STATUS_BY_CODE = {
    IN_LEVEL: 'in_level_up_to_depth',
    COMPLEMENT: 'failed_at_step',
    OVERFLOW_IN_LEVEL: 'overflowed_at_step',
}


@dataclass(frozen=True)
class GridSpec:
    """Square grid of resolution x resolution cells; row 0 is the bottom row."""
    center: complex
    half_width: float
    resolution: int
    depth: int = 8
    level: int = 0

    def __post_init__(self):
        if self.half_width <= 0:
            raise ConfigError(f'Grid half-width must be positive, got {self.half_width}.')
        if self.resolution < 2:
            raise ConfigError(f'Grid resolution must be at least 2, got {self.resolution}.')
        if self.depth < 1:
            raise ConfigError(f'Grid depth must be at least 1, got {self.depth}.')

    @property
    def cell_size(self) -> float:
        return 2.0 * self.half_width / self.resolution

    @property
    def origin(self) -> complex:
        """Lower-left corner of the grid."""
        return complex(self.center.real - self.half_width, self.center.imag - self.half_width)

    def axes(self) -> tuple:
        offsets = (np.arange(self.resolution) + 0.5) * self.cell_size
        return self.origin.real + offsets, self.origin.imag + offsets

    def cell_centers(self) -> np.ndarray:
        xs, ys = self.axes()
        return xs[None, :] + 1j * ys[:, None]

    def cell_center(self, cell) -> complex:
        i, j = cell
        return self.origin + complex((j + 0.5) * self.cell_size, (i + 0.5) * self.cell_size)

    def cell_of(self, z: complex):
        """(row, col) of the cell containing z, or None outside the grid."""
        j = math.floor((z.real - self.origin.real) / self.cell_size)
        i = math.floor((z.imag - self.origin.imag) / self.cell_size)
        if 0 <= i < self.resolution and 0 <= j < self.resolution:
            return i, j
        return None

    def contains_disk(self, radius: float) -> bool:
        lo, hi = self.origin, self.origin + complex(2 * self.half_width, 2 * self.half_width)
        return lo.real <= -radius and hi.real >= radius and lo.imag <= -radius and hi.imag >= radius

    def same_cells(self, other) -> bool:
        return (
            other is not None and self.center == other.center
            and self.half_width == other.half_width and self.resolution == other.resolution
        )

    def with_level(self, level: int) -> 'GridSpec':
        return GridSpec(self.center, self.half_width, self.resolution, self.depth, level)

    def to_dict(self) -> dict:
        return {
            'center': [self.center.real, self.center.imag],
            'half_width': self.half_width,
            'resolution': self.resolution,
            'depth': self.depth,
            'level': self.level,
        }


@dataclass(frozen=True)
class PointVerdict:
    status: str
    step: int = None

    @property
    def in_level(self) -> bool:
        return self.status != 'failed_at_step'

    @property
    def first_failure(self):
        return self.step if self.status == 'failed_at_step' else None


@dataclass(frozen=True, eq=False)
class GridClassification:
    """Per-cell codes (IN_LEVEL, COMPLEMENT, OVERFLOW_IN_LEVEL) and decisive steps (-1 for none)."""
    gridspec: GridSpec
    codes: np.ndarray = field(repr=False)
    steps: np.ndarray = field(repr=False)
    ladder_id: str = ''

    @classmethod
    def from_mask(cls, complement: np.ndarray, gridspec: GridSpec = None, ladder_id: str = 'synthetic'):
        """Build a classification from a boolean complement mask (synthetic fixtures)."""
        complement = np.asarray(complement, dtype=bool)
        if gridspec is None:
            gridspec = GridSpec(0j, complement.shape[0] / 2.0, complement.shape[0])
        codes = np.where(complement, COMPLEMENT, IN_LEVEL).astype(np.uint8)
        steps = np.where(complement, 0, -1).astype(np.int32)
        return cls(gridspec, codes, steps, ladder_id)

    @property
    def complement(self) -> np.ndarray:
        return self.codes == COMPLEMENT

    @property
    def in_level(self) -> np.ndarray:
        return self.codes != COMPLEMENT

    def origin_cell(self):
        return self.gridspec.cell_of(0j)

    def verdict(self, cell) -> PointVerdict:
        code = int(self.codes[cell])
        step = int(self.steps[cell])
        return PointVerdict(_STATUS_BY_CODE[code], None if step < 0 else step)

    def counts(self) -> dict:
        return {
            'in_level': int(np.count_nonzero(self.codes == IN_LEVEL)),
            'complement': int(np.count_nonzero(self.codes == COMPLEMENT)),
            'overflow_in_level': int(np.count_nonzero(self.codes == OVERFLOW_IN_LEVEL)),
        }


def check_ladder_reach(ladder: RadiusLadder, level: int, depth: int):
    if level < -ladder.depth:
        raise LadderTooShort(f'Level {level} is below -{ladder.depth}, the ladder depth.', level=level)
    if depth + level > ladder.depth:
        raise LadderTooShort(
            f'depth + level = {depth + level} exceeds the ladder depth {ladder.depth}.',
            depth=depth, level=level,
        )


def classify_array(spec: EntireFunctionSpec, ladder: RadiusLadder, points, level: int, depth: int) -> tuple:
    """Vectorised kernel: returns (codes, steps) shaped like `points`."""
    check_ladder_reach(ladder, level, depth)
    z = np.asarray(points, dtype=complex)
    w = z.ravel().copy()
    codes = np.full(w.size, IN_LEVEL, dtype=np.uint8)
    steps = np.full(w.size, -1, dtype=np.int32)
    live = np.ones(w.size, dtype=bool)
    rungs = ladder.rungs(depth + level + 1) * (1.0 - evaluation_tolerance())
    start = max(0, -level)

    for n in range(depth + 1):
        if n >= start:
            with np.errstate(invalid='ignore'):
                failed = live & ~(np.abs(w) >= rungs[n + level])
            codes[failed] = COMPLEMENT
            steps[failed] = n
            live &= ~failed
        if n == depth or not live.any():
            break
        idx = np.flatnonzero(live)
        w[idx] = spec.evaluate_array(w[idx])
        over = idx[is_overflowed(w[idx])]
        codes[over] = OVERFLOW_IN_LEVEL
        steps[over] = n + 1
        live[over] = False

    return codes.reshape(z.shape), steps.reshape(z.shape)


def classify_point(spec: EntireFunctionSpec, ladder: RadiusLadder, z: complex, level: int, depth: int) -> PointVerdict:
    codes, steps = classify_array(spec, ladder, np.asarray([z]), level, depth)
    step = int(steps[0])
    return PointVerdict(_STATUS_BY_CODE[int(codes[0])], None if step < 0 else step)


def classify_grid(spec: EntireFunctionSpec, ladder: RadiusLadder, gridspec: GridSpec, threads: int = None) -> GridClassification:
    """
    Classify every cell centre. Rows are split into contiguous blocks and the
    blocks are concatenated in row order, so the result does not depend on
    the thread count.
    """
    threads = max(1, min(threads or getattr(settings, 'SPIDERWEB_THREADS', 1), gridspec.resolution))
    check_ladder_reach(ladder, gridspec.level, gridspec.depth)
    points = gridspec.cell_centers()
    logger.info(
        f"Classifying {gridspec.resolution}x{gridspec.resolution} grid for {spec.label} "
        f"(level={gridspec.level}, depth={gridspec.depth}, threads={threads})"
    )

    def run(rows):
        return classify_array(spec, ladder, points[rows[0]:rows[-1] + 1], gridspec.level, gridspec.depth)

    blocks = np.array_split(np.arange(gridspec.resolution), threads)
    if threads == 1:
        results = [run(blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, blocks))

    gc = GridClassification(
        gridspec=gridspec,
        codes=np.concatenate([r[0] for r in results], axis=0),
        steps=np.concatenate([r[1] for r in results], axis=0),
        ladder_id=ladder.ladder_id,
    )
    logger.info(f"✅ Classified grid: {gc.counts()}")
    return gc
