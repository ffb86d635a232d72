# itinerary/partition.py
"""
The partition B_0 = H_0, B_m = H_m minus H_(m-1), taken over loops at a
stride N (loop m of the partition is L_(mN)).

Points farther than `refine_width` from a loop are placed by point-in-polygon
tests. Closer points, outside the half-cell OnLoop band, are placed by the
level predicate itself when the loop set carries its function and ladder.
"""
import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from core.exceptions import ConfigError, InsufficientLoops
from escape_classify.classify import COMPLEMENT, GridSpec, classify_array
from function_core.families import EntireFunctionSpec
from utils.geometry import contains, polyline_length, resample_polyline

logger = logging.getLogger(__name__)

PLAIN = 0
OUTSIDE = 1
ON_LOOP = 2

_KIND_NAMES = {PLAIN: 'plain', OUTSIDE: 'outside', ON_LOOP: 'on_loop'}


@dataclass(frozen=True)
class AnnulusIndex:
    """kind plus the annulus index (plain) or the stride loop number (on_loop)."""
    kind: str
    value: int = None

    @property
    def is_plain(self) -> bool:
        return self.kind == 'plain'

    def to_dict(self) -> dict:
        return {'kind': self.kind, 'value': self.value}


def loop_tree(vertices: np.ndarray, cell_size: float) -> cKDTree:
    """KD-tree over a loop resampled at an eighth of a cell."""
    count = max(16, int(math.ceil(polyline_length(vertices) / (cell_size / 8))))
    samples = resample_polyline(vertices, count)
    return cKDTree(np.column_stack([samples.real, samples.imag]))


@dataclass(frozen=True, eq=False)
class PartitionIndexer:
    loop_set: object
    stride: int
    loops: tuple
    band: float
    refine_width: float
    sample_grid: GridSpec
    trees: tuple = field(repr=False)
    spec: EntireFunctionSpec = None
    cell_kind: np.ndarray = field(default=None, repr=False)
    cell_value: np.ndarray = field(default=None, repr=False)

    @property
    def top_index(self) -> int:
        return len(self.loops) - 1

    @property
    def refines(self) -> bool:
        ls = self.loop_set
        return self.spec is not None and ls.ladder is not None and ls.gridspec is not None

    def _inside(self, m: int, points: np.ndarray, distances: np.ndarray) -> np.ndarray:
        inside = contains(self.loops[m].vertices, points)
        if not self.refines:
            return inside
        near = distances <= self.refine_width
        if near.any():
            ls = self.loop_set
            codes, _ = classify_array(self.spec, ls.ladder, points[near], m * self.stride, ls.gridspec.depth)
            inside[near] = codes == COMPLEMENT
        return inside

    def classify_points(self, points) -> tuple:
        """Vectorised annulus index: (kinds, values) arrays shaped like `points`."""
        pts = np.asarray(points, dtype=complex)
        flat = pts.ravel()
        kinds = np.full(flat.size, OUTSIDE, dtype=np.int8)
        values = np.full(flat.size, -1, dtype=np.int64)
        idx = np.flatnonzero(np.isfinite(flat))
        if not idx.size:
            return kinds.reshape(pts.shape), values.reshape(pts.shape)

        sub = flat[idx]
        xy = np.column_stack([sub.real, sub.imag])
        nearest = np.full(idx.size, np.inf)
        owner = np.full(idx.size, -1)
        for m in range(len(self.loops) - 1, -1, -1):
            distances, _ = self.trees[m].query(xy, distance_upper_bound=self.refine_width)
            inside = self._inside(m, sub, distances)
            kinds[idx[inside]] = PLAIN
            values[idx[inside]] = m
            closer = distances < nearest
            nearest[closer] = distances[closer]
            owner[closer] = m

        on_loop = nearest <= self.band
        kinds[idx[on_loop]] = ON_LOOP
        values[idx[on_loop]] = owner[on_loop]
        return kinds.reshape(pts.shape), values.reshape(pts.shape)

    def annulus_index(self, z: complex) -> AnnulusIndex:
        kinds, values = self.classify_points(np.asarray([z]))
        kind = int(kinds[0])
        return AnnulusIndex(_KIND_NAMES[kind], None if kind == OUTSIDE else int(values[0]))

    def geometry(self) -> list:
        """(inner, outer) radius of each stride loop."""
        out = []
        for loop in self.loops:
            r = np.abs(loop.vertices)
            out.append((float(r.min()), float(r.max())))
        return out

    def cells_in(self, m: int) -> np.ndarray:
        """Sample-grid cells whose centres carry plain index m."""
        return (self.cell_kind == PLAIN) & (self.cell_value == m)


def _default_grid(loops, resolution: int = 256) -> GridSpec:
    outer = float(np.abs(loops[-1].vertices).max())
    return GridSpec(0j, 1.1 * outer, resolution)


def _cell_indices_from_holes(holes, grid: GridSpec, trees, band: float) -> tuple:
    # Marching squares runs through edge midpoints, so a centre is inside L_n iff its cell is in the filled hole.
    centres = grid.cell_centers()
    kind = np.full(centres.shape, OUTSIDE, dtype=np.int8)
    value = np.full(centres.shape, -1, dtype=np.int64)
    for m in range(len(holes) - 1, -1, -1):
        filled = ndimage.binary_fill_holes(holes[m].cells)
        kind[filled] = PLAIN
        value[filled] = m
    xy = np.column_stack([centres.real.ravel(), centres.imag.ravel()])
    nearest = np.full(xy.shape[0], np.inf)
    owner = np.full(xy.shape[0], -1)
    for m, tree in enumerate(trees):
        distances, _ = tree.query(xy, distance_upper_bound=band)
        closer = distances < nearest
        nearest[closer] = distances[closer]
        owner[closer] = m
    near = np.isfinite(nearest).reshape(centres.shape)
    kind[near] = ON_LOOP
    value[near] = owner.reshape(centres.shape)[near]
    return kind, value


def build_partition(ls, N: int, spec: EntireFunctionSpec = None, sample_grid: GridSpec = None, refine_cells: float = 2.0) -> PartitionIndexer:
    """
    Partition from the loops L_0, L_N, L_2N, ... of `ls`. Passing the function
    enables predicate refinement near the loops.
    """
    if N < 1:
        raise ConfigError(f'Stride must be at least 1, got {N}.')
    if ls.N_disjoint is not None and N < ls.N_disjoint:
        raise ConfigError(f'Stride {N} is below the disjointness stride {ls.N_disjoint}.')

    loops, holes = [], []
    hole_by_index = {hole.index: hole for hole in ls.holes}
    m = 0
    while m * N in ls.indices:
        loops.append(ls.loop(m * N))
        holes.append(hole_by_index.get(m * N))
        m += 1
    if len(loops) < 3:
        raise InsufficientLoops(f'Stride {N} leaves {len(loops)} loops; at least 3 are needed.', stride=N)

    band = 0.5 * ls.cell_size
    trees = tuple(loop_tree(loop.vertices, ls.cell_size) for loop in loops)
    grid = sample_grid or ls.gridspec or _default_grid(loops)
    indexer = PartitionIndexer(
        loop_set=ls,
        stride=N,
        loops=tuple(loops),
        band=band,
        refine_width=max(band, refine_cells * ls.cell_size),
        sample_grid=grid,
        trees=trees,
        spec=spec,
    )

    if all(h is not None and grid.same_cells(h.gridspec) for h in holes):
        kind, value = _cell_indices_from_holes(holes, grid, trees, band)
    else:
        kind, value = indexer.classify_points(grid.cell_centers())
    indexer = replace(indexer, cell_kind=kind, cell_value=value)

    logger.info(
        f"✅ Partition at stride {N}: top index {indexer.top_index}, band {band:.3g}, "
        f"refined={indexer.refines}"
    )
    return indexer
