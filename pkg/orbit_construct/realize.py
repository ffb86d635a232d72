# orbit_construct/realize.py
"""
Realise an itinerary prefix by backward pullback of sample-grid cells,
then pin a witness down with inverse-branch Newton steps along the chain.
"""
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings
from scipy.spatial import cKDTree

from core.exceptions import ConfigError, RefinementExhausted
from function_core.families import EntireFunctionSpec, iterate_array, iterate_with_derivative
from itinerary.partition import ON_LOOP, PLAIN, PartitionIndexer
from itinerary.symbols import Itinerary, compute_itineraries

logger = logging.getLogger(__name__)

# Centre, corners and edge midpoints of a unit cell.
TAP_OFFSETS = np.array([dx + 1j * dy for dy in (-0.5, 0.0, 0.5) for dx in (-0.5, 0.0, 0.5)])
NEWTON_STARTS = 16
CHAIN_ENDS = 8


@dataclass(frozen=True)
class RegionChain:
    symbols: tuple
    kept_counts: tuple
    subdivision: int
    witness: complex
    achieved_prefix: int
    recomputed: tuple

    @property
    def self_consistent(self) -> bool:
        return self.achieved_prefix == len(self.symbols)


def _xy(points: np.ndarray) -> np.ndarray:
    return np.column_stack([points.real, points.imag])


def closure_cells(p: PartitionIndexer, m: int) -> np.ndarray:
    """Sample cells of B_m together with the OnLoop cells on its two boundary loops."""
    on_boundary = (p.cell_kind == ON_LOOP) & ((p.cell_value == m) | (p.cell_value == m - 1))
    return p.cells_in(m) | on_boundary


def _child_centres(p: PartitionIndexer, mask: np.ndarray, level: int) -> np.ndarray:
    """Centres of the 2^level x 2^level children of the masked cells, row-major at that level."""
    gs = p.sample_grid
    cells = np.argwhere(mask)
    if not len(cells):
        return np.empty(0, dtype=complex)
    split = 2 ** level
    sub = np.arange(split)
    rows = (cells[:, 0, None, None] * split + sub[None, :, None]).repeat(split, axis=2)
    cols = (cells[:, 1, None, None] * split + sub[None, None, :]).repeat(split, axis=1)
    rows, cols = rows.ravel(), cols.ravel()
    order = np.lexsort((cols, rows))
    size = gs.cell_size / split
    return gs.origin + ((cols[order] + 0.5) + 1j * (rows[order] + 0.5)) * size


def _pullback(spec, p, symbols, level):
    """Kept cell centres per step plus their taps and tap images; (None, step) when a set empties."""
    size = p.sample_grid.cell_size / 2 ** level
    P = len(symbols)
    kept = [None] * P
    taps = [None] * P
    images = [None] * P
    kept[P - 1] = _child_centres(p, closure_cells(p, symbols[P - 1]), level)
    if not kept[P - 1].size:
        return None, P - 1

    for k in range(P - 2, -1, -1):
        candidates = _child_centres(p, closure_cells(p, symbols[k]), level)
        if not candidates.size:
            return None, k
        cell_taps = candidates[:, None] + TAP_OFFSETS[None, :] * size
        cell_images = iterate_array(spec, cell_taps.ravel(), p.stride)
        finite = np.isfinite(cell_images)
        hits = np.zeros(cell_images.size, dtype=bool)
        if finite.any():
            tree = cKDTree(_xy(kept[k + 1]))
            distance, _ = tree.query(_xy(cell_images[finite]), p=np.inf, distance_upper_bound=1.5 * size)
            hits[finite] = np.isfinite(distance)
        hits = hits.reshape(cell_taps.shape)
        keep = hits.any(axis=1)
        if not keep.any():
            return None, k
        kept[k] = candidates[keep]
        taps[k] = cell_taps[keep]
        images[k] = cell_images.reshape(cell_taps.shape)[keep]
        logger.debug(f"Pullback level {level} step {k}: kept {int(keep.sum())} of {candidates.size} cells")
    return (kept, taps, images), None


def inverse_newton(spec: EntireFunctionSpec, stride: int, starts: np.ndarray, target: complex, max_iter: int = None) -> tuple:
    """Solve f^stride(w) = target from each start; returns (roots, converged)."""
    max_iter = max_iter or getattr(settings, 'SPIDERWEB_NEWTON_MAX_ITER', 80)
    tolerance = getattr(settings, 'SPIDERWEB_ROOT_TOLERANCE', 1e-10)
    w = np.array(starts, dtype=complex, copy=True)
    with np.errstate(over='ignore', invalid='ignore', divide='ignore'):
        for _ in range(max_iter):
            value, slope = iterate_with_derivative(spec, w, stride)
            step = (value - target) / slope
            step[~np.isfinite(step)] = 0
            w = w - step
            if np.all(np.abs(step) <= tolerance * np.maximum(1.0, np.abs(w))):
                break
        value, _ = iterate_with_derivative(spec, w, stride)
        converged = np.isfinite(value) & (np.abs(value - target) <= tolerance * max(1.0, abs(target)))
    return w, converged


def _plain_index(p, points) -> np.ndarray:
    kinds, values = p.classify_points(points)
    return np.where(kinds == PLAIN, values, -1)


def loop_margin(p: PartitionIndexer, points: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest stride loop."""
    xy = _xy(points)
    margin = np.full(len(points), np.inf)
    for tree in p.trees:
        distance, _ = tree.query(xy)
        margin = np.minimum(margin, distance)
    return margin


def _chain(spec, p, symbols, taps, images, end):
    """Pull the chain back from tap `end` of step P-2 by inverse-branch Newton steps."""
    P = len(symbols)
    w = complex(taps[P - 2].ravel()[end])
    for k in range(P - 3, -1, -1):
        target = w
        flat_taps = taps[k].ravel()
        with np.errstate(invalid='ignore'):
            distance = np.abs(images[k].ravel() - target)
        distance[~np.isfinite(distance)] = np.inf
        order = np.argsort(distance, kind='stable')[:NEWTON_STARTS]
        roots, converged = inverse_newton(spec, p.stride, flat_taps[order], target)
        accepted = converged & (_plain_index(p, roots) == symbols[k])
        w = complex(roots[np.flatnonzero(accepted)[0]]) if accepted.any() else complex(flat_taps[order[0]])
    return w


def _witnesses(spec, p, symbols, kept, taps, images) -> list:
    """Candidate witnesses, one chain per end tap, best loop margins first."""
    P = len(symbols)
    if P == 1:
        indices = _plain_index(p, kept[0])
        order = np.argsort(-loop_margin(p, kept[0]), kind='stable')
        good = [i for i in order if indices[i] == symbols[0]]
        return [complex(kept[0][i]) for i in (good or list(order))[:CHAIN_ENDS]]

    flat_taps = taps[P - 2].ravel()
    flat_images = images[P - 2].ravel()
    good = np.flatnonzero((_plain_index(p, flat_taps) == symbols[P - 2]) & (_plain_index(p, flat_images) == symbols[P - 1]))
    if not good.size:
        good = np.arange(flat_taps.size)
    finite = np.isfinite(flat_images[good])
    good = good[finite] if finite.any() else good
    margin = np.minimum(loop_margin(p, flat_taps[good]), loop_margin(p, flat_images[good]))
    ends = good[np.argsort(-margin, kind='stable')[:CHAIN_ENDS]]
    return [_chain(spec, p, symbols, taps, images, end) for end in ends]


def _matched(recomputed, symbols) -> int:
    n = 0
    for a, b in zip(recomputed, symbols):
        if a != b:
            break
        n += 1
    return n


def _descend(spec, p, symbols, centre, size, levels):
    """4 x 4 quadtree descent from one cell, keeping the best-matching centre seen."""
    P = len(symbols)
    best = compute_itineraries(spec, p, [centre], P)[0]
    best_match = _matched(best.symbols, symbols)
    offsets = (np.arange(4) + 0.5) / 4 - 0.5
    child_offsets = (offsets[None, :] + 1j * offsets[:, None]).ravel()
    for _ in range(levels):
        children = centre + child_offsets * size
        its = compute_itineraries(spec, p, children, P)
        scores = [_matched(it.symbols, symbols) for it in its]
        pick = int(np.argmax(scores))
        centre, size = complex(children[pick]), size / 4
        if scores[pick] > best_match:
            best, best_match = its[pick], scores[pick]
        if best_match == P:
            break
    return best, best_match


def realize_point(spec: EntireFunctionSpec, p: PartitionIndexer, it: Itinerary, prefix_len: int = None, max_subdiv: int = 2) -> RegionChain:
    prefix_len = prefix_len or len(it)
    if prefix_len < 1 or prefix_len > len(it):
        raise ConfigError(f'Prefix length {prefix_len} is outside 1..{len(it)}.')
    if max_subdiv < 0:
        raise ConfigError(f'max_subdiv must be nonnegative, got {max_subdiv}.')
    symbols = tuple(int(s) for s in it.symbols[:prefix_len])

    died = None
    for level in range(max_subdiv + 1):
        chain, died = _pullback(spec, p, symbols, level)
        if chain is not None:
            break
        logger.info(f"Pullback of {list(symbols)} emptied at step {died}, level {level}")
    else:
        raise RefinementExhausted(
            f'No surviving cells at step {died} after {max_subdiv} subdivisions.', step=died,
        )

    kept, taps, images = chain
    candidates = _witnesses(spec, p, symbols, kept, taps, images)
    its = compute_itineraries(spec, p, candidates, prefix_len)
    scores = [_matched(it.symbols, symbols) for it in its]
    best = int(np.argmax(scores))
    witness, recomputed, achieved = candidates[best], its[best], scores[best]

    if achieved < prefix_len:
        size = p.sample_grid.cell_size / 2 ** level
        gs = p.sample_grid
        cell = np.floor((witness - gs.origin).real / size) + 1j * np.floor((witness - gs.origin).imag / size)
        centre = gs.origin + (cell + (0.5 + 0.5j)) * size
        descended, score = _descend(spec, p, symbols, complex(centre), size, max_subdiv + 4)
        if score > achieved:
            recomputed, achieved, witness = descended, score, descended.start

    kept_counts = tuple(int(cells.size) for cells in kept)
    if achieved == prefix_len:
        logger.info(f"✅ Realised {list(symbols)} at {witness:.6g} (level {level})")
    else:
        logger.warning(f"⚠️ Witness for {list(symbols)} matches {achieved} of {prefix_len} symbols")
    return RegionChain(symbols, kept_counts, level, complex(witness), achieved, tuple(recomputed.symbols))
