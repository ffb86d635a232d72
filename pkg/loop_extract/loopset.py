# loop_extract/loopset.py
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from core.exceptions import ConfigError, DisjointnessNotFound, InsufficientLoops
from escape_classify.classify import GridSpec, classify_grid
from function_core.families import EntireFunctionSpec
from function_core.ladder import RadiusLadder
from utils.geometry import contains
from .checks import find_disjointness_N
from .holes import FundamentalHole, extract_hole
from .loops import FundamentalLoop, ccw_polyline, trace_loop
from .serializers import FundamentalLoopSerializer

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FundamentalLoopSet:
    loops: tuple
    holes: tuple = ()
    gridspec: GridSpec = None
    cell_size: float = 1.0
    ladder: RadiusLadder = None
    ladder_id: str = ''
    N_disjoint: int = None
    separations: dict = field(default_factory=dict)
    resolution_limited: bool = False

    def loop(self, n: int) -> FundamentalLoop:
        for loop in self.loops:
            if loop.index == n:
                return loop
        raise InsufficientLoops(f'Loop L_{n} is not in this loop set.', n=n)

    @property
    def indices(self) -> list:
        return [loop.index for loop in self.loops]

    @classmethod
    def from_polylines(cls, polylines, gridspec: GridSpec = None, ladder: RadiusLadder = None, start: int = 0):
        """
        Synthetic loop set from closed curves (test harness). With a grid, the
        holes are the cells whose centres lie inside each curve.
        """
        loops = tuple(FundamentalLoop(start + k, ccw_polyline(np.asarray(p, dtype=complex))) for k, p in enumerate(polylines))
        holes = ()
        if gridspec is not None:
            centres = gridspec.cell_centers()
            holes = tuple(
                FundamentalHole(loop.index, contains(loop.vertices, centres.ravel()).reshape(centres.shape), gridspec)
                for loop in loops
            )
        return cls(
            loops=loops,
            holes=holes,
            gridspec=gridspec,
            cell_size=gridspec.cell_size if gridspec is not None else 1.0,
            ladder=ladder,
            ladder_id=ladder.ladder_id if ladder is not None else 'synthetic',
        )

    def with_disjointness(self) -> 'FundamentalLoopSet':
        result = find_disjointness_N(self)
        return replace(
            self, N_disjoint=result.N, separations=result.separations,
            resolution_limited=result.resolution_limited,
        )

    def to_dict(self) -> dict:
        return {
            'ladder_id': self.ladder_id,
            'gridspec': self.gridspec.to_dict() if self.gridspec is not None else None,
            'cell_size': self.cell_size,
            'N_disjoint': self.N_disjoint,
            'resolution_limited': self.resolution_limited,
            'separations': {f'{a}-{b}': s for (a, b), s in self.separations.items()},
            'loops': FundamentalLoopSerializer(self.loops, many=True).data,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'FundamentalLoopSet':
        gridspec = None
        if data.get('gridspec'):
            g = data['gridspec']
            gridspec = GridSpec(complex(*g['center']), g['half_width'], g['resolution'], g['depth'], g['level'])
        return cls(
            loops=tuple(FundamentalLoop.from_dict(item) for item in data['loops']),
            gridspec=gridspec,
            cell_size=data.get('cell_size', 1.0),
            ladder_id=data.get('ladder_id', ''),
            N_disjoint=data.get('N_disjoint'),
            resolution_limited=data.get('resolution_limited', False),
        )


def extract_loop_set(spec: EntireFunctionSpec, ladder: RadiusLadder, gridspec: GridSpec, levels: int, threads: int = None) -> FundamentalLoopSet:
    """Classify the same grid at levels 0..levels-1, then extract and trace each hole."""
    if not gridspec.contains_disk(ladder.base_R):
        raise ConfigError(
            f'The grid must contain the disk |z| <= R = {ladder.base_R:g}; '
            f'it spans {gridspec.half_width:g} around {gridspec.center}.',
            R=ladder.base_R,
        )
    holes, loops = [], []
    for n in range(levels):
        gc = classify_grid(spec, ladder, gridspec.with_level(n), threads)
        hole = extract_hole(gc, n)
        holes.append(hole)
        loops.append(trace_loop(hole))

    ls = FundamentalLoopSet(
        loops=tuple(loops),
        holes=tuple(holes),
        gridspec=gridspec,
        cell_size=gridspec.cell_size,
        ladder=ladder,
        ladder_id=ladder.ladder_id,
    )
    if len(loops) >= 2:
        try:
            ls = ls.with_disjointness()
        except DisjointnessNotFound as e:
            logger.warning(f"⚠️ {e}")
    logger.info(f"✅ Extracted {len(loops)} loops (N_disjoint={ls.N_disjoint})")
    return ls
