# loop_extract/holes.py
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from core.exceptions import OriginNotInComplement
from escape_classify.classify import GridClassification, GridSpec
from escape_classify.components import FOUR_CONNECTED

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FundamentalHole:
    """H_n: the complement component of the level-n grid that contains the origin cell."""
    index: int
    cells: np.ndarray = field(repr=False)
    gridspec: GridSpec = None

    @property
    def area_cells(self) -> int:
        return int(np.count_nonzero(self.cells))

    @property
    def bounded(self) -> bool:
        c = self.cells
        return not (c[0, :].any() or c[-1, :].any() or c[:, 0].any() or c[:, -1].any())


def flood_fill(mask: np.ndarray, seed) -> np.ndarray:
    """4-connected region of `mask` containing `seed`."""
    labels, _ = ndimage.label(mask, structure=FOUR_CONNECTED)
    return labels == labels[tuple(seed)]


def extract_hole(gc: GridClassification, index: int = None) -> FundamentalHole:
    index = gc.gridspec.level if index is None else index
    origin = gc.origin_cell()
    if origin is None or not gc.complement[origin]:
        raise OriginNotInComplement(
            f'Origin cell {origin} is not a complement cell at level {index}.', level=index,
        )
    hole = FundamentalHole(index, flood_fill(gc.complement, origin), gc.gridspec)
    logger.info(f"Hole H_{index}: {hole.area_cells} cells, bounded={hole.bounded}")
    return hole
