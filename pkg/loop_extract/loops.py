# loop_extract/loops.py
"""Marching-squares tracing of the outer boundary of a hole."""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage
from skimage import measure

from core.exceptions import UnboundedHole
from utils.geometry import close_polyline, polyline_length, signed_area, winding_number
from .holes import FundamentalHole

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FundamentalLoop:
    """L_n as a closed counterclockwise polyline (first vertex repeated at the end)."""
    index: int
    vertices: np.ndarray = field(repr=False)

    @property
    def length(self) -> float:
        return polyline_length(self.vertices)

    @property
    def winding(self) -> int:
        return winding_number(self.vertices, 0j)[0]

    @property
    def radii(self) -> tuple:
        r = np.abs(self.vertices)
        return float(r.min()), float(r.max())

    @classmethod
    def from_dict(cls, data: dict) -> 'FundamentalLoop':
        vertices = np.array([complex(x, y) for x, y in data['vertices']])
        return cls(int(data['n']), close_polyline(vertices))


def ccw_polyline(vertices: np.ndarray) -> np.ndarray:
    vertices = close_polyline(vertices)
    if signed_area(vertices) < 0:
        vertices = vertices[::-1].copy()
    return vertices


def trace_loop(hole: FundamentalHole) -> FundamentalLoop:
    """
    Outer boundary of the filled hole. Vertices sit on cell edges: a single
    cell traces to the 4-vertex diamond through its edge midpoints.
    """
    if not hole.bounded:
        raise UnboundedHole(f'Hole H_{hole.index} touches the grid boundary.', index=hole.index)

    filled = ndimage.binary_fill_holes(hole.cells)
    padded = np.pad(filled, 1).astype(float)
    # Low values fully connected: the hole itself is traced as a 4-connected region.
    contours = measure.find_contours(padded, 0.5, fully_connected='low')
    outer = max(contours, key=len)

    gs = hole.gridspec
    rows, cols = outer[:, 0] - 1, outer[:, 1] - 1
    x = gs.origin.real + (cols + 0.5) * gs.cell_size
    y = gs.origin.imag + (rows + 0.5) * gs.cell_size
    loop = FundamentalLoop(hole.index, ccw_polyline(x + 1j * y))
    logger.info(f"Traced L_{hole.index}: {len(loop.vertices) - 1} vertices, length {loop.length:.4g}")
    return loop
