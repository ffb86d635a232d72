# runs/render.py
"""
Images of a classification: in-level cells shaded by the step at which they
overflowed, complement components in per-label colours, loops drawn on top.
"""
import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from core.exceptions import ArtifactIOError
from escape_classify.classify import COMPLEMENT, GridClassification
from escape_classify.components import complement_components

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RenderSpec:
    scale: int = 1
    show_loops: bool = True
    loop_color: tuple = (230, 40, 40)
    level_color: tuple = (20, 20, 60)
    overflow_color: tuple = (240, 240, 255)


def label_color(label: int) -> tuple:
    digest = hashlib.sha256(str(label).encode('utf-8')).digest()
    # Keep complement colours clear of the dark in-level palette.
    return tuple(64 + b % 192 for b in digest[:3])


def _pixels(gc: GridClassification, rs: RenderSpec) -> np.ndarray:
    res = gc.gridspec.resolution
    rgb = np.empty((res, res, 3), dtype=np.uint8)

    depth = max(1, gc.gridspec.depth)
    t = np.clip(gc.steps, 0, depth).astype(float) / depth
    t[gc.steps < 0] = 0.0
    low, high = np.array(rs.level_color, dtype=float), np.array(rs.overflow_color, dtype=float)
    # Early overflow is bright; cells that never overflowed stay at the base colour.
    shade = np.where(gc.steps[..., None] > 0, high - t[..., None] * (high - low) * 0.8, low)
    rgb[:] = shade.astype(np.uint8)

    cm = complement_components(gc)
    palette = np.array([(0, 0, 0)] + [label_color(label) for label in range(1, cm.count + 1)], dtype=np.uint8)
    complement = gc.codes == COMPLEMENT
    rgb[complement] = palette[cm.labels[complement]]
    return rgb


def render_classification(gc: GridClassification, loops=(), rs: RenderSpec = None) -> Image.Image:
    """A pure function of the classification, the loops and the render spec."""
    rs = rs or RenderSpec()
    gs = gc.gridspec
    # Row 0 of the grid is the bottom of the picture.
    image = Image.fromarray(np.flipud(_pixels(gc, rs)), 'RGB')
    if rs.scale > 1:
        image = image.resize((gs.resolution * rs.scale, gs.resolution * rs.scale), Image.NEAREST)

    if rs.show_loops and loops:
        draw = ImageDraw.Draw(image)
        height = gs.resolution * rs.scale
        for loop in loops:
            local = (loop.vertices - gs.origin) / gs.cell_size * rs.scale
            points = [(float(p.real), float(height - p.imag)) for p in local]
            draw.line(points, fill=rs.loop_color, width=1)
    return image


def save_image(image: Image.Image, path, png: bool = False) -> list:
    """Write `<path>.ppm` and, with png, `<path>.png`; returns the written paths."""
    path = Path(path)
    targets = [(path.with_suffix('.ppm'), 'PPM')]
    if png:
        targets.append((path.with_suffix('.png'), 'PNG'))
    written = []
    for target, fmt in targets:
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            image.save(target, format=fmt)
        except OSError as e:
            logger.error(f"❌ Could not write image {target}: {e}", exc_info=True)
            raise ArtifactIOError(f'Could not write image {target}: {e}', path=str(target))
        written.append(target)
    logger.info(f"✅ Rendered {', '.join(str(p) for p in written)}")
    return written
