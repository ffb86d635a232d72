# escape_classify/raster.py
"""
SWGC raster files.

Header (little endian): magic b'SWGC', uint16 version, float64 centre re/im,
float64 half-width, uint32 resolution, uint32 depth, int32 level. Then one
byte per cell (row-major, row 0 at the bottom) with the cell code, followed
by a plane of one byte per cell holding the decisive step (255 = none).
"""
import logging
import struct
from pathlib import Path

import numpy as np
from django.conf import settings

from core.exceptions import ArtifactIOError
from utils.jsonio import read_json, write_json
from .classify import GridClassification, GridSpec

logger = logging.getLogger(__name__)

MAGIC = b'SWGC'
VERSION = 1
HEADER = struct.Struct('<4sHdddIIi')
NO_STEP = 255


def sidecar_path(path) -> Path:
    return Path(path).with_suffix('.json')


def raster_bytes(gc: GridClassification) -> bytes:
    spec = gc.gridspec
    header = HEADER.pack(
        MAGIC, VERSION, spec.center.real, spec.center.imag, spec.half_width,
        spec.resolution, spec.depth, spec.level,
    )
    steps = np.where(gc.steps < 0, NO_STEP, np.minimum(gc.steps, NO_STEP - 1)).astype(np.uint8)
    return header + gc.codes.astype(np.uint8).tobytes() + steps.tobytes()


def write_raster(gc: GridClassification, path, ladder=None) -> Path:
    """Write the raster and its JSON sidecar ({ladder_id, ladder, depth, level, resolution, evidence})."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(raster_bytes(gc))
    except OSError as e:
        logger.error(f"❌ Could not write raster {path}: {e}", exc_info=True)
        raise ArtifactIOError(f'Could not write raster {path}: {e}', path=str(path))

    write_json(sidecar_path(path), {
        'ladder_id': gc.ladder_id,
        'ladder': ladder.to_dict() if ladder is not None else None,
        'gridspec': gc.gridspec.to_dict(),
        'depth': gc.gridspec.depth,
        'level': gc.gridspec.level,
        'resolution': gc.gridspec.resolution,
        'counts': gc.counts(),
        'evidence': getattr(settings, 'SPIDERWEB_EVIDENCE_BANNER', ''),
    })
    logger.info(f"✅ Raster written to {path}")
    return path


def read_raster(path) -> GridClassification:
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise ArtifactIOError(f'Could not read raster {path}: {e}', path=str(path))
    if len(data) < HEADER.size:
        raise ArtifactIOError(f'{path} is too short to be an SWGC raster.', path=str(path))

    magic, version, cre, cim, hw, res, depth, level = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ArtifactIOError(f'{path} is not an SWGC raster (magic {magic!r}).', path=str(path))
    if version != VERSION:
        raise ArtifactIOError(f'Unsupported SWGC version {version} in {path}.', path=str(path))

    cells = res * res
    body = data[HEADER.size:]
    if len(body) < cells:
        raise ArtifactIOError(f'{path} is truncated: expected {cells} cells.', path=str(path))
    codes = np.frombuffer(body[:cells], dtype=np.uint8).reshape(res, res).copy()
    if len(body) >= 2 * cells:
        raw = np.frombuffer(body[cells:2 * cells], dtype=np.uint8).reshape(res, res)
        steps = np.where(raw == NO_STEP, -1, raw).astype(np.int32)
    else:
        steps = np.full((res, res), -1, dtype=np.int32)

    ladder_id = ''
    if sidecar_path(path).exists():
        ladder_id = read_json(sidecar_path(path)).get('ladder_id') or ''
    gridspec = GridSpec(complex(cre, cim), hw, res, depth, level)
    return GridClassification(gridspec, codes, steps, ladder_id)
