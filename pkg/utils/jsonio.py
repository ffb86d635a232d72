# utils/jsonio.py
"""JSON artifacts rendered with DRF's JSONRenderer so every file uses one encoder."""
import logging
import math
from pathlib import Path

import numpy as np
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from core.exceptions import ArtifactIOError

logger = logging.getLogger(__name__)


def jsonable(value):
    """Complex -> [re, im], non-finite floats -> None, NumPy scalars/arrays -> Python."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return [jsonable(value.real), jsonable(value.imag)]
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render_json(data) -> bytes:
    return JSONRenderer().render(jsonable(data), renderer_context={'indent': 2}) + b'\n'


def write_json(path, data) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(render_json(data))
    except OSError as e:
        logger.error(f"❌ Could not write {path}: {e}", exc_info=True)
        raise ArtifactIOError(f'Could not write {path}: {e}', path=str(path))
    return path


def write_json_lines(path, rows) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('wb') as handle:
            for row in rows:
                handle.write(JSONRenderer().render(jsonable(row)) + b'\n')
    except OSError as e:
        logger.error(f"❌ Could not write {path}: {e}", exc_info=True)
        raise ArtifactIOError(f'Could not write {path}: {e}', path=str(path))
    return path


def read_json(path):
    path = Path(path)
    try:
        with path.open('rb') as handle:
            return JSONParser().parse(handle)
    except (OSError, ParseError) as e:
        raise ArtifactIOError(f'Could not read {path}: {e}', path=str(path))
