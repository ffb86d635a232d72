# runs/reports.py
import logging
from pathlib import Path

from django.conf import settings
from django.db import DatabaseError

from utils.jsonio import jsonable, write_json
from .models import RunRecord

logger = logging.getLogger(__name__)


def build_report(config, command: str, payload: dict, gridspec=None) -> dict:
    """Common report envelope; no timestamps, so equal configs give equal bytes."""
    gridspec = gridspec or config.gridspec
    return {
        'command': command,
        'config_hash': config.config_hash,
        'config': config.canonical(),
        'resolution': gridspec.resolution,
        'depth': gridspec.depth,
        'evidence': getattr(settings, 'SPIDERWEB_EVIDENCE_BANNER', ''),
        **jsonable(payload),
    }


def write_report(config, name: str, report: dict) -> Path:
    return write_json(config.output_dir / name, report)


def summarize(report: dict) -> dict:
    """Scalar fields of a report, small enough for the run archive."""
    return {k: v for k, v in report.items() if isinstance(v, (str, int, float, bool)) or v is None}


def record_run(command: str, config, status: str = 'succeeded', exit_code: int = 0, report: dict = None):
    """Archive one run; a database failure is logged and never fails the command."""
    try:
        record = RunRecord.objects.create(
            command=command,
            config=config.canonical() if config is not None else {},
            config_hash=config.config_hash if config is not None else '',
            status=status,
            exit_code=exit_code,
            output_dir=str(config.output_dir) if config is not None else '',
            report=summarize(report or {}),
        )
    except DatabaseError as e:
        logger.warning(f"⚠️ Could not archive {command} run: {e}")
        return None
    logger.info(f"Archived run {record.pk} ({command}, {status})")
    return record
