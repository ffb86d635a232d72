# runs/commands.py
"""Shared plumbing for the pipeline management commands."""
import logging

import numpy as np
from django.core.management.base import BaseCommand, CommandError

from core.exceptions import ConfigError, DisjointnessNotFound, SpiderWebError
from itinerary.partition import PLAIN, build_partition
from itinerary.symbols import detect_expanding_indices
from loop_extract.loopset import FundamentalLoopSet, extract_loop_set
from utils.jsonio import read_json
from .config import load_run_config
from .reports import build_report, record_run, write_report

logger = logging.getLogger(__name__)

# Flag name -> config key, for the flags every command accepts.
COMMON_FLAGS = {
    'function': 'function',
    'param': 'param',
    'radius': 'radius',
    'level': 'level',
    'depth': 'depth',
    'grid': 'grid',
    'stride': 'stride',
    'out': 'out',
    'threads': 'threads',
    'seed': 'seed',
}


class SpiderWebCommand(BaseCommand):
    """
    Loads the run config (flat file < JSON overrides < flags), runs the
    command, writes `<name>_report.json` and archives the run.
    """
    command_name = ''
    extra_flags = ()

    def add_arguments(self, parser):
        parser.add_argument('--config', help='Flat key = value config file')
        parser.add_argument('--overrides', help='JSON file of overrides')
        parser.add_argument('--function', help='Function family id')
        parser.add_argument('--param', action='append', help='Function parameter name=value (repeatable)')
        parser.add_argument('--radius', type=float, help='Base radius R')
        parser.add_argument('--level', type=int, help='Level L')
        parser.add_argument('--depth', type=int, help='Iteration depth')
        parser.add_argument('--grid', help='Grid as cx,cy,hw,res')
        parser.add_argument('--stride', type=int, help='Stride N (default: the disjointness stride)')
        parser.add_argument('--out', help='Output directory')
        parser.add_argument('--threads', type=int, help='Worker threads')
        parser.add_argument('--seed', type=int, help='Random seed')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def cli_values(self, options) -> dict:
        keys = list(COMMON_FLAGS.values()) + list(self.extra_flags)
        return {key: options.get(key) for key in keys}

    def run(self, config) -> dict:
        raise NotImplementedError

    def handle(self, *args, **options):
        config = None
        try:
            config = load_run_config(options.get('config'), options.get('overrides'), self.cli_values(options))
            report = self.run(config)
            write_report(config, f'{self.command_name}_report.json', report)
        except SpiderWebError as e:
            logger.error(f"❌ {self.command_name} failed ({e.code}): {e}")
            record_run(self.command_name, config, 'failed', e.exit_code, {'error': str(e), 'code': e.code})
            raise CommandError(str(e), returncode=e.exit_code)
        except Exception as e:
            logger.error(f"❌ {self.command_name} failed unexpectedly: {e}", exc_info=True)
            record_run(self.command_name, config, 'failed', 1, {'error': str(e)})
            raise

        record_run(self.command_name, config, 'succeeded', 0, report)
        self.stdout.write(self.style.SUCCESS(
            f"{self.command_name} finished: {config.output_dir / f'{self.command_name}_report.json'}"
        ))

    def report(self, config, payload: dict, gridspec=None) -> dict:
        return build_report(config, self.command_name, payload, gridspec)

    # Shared pipeline steps

    def loop_set(self, config, spec, ladder):
        """Loops from --loops, or extracted from the config grid."""
        if config['loops']:
            ls = FundamentalLoopSet.from_dict(read_json(config['loops']))
            logger.info(f"Loaded {len(ls.loops)} loops from {config['loops']}")
            return ls
        return extract_loop_set(spec, ladder, config.gridspec, config['levels'], config['threads'])

    def stride(self, config, ls) -> int:
        N = config['stride'] or ls.N_disjoint
        if N is None:
            raise DisjointnessNotFound('No disjointness stride was found for these loops; pass --stride.')
        return N

    def partition(self, config, spec, ladder):
        ls = self.loop_set(config, spec, ladder)
        p = build_partition(ls, self.stride(config, ls), spec)
        mset = detect_expanding_indices(spec, p, samples=config['samples'], seed=config['seed'])
        return ls, p, mset


def plain_cell_samples(p, count: int, seed: int) -> np.ndarray:
    """`count` seeded points, each drawn inside a distinct sample cell with a plain index."""
    cells = np.argwhere(p.cell_kind == PLAIN)
    if not len(cells):
        raise ConfigError('The sample grid has no cells with a plain index.')
    rng = np.random.default_rng(seed)
    chosen = cells[np.sort(rng.choice(len(cells), min(count, len(cells)), replace=False))]
    offsets = rng.random((len(chosen), 2))
    gs = p.sample_grid
    return gs.origin + ((chosen[:, 1] + offsets[:, 0]) + 1j * (chosen[:, 0] + offsets[:, 1])) * gs.cell_size
