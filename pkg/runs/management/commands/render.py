from pathlib import Path

from core.exceptions import ConfigError
from escape_classify.raster import read_raster
from loop_extract.loopset import FundamentalLoopSet
from runs.commands import SpiderWebCommand
from runs.render import render_classification, save_image
from utils.jsonio import read_json


class Command(SpiderWebCommand):
    help = 'Render a stored SWGC raster, optionally with loop overlays, as PPM (and PNG).'
    command_name = 'render'
    extra_flags = ('raster', 'loops', 'png')

    def add_command_arguments(self, parser):
        parser.add_argument('--raster', help='SWGC raster to render')
        parser.add_argument('--loops', help='loops.json to overlay')
        parser.add_argument('--png', action='store_true', default=None, help='Also write a PNG image')

    def run(self, config) -> dict:
        if not config['raster']:
            raise ConfigError('--raster: raster: render needs a raster file.')
        gc = read_raster(config['raster'])
        loops = ()
        if config['loops']:
            loops = FundamentalLoopSet.from_dict(read_json(config['loops'])).loops
        stem = Path(config['raster']).stem
        written = save_image(render_classification(gc, loops), config.output_dir / f'{stem}_render', config['png'])
        return self.report(config, {
            'raster': Path(config['raster']).name,
            'images': [p.name for p in written],
            'loops': len(loops),
            'ladder_id': gc.ladder_id,
        }, gridspec=gc.gridspec)
