import logging

from core.exceptions import OriginNotInComplement
from escape_classify.classify import classify_grid
from escape_classify.components import complement_components, spiders_web_verdict
from escape_classify.raster import write_raster
from escape_classify.serializers import PointVerdictSerializer, SpiderWebVerdictSerializer
from runs.commands import SpiderWebCommand
from runs.render import render_classification, save_image

logger = logging.getLogger(__name__)


class Command(SpiderWebCommand):
    help = "Classify a grid against a level of the fast escaping set and report the spider's web verdict."
    command_name = 'classify'
    extra_flags = ('png',)

    def add_command_arguments(self, parser):
        parser.add_argument('--png', action='store_true', default=None, help='Also write a PNG image')

    def run(self, config) -> dict:
        spec, ladder, gs = config.spec, config.ladder(), config.gridspec
        gc = classify_grid(spec, ladder, gs, config['threads'])
        write_raster(gc, config.output_dir / 'classify.swgc', ladder)
        save_image(render_classification(gc), config.output_dir / 'classify', config['png'])

        origin = gc.origin_cell()
        verdict, note = None, None
        try:
            verdict = SpiderWebVerdictSerializer(spiders_web_verdict(complement_components(gc), origin)).data
        except OriginNotInComplement as e:
            logger.warning(f"⚠️ No verdict: {e}")
            note = str(e)

        return self.report(config, {
            'raster': 'classify.swgc',
            'ladder': ladder.to_dict(),
            'gridspec': gs.to_dict(),
            'counts': gc.counts(),
            'verdict': verdict,
            'verdict_note': note,
            'origin': PointVerdictSerializer(gc.verdict(origin)).data if origin is not None else None,
        })
