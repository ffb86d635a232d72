import logging

from core.exceptions import EvaluationOverflow
from escape_classify.classify import classify_grid
from loop_extract.checks import check_forward_loop_map, check_nesting
from loop_extract.loopset import extract_loop_set
from loop_extract.serializers import LoopSummarySerializer
from runs.commands import SpiderWebCommand
from runs.render import render_classification, save_image
from utils.jsonio import write_json

logger = logging.getLogger(__name__)


class Command(SpiderWebCommand):
    help = 'Extract the fundamental holes and loops, then check nesting, forward mapping and disjointness.'
    command_name = 'loops'
    extra_flags = ('levels', 'samples', 'png')

    def add_command_arguments(self, parser):
        parser.add_argument('--levels', type=int, help='Number of loops L_0.. to extract')
        parser.add_argument('--samples', type=int, help='Samples per loop for the forward-map check')
        parser.add_argument('--png', action='store_true', default=None, help='Also write a PNG overlay')

    def run(self, config) -> dict:
        spec, ladder, gs = config.spec, config.ladder(), config.gridspec
        ls = extract_loop_set(spec, ladder, gs, config['levels'], config['threads'])
        write_json(config.output_dir / 'loops.json', ls.to_dict())

        nesting = check_nesting(ls).to_dict() if len(ls.holes) >= 2 else None
        forward = []
        for m in ls.indices[:-1]:
            try:
                forward.append(check_forward_loop_map(spec, ls, m, config['samples']).to_dict())
            except EvaluationOverflow as e:
                logger.warning(f"⚠️ Forward map of L_{m} skipped: {e}")
                forward.append({'m': m, 'error': str(e)})

        gc = classify_grid(spec, ladder, gs.with_level(0), config['threads'])
        save_image(render_classification(gc, ls.loops), config.output_dir / 'loops', config['png'])

        return self.report(config, {
            'loops_file': 'loops.json',
            'ladder_id': ls.ladder_id,
            'loops': LoopSummarySerializer(ls.loops, many=True).data,
            'N_disjoint': ls.N_disjoint,
            'resolution_limited': ls.resolution_limited,
            'separations': {f'{a}-{b}': s for (a, b), s in ls.separations.items()},
            'nesting': nesting,
            'forward_map': forward,
        })
