from collections import Counter

from itinerary.serializers import ItinerarySerializer
from itinerary.symbols import compute_itineraries, validate_itinerary_rule
from runs.commands import SpiderWebCommand, plain_cell_samples
from utils.jsonio import write_json_lines


class Command(SpiderWebCommand):
    help = 'Build the annulus partition, detect expanding indices and compute sampled itineraries.'
    command_name = 'itinerary'
    extra_flags = ('levels', 'samples', 'loops')

    def add_command_arguments(self, parser):
        parser.add_argument('--levels', type=int, help='Loops to extract when --loops is not given')
        parser.add_argument('--samples', type=int, help='Sampled start points (also samples per index)')
        parser.add_argument('--loops', help='loops.json from the loops command')

    def run(self, config) -> dict:
        spec, ladder = config.spec, config.ladder()
        ls, p, mset = self.partition(config, spec, ladder)
        points = plain_cell_samples(p, config['samples'], config['seed'])
        its = compute_itineraries(spec, p, points, config['depth'], mset.mset)

        rows, violations = [], []
        for it in its:
            check = validate_itinerary_rule(it)
            rows.append({**ItinerarySerializer(it).data, 'rule': check.to_dict()})
            if not check.valid:
                violations.append({'z': it.start, 'symbols': list(it.symbols), **check.to_dict()})
        write_json_lines(config.output_dir / 'itineraries.jsonl', rows)

        return self.report(config, {
            'itineraries_file': 'itineraries.jsonl',
            'stride': p.stride,
            'top_index': p.top_index,
            'geometry': p.geometry(),
            'expanding': mset.to_dict(),
            'samples': len(its),
            'truncations': dict(sorted(Counter(it.truncation for it in its).items())),
            'rule_violations': len(violations),
            'violations': violations[:20],
        })
