from itinerary.serializers import ItinerarySerializer
from itinerary.symbols import compute_itinerary
from orbit_construct.generate import branch_pair, generate_itinerary
from orbit_construct.realize import realize_point
from orbit_construct.serializers import RegionChainSerializer
from orbit_construct.verify import verify_orbit_type
from runs.commands import SpiderWebCommand


class Command(SpiderWebCommand):
    help = 'Generate an admissible itinerary of the requested orbit type, realise it and verify the orbit.'
    command_name = 'construct'
    extra_flags = ('kind', 'prefix', 'levels', 'samples', 'loops', 'branch_step')

    def add_command_arguments(self, parser):
        parser.add_argument('--kind', help='bounded_a, bounded_suborbit_b, escaping_c or slow_escape')
        parser.add_argument('--prefix', type=int, help='Itinerary prefix length to realise')
        parser.add_argument('--levels', type=int, help='Loops to extract when --loops is not given')
        parser.add_argument('--samples', type=int, help='Samples per index for expanding-index detection')
        parser.add_argument('--loops', help='loops.json from the loops command')
        parser.add_argument('--branch-step', dest='branch_step', type=int, help='Also realise a branch pair at this step')

    def realise(self, config, spec, ladder, p, mset, it) -> dict:
        chain = realize_point(spec, p, it, max_subdiv=config['max_subdiv'])
        depth = min(config['prefix'], len(it))
        verification = verify_orbit_type(spec, ladder, chain.witness, config.orbit_params, depth, p, mset)
        return {
            'itinerary': ItinerarySerializer(it).data,
            'chain': RegionChainSerializer(chain).data,
            'verification': verification.to_dict(),
            'self_consistent': chain.self_consistent,
        }

    def run(self, config) -> dict:
        spec, ladder = config.spec, config.ladder()
        ls, p, expanding = self.partition(config, spec, ladder)
        params = config.orbit_params
        options = dict(geometry=p.geometry(), ladder=ladder, top_index=p.top_index, stride=p.stride)
        it = generate_itinerary(params, expanding.mset, **options)
        payload = {
            'stride': p.stride,
            'expanding': expanding.to_dict(),
            'params': params.to_dict(),
            **self.realise(config, spec, ladder, p, expanding.mset, it),
        }

        step = config['branch_step']
        if step is not None:
            pair = branch_pair(params, expanding.mset, step, **options)
            realised = [self.realise(config, spec, ladder, p, expanding.mset, branch) for branch in pair]
            recomputed = [
                compute_itinerary(spec, p, complex(*r['chain']['witness']), len(branch)).symbols
                for r, branch in zip(realised, pair)
            ]
            payload['branch'] = {
                'step': step,
                'branches': realised,
                'agree_through_step': list(recomputed[0][:step + 1]) == list(recomputed[1][:step + 1]),
                'differ_after_step': (
                    len(recomputed[0]) > step + 1 and len(recomputed[1]) > step + 1
                    and recomputed[0][step + 1] != recomputed[1][step + 1]
                ),
            }
        return self.report(config, payload)
