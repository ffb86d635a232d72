import logging

from periodic_probe.degree import base_point_candidates, polynomial_like_degree
from periodic_probe.evidence import singleton_evidence
from periodic_probe.newton import find_periodic_points
from periodic_probe.serializers import PeriodicSearchSerializer
from runs.commands import SpiderWebCommand

logger = logging.getLogger(__name__)


class Command(SpiderWebCommand):
    help = 'Find periodic points in the grid region; optionally check singleton evidence and the polynomial-like degree.'
    command_name = 'periodic'
    extra_flags = ('period', 'samples', 'loops', 'evidence')

    def add_command_arguments(self, parser):
        parser.add_argument('--period', type=int, help='Period p')
        parser.add_argument('--samples', type=int, help='Loop samples for the degree check')
        parser.add_argument('--loops', help='loops.json; enables the polynomial-like degree check')
        parser.add_argument('--evidence', action='store_true', default=None,
                            help='Gather singleton-component evidence around each repelling point')

    def run(self, config) -> dict:
        spec, gs = config.spec, config.gridspec
        search = find_periodic_points(spec, gs, config['period'], seeds=config['seeds'])
        payload = {'search': PeriodicSearchSerializer(search).data}

        if config['evidence']:
            ladder = config.ladder()
            payload['singleton_evidence'] = [
                singleton_evidence(
                    spec, ladder, record.z0, config['scales'], gridres=config['gridres'],
                    level=config['level'], depth=config['depth'], threads=config['threads'],
                ).to_dict()
                for record in search.records if record.repelling
            ]

        if config['loops']:
            ls = self.loop_set(config, spec, None)
            N = self.stride(config, ls)
            m = ls.indices[0]
            reports = [
                polynomial_like_degree(spec, ls, m, N, complex(b), samples=config['samples'])
                for b in base_point_candidates(ls, m + N, count=5, seed=config['seed'])
            ]
            degrees = sorted({r.degree for r in reports})
            payload['degree'] = {
                'reports': [r.to_dict() for r in reports],
                'base_point_invariant': len(degrees) == 1,
                'degree': degrees[0] if len(degrees) == 1 else None,
            }
            logger.info(f"Degree of f^{N} on H_{m}: {degrees}")
        return self.report(config, payload)
