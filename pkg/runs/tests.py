import json
import tempfile
from io import StringIO
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase
from PIL import Image

from core.exceptions import ConfigError
from escape_classify.classify import GridClassification, GridSpec
from loop_extract.loopset import FundamentalLoopSet
from utils.jsonio import write_json
from .config import load_run_config, read_flat_config
from .models import RunRecord
from .render import label_color, render_classification

DOUBLING = {'function': 'linear', 'param': ['a=2'], 'radius': 6.0}


def circle(radius, count=256):
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


class ConfigTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def write(self, name, text):
        path = self.dir / name
        path.write_text(text)
        return path

    def test_flat_file(self):
        path = self.write('run.cfg', (
            '# exponential family\n'
            'function = exp\n'
            '\n'
            'param = lambda=0.5+0.2j   # complex\n'
            'radius = 2\n'
            'grid = 0,0,8,128\n'
        ))
        config = load_run_config(path)
        self.assertEqual(config['function'], 'exp')
        self.assertEqual(config['params'], {'lambda': 0.5 + 0.2j})
        self.assertEqual(config['radius'], 2.0)
        self.assertEqual(config.gridspec.resolution, 128)
        self.assertEqual(config['depth'], 8)

    def test_repeated_keys_and_lines(self):
        path = self.write('run.cfg', 'function = poly\nparam = coeffs=0,0,1\nparam = coeffs=1,0,1\n')
        values, lines = read_flat_config(path)
        self.assertEqual(values['param'], ['coeffs=0,0,1', 'coeffs=1,0,1'])
        self.assertEqual(lines['function'], 1)
        self.assertEqual(lines['param:coeffs=1,0,1'], 3)

    def test_precedence(self):
        path = self.write('run.cfg', 'radius = 2\nseed = 5\n')
        overrides = self.write('over.json', json.dumps({'radius': 3, 'scales': [0.4, 0.2]}))
        self.assertEqual(load_run_config(path, overrides)['radius'], 3.0)
        config = load_run_config(path, overrides, {'radius': 4.0, 'seed': None})
        self.assertEqual(config['radius'], 4.0)
        self.assertEqual(config['seed'], 5)
        self.assertEqual(config['scales'], [0.4, 0.2])

    def test_error_points_at_the_line(self):
        path = self.write('run.cfg', 'function = exp\nradius = 2\ndepth = zero\n')
        with self.assertRaises(ConfigError) as ctx:
            load_run_config(path)
        self.assertTrue(str(ctx.exception).startswith(f'{path}:3: depth:'), str(ctx.exception))
        self.assertEqual(ctx.exception.exit_code, 2)

    def test_bad_param_line(self):
        path = self.write('run.cfg', 'function = exp\nparam = lambda\n')
        with self.assertRaises(ConfigError) as ctx:
            load_run_config(path)
        self.assertTrue(str(ctx.exception).startswith(f'{path}:2: param:'), str(ctx.exception))

    def test_unknown_setting(self):
        path = self.write('run.cfg', 'function = exp\ncolour = blue\n')
        with self.assertRaisesMessage(ConfigError, f'{path}:2: colour: unknown setting'):
            load_run_config(path)

    def test_missing_equals(self):
        path = self.write('run.cfg', 'function exp\n')
        with self.assertRaisesMessage(ConfigError, f'{path}:1: expected "key = value"'):
            load_run_config(path)

    def test_flag_errors_name_the_flag(self):
        with self.assertRaises(ConfigError) as ctx:
            load_run_config(cli={'radius': -1.0})
        self.assertTrue(str(ctx.exception).startswith('--radius: radius:'), str(ctx.exception))
        with self.assertRaisesMessage(ConfigError, '--grid: grid:'):
            load_run_config(cli={'grid': '0,0,6'})

    def test_family_parameters_are_checked(self):
        path = self.write('run.cfg', 'function = cos_cosh\nparam = a=2\n')
        with self.assertRaisesMessage(ConfigError, f'{path}:2: params:'):
            load_run_config(path)

    def test_hash_ignores_output_location_only(self):
        a = load_run_config(cli={'out': '/tmp/a', 'threads': 1})
        b = load_run_config(cli={'out': '/tmp/b', 'threads': 4})
        c = load_run_config(cli={'seed': 7})
        self.assertEqual(a.config_hash, b.config_hash)
        self.assertNotEqual(a.config_hash, c.config_hash)
        self.assertEqual(len(a.config_hash), 64)


class RenderTests(SimpleTestCase):
    def test_render_is_pure(self):
        mask = np.zeros((32, 32), dtype=bool)
        mask[8:24, 8:24] = True
        gc = GridClassification.from_mask(mask, GridSpec(0j, 16.0, 32))
        loops = FundamentalLoopSet.from_polylines([circle(6.0)]).loops
        first = render_classification(gc, loops)
        second = render_classification(gc, loops)
        self.assertEqual(first.size, (32, 32))
        self.assertEqual(first.tobytes(), second.tobytes())
        self.assertEqual(first.getpixel((16, 16)), label_color(1))

    def test_rows_are_flipped(self):
        mask = np.zeros((16, 16), dtype=bool)
        mask[0, :] = True
        image = render_classification(GridClassification.from_mask(mask))
        self.assertEqual(image.getpixel((0, 15)), label_color(1))
        self.assertNotEqual(image.getpixel((0, 0)), label_color(1))


class CommandTests(TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def run_command(self, name, **options):
        call_command(name, stdout=StringIO(), **options)
        return json.loads((Path(options['out']) / f'{name}_report.json').read_text())

    def test_classify_is_reproducible(self):
        options = dict(function='cos_cosh', radius=1.0, grid='0,0,6,64', depth=4)
        first = self.run_command('classify', out=str(self.dir / 'a'), **options)
        self.run_command('classify', out=str(self.dir / 'b'), threads=4, **options)

        a, b = self.dir / 'a', self.dir / 'b'
        self.assertEqual((a / 'classify.swgc').read_bytes(), (b / 'classify.swgc').read_bytes())
        self.assertEqual((a / 'classify_report.json').read_bytes(), (b / 'classify_report.json').read_bytes())
        self.assertTrue((a / 'classify.ppm').exists())
        self.assertEqual(json.loads((a / 'classify.json').read_text())['depth'], 4)

        self.assertEqual(first['depth'], 4)
        self.assertEqual(first['resolution'], 64)
        self.assertIn('evidence, not proof', first['evidence'])
        self.assertIsNotNone(first['verdict'])
        self.assertIn(first['verdict']['verdict'], ('evidence_positive', 'negative_at_depth'))
        self.assertEqual(first['origin'], {'status': 'failed_at_step', 'step': 0, 'in_level': False})
        self.assertEqual(RunRecord.objects.filter(command='classify', status='succeeded').count(), 2)
        self.assertEqual(len(set(RunRecord.objects.values_list('config_hash', flat=True))), 1)

    def test_depth_beyond_the_ladder(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('classify', out=str(self.dir), grid='0,0,6,32', depth=20, stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 3)
        record = RunRecord.objects.get()
        self.assertEqual((record.status, record.exit_code), ('failed', 3))

    def test_radius_without_growth(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('classify', out=str(self.dir), function='poly', param=['degree=2'], radius=1.0,
                         grid='0,0,2,32', stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 3)

    def test_invalid_config(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('classify', out=str(self.dir), radius=-1.0, stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('--radius: radius:', str(ctx.exception))
        self.assertEqual(RunRecord.objects.get().exit_code, 2)

    def test_render_from_a_stored_raster(self):
        out = str(self.dir)
        self.run_command('classify', out=out, function='cos_cosh', radius=1.0, grid='0,0,6,48', depth=4)
        report = self.run_command('render', out=out, raster=str(self.dir / 'classify.swgc'), png=True)
        self.assertEqual(report['images'], ['classify_render.ppm', 'classify_render.png'])
        self.assertTrue((self.dir / 'classify_render.ppm').read_bytes().startswith(b'P6'))
        with Image.open(self.dir / 'classify_render.png') as image:
            self.assertEqual(image.size, (48, 48))

    def test_render_needs_a_raster(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('render', out=str(self.dir), stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_missing_raster_is_an_io_error(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('render', out=str(self.dir), raster=str(self.dir / 'nope.swgc'), stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 5)

    def test_loops_and_itineraries_of_the_doubling_map(self):
        out = str(self.dir)
        loops = self.run_command('loops', out=out, grid='0,0,40,160', levels=3, samples=256, **DOUBLING)
        self.assertEqual([loop['n'] for loop in loops['loops']], [0, 1, 2])
        self.assertEqual([loop['winding'] for loop in loops['loops']], [1, 1, 1])
        self.assertEqual(loops['N_disjoint'], 1)
        self.assertTrue(loops['nesting']['passed'])
        for loop, radius in zip(loops['loops'], (6.0, 12.0, 24.0)):
            self.assertAlmostEqual(loop['max_radius'], radius, delta=0.75)

        report = self.run_command('itinerary', out=out, grid='0,0,40,160', samples=200,
                                  loops=str(self.dir / 'loops.json'), **DOUBLING)
        self.assertEqual(report['stride'], 1)
        self.assertEqual(report['top_index'], 2)
        self.assertEqual(report['expanding']['mset'], [0])
        self.assertEqual(report['rule_violations'], 0)
        rows = (self.dir / 'itineraries.jsonl').read_text().splitlines()
        self.assertEqual(len(rows), report['samples'])
        self.assertEqual(len(rows), 200)

    def test_itinerary_report_is_seeded(self):
        options = dict(grid='0,0,40,96', levels=3, samples=40, seed=3, **DOUBLING)
        self.run_command('itinerary', out=str(self.dir / 'a'), **options)
        self.run_command('itinerary', out=str(self.dir / 'b'), **options)
        self.assertEqual(
            (self.dir / 'a' / 'itineraries.jsonl').read_bytes(),
            (self.dir / 'b' / 'itineraries.jsonl').read_bytes(),
        )

    def test_construct_without_expanding_indices(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('construct', out=str(self.dir), grid='0,0,40,96', levels=3, kind='bounded_a',
                         stdout=StringIO(), **DOUBLING)
        self.assertEqual(ctx.exception.returncode, 4)
        record = RunRecord.objects.get(command='construct')
        self.assertEqual(record.report['code'], 'mset_insufficient')

    def test_periodic_points_of_the_square(self):
        report = self.run_command('periodic', out=str(self.dir), function='poly', param=['degree=2'], grid='0,0,2,64')
        records = report['search']['records']
        self.assertEqual(len(records), 2)
        self.assertEqual({r['p'] for r in records}, {1})
        multipliers = sorted(abs(complex(*r['multiplier'])) for r in records)
        self.assertAlmostEqual(multipliers[0], 0.0, places=8)
        self.assertAlmostEqual(multipliers[1], 2.0, places=8)
        self.assertNotIn('singleton_evidence', report)

    def test_periodic_degree_on_stored_loops(self):
        loops = self.dir / 'circles.json'
        write_json(loops, FundamentalLoopSet.from_polylines([circle(1.0), circle(1.5)]).to_dict())
        report = self.run_command('periodic', out=str(self.dir), function='poly', param=['degree=2'],
                                  grid='0,0,2,32', loops=str(loops), stride=1)
        self.assertEqual(report['degree']['degree'], 2)
        self.assertTrue(report['degree']['base_point_invariant'])
        self.assertEqual(len(report['degree']['reports']), 5)
