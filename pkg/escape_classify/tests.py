import tempfile
from pathlib import Path

import mpmath
import numpy as np
from django.test import SimpleTestCase, override_settings

from core.exceptions import ArtifactIOError, LadderTooShort, OriginNotInComplement
from function_core.families import family_spec
from function_core.ladder import prepare_ladder
from .classify import (
    COMPLEMENT, IN_LEVEL, GridClassification, GridSpec,
    classify_grid, classify_point,
)
from .components import complement_components, spiders_web_verdict
from .raster import raster_bytes, read_raster, sidecar_path, write_raster
from .serializers import PointVerdictSerializer, SpiderWebVerdictSerializer


def annulus_mask(resolution=41, inner=6.0, outer=10.0):
    """Complement = inner disk plus everything outside an in-level ring (cell size 1)."""
    gridspec = GridSpec(0j, resolution / 2.0, resolution)
    r = np.abs(gridspec.cell_centers())
    return (r < inner) | (r > outer)


class ClassifyPointTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.gap = family_spec('cos_cosh')
        cls.ladder = prepare_ladder(cls.gap, 1.0, 16)

    def test_inside_base_disk_fails_immediately(self):
        verdict = classify_point(self.gap, self.ladder, 0.3 + 0.2j, 0, 5)
        self.assertEqual(verdict.status, 'failed_at_step')
        self.assertEqual(verdict.first_failure, 0)

    def test_ladder_riding_on_positive_axis(self):
        for depth in (1, 6, 15):
            verdict = classify_point(self.gap, self.ladder, 1 + 0j, 0, depth)
            self.assertTrue(verdict.in_level, f'depth {depth}: {verdict}')
        self.assertEqual(classify_point(self.gap, self.ladder, 0.999 + 0j, 0, 15).first_failure, 0)

    @override_settings(SPIDERWEB_EVAL_TOLERANCE=1e-2)
    def test_evaluation_tolerance_widens_the_comparison(self):
        self.assertTrue(classify_point(self.gap, self.ladder, 0.995 + 0j, 0, 1).in_level)

    def test_default_tolerance_is_tight(self):
        self.assertEqual(classify_point(self.gap, self.ladder, 0.995 + 0j, 0, 1).first_failure, 0)

    def test_negative_level_matches_high_precision_orbit(self):
        mpmath.mp.dps = 50
        f = lambda x: mpmath.cos(x) + mpmath.cosh(x)
        rungs = [mpmath.mpf(1)]
        for _ in range(3):
            rungs.append(f(rungs[-1]))
        orbit = [mpmath.mpf('0.5')]
        for _ in range(4):
            orbit.append(f(orbit[-1]))
        expected = all(abs(orbit[n]) >= rungs[n - 1] for n in range(1, 5))
        verdict = classify_point(self.gap, self.ladder, 0.5 + 0j, -1, 4)
        self.assertEqual(verdict.in_level, expected)
        self.assertTrue(expected)

    def test_ladder_too_short(self):
        short = prepare_ladder(self.gap, 1.0, 3)
        with self.assertRaises(LadderTooShort):
            classify_point(self.gap, short, 2 + 0j, 1, 3)
        with self.assertRaises(LadderTooShort):
            classify_point(self.gap, short, 2 + 0j, -4, 1)


class ClassifyGridTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.gap = family_spec('cos_cosh')
        cls.exp = family_spec('exp')
        cls.gap_ladder = prepare_ladder(cls.gap, 1.0, 10)
        cls.exp_ladder = prepare_ladder(cls.exp, 1.0, 10)

    def test_grid_inside_base_disk(self):
        gc = classify_grid(self.gap, self.gap_ladder, GridSpec(0j, 0.5, 8, depth=4))
        self.assertTrue(np.all(gc.codes == COMPLEMENT))
        self.assertTrue(np.all(gc.steps == 0))

    def test_cells_straddling_the_base_circle(self):
        # Cell centres at x = 0.75, 1.25 and y = 0, 0.5.
        gc = classify_grid(self.gap, self.gap_ladder, GridSpec(1 + 0.25j, 0.5, 2, depth=6))
        self.assertEqual(gc.verdict((0, 0)).first_failure, 0)
        self.assertEqual(gc.verdict((1, 0)).first_failure, 0)
        self.assertTrue(gc.verdict((0, 1)).in_level)

    def test_exponential_left_half_plane_is_complement(self):
        gridspec = GridSpec(0j, 4.0, 32, depth=8)
        gc = classify_grid(self.exp, self.exp_ladder, gridspec)
        xs, _ = gridspec.axes()
        self.assertTrue(np.all(gc.complement[:, xs < 0]))

    def test_thread_count_does_not_change_output(self):
        gridspec = GridSpec(0.3 - 0.1j, 5.0, 64, depth=6)
        single = classify_grid(self.gap, self.gap_ladder, gridspec, threads=1)
        many = classify_grid(self.gap, self.gap_ladder, gridspec, threads=8)
        self.assertEqual(raster_bytes(single), raster_bytes(many))

    def test_complement_grows_with_depth(self):
        shallow = classify_grid(self.gap, self.gap_ladder, GridSpec(0j, 6.0, 64, depth=3))
        deep = classify_grid(self.gap, self.gap_ladder, GridSpec(0j, 6.0, 64, depth=7))
        self.assertFalse(np.any(shallow.complement & ~deep.complement))

    def test_levels_are_nested(self):
        base = GridSpec(0j, 6.0, 64, depth=5)
        lower = classify_grid(self.gap, self.gap_ladder, base.with_level(0))
        upper = classify_grid(self.gap, self.gap_ladder, base.with_level(1))
        self.assertFalse(np.any(upper.in_level & ~lower.in_level))

    def test_forward_invariance_on_sampled_cells(self):
        gridspec = GridSpec(0j, 6.0, 64, depth=4)
        gc = classify_grid(self.gap, self.gap_ladder, gridspec)
        rows, cols = np.nonzero(gc.codes == IN_LEVEL)
        rng = np.random.default_rng(3)
        picks = rng.choice(len(rows), size=min(100, len(rows)), replace=False)
        centres = gridspec.cell_centers()
        for k in picks:
            image = complex(self.gap.evaluate_array(centres[rows[k], cols[k]]))
            self.assertTrue(classify_point(self.gap, self.gap_ladder, image, 1, 3).in_level)


class ComponentTests(SimpleTestCase):
    def test_all_complement_is_one_unbounded_component(self):
        cm = complement_components(GridClassification.from_mask(np.ones((16, 16), dtype=bool)))
        self.assertEqual(cm.count, 1)
        self.assertEqual(cm.bounded, (False,))

    def test_interior_square_is_bounded(self):
        mask = np.zeros((16, 16), dtype=bool)
        mask[5:9, 6:10] = True
        cm = complement_components(GridClassification.from_mask(mask))
        self.assertEqual(cm.count, 1)
        self.assertEqual(cm.bounded, (True,))

    def test_annulus_gives_inner_bounded_and_outer_unbounded(self):
        gc = GridClassification.from_mask(annulus_mask())
        cm = complement_components(gc)
        self.assertEqual(cm.count, 2)
        inner = cm.label_at(gc.origin_cell())
        self.assertTrue(cm.is_bounded(inner))
        self.assertFalse(cm.is_bounded(cm.label_at((0, 0))))

    def test_diagonal_contact_does_not_join_components(self):
        mask = np.zeros((6, 6), dtype=bool)
        mask[2, 2] = mask[3, 3] = True
        self.assertEqual(complement_components(GridClassification.from_mask(mask)).count, 2)


class VerdictTests(SimpleTestCase):
    def test_synthetic_verdicts(self):
        gc = GridClassification.from_mask(annulus_mask())
        self.assertTrue(spiders_web_verdict(complement_components(gc), gc.origin_cell()).evidence_positive)
        full = GridClassification.from_mask(np.ones((41, 41), dtype=bool))
        verdict = spiders_web_verdict(complement_components(full), full.origin_cell())
        self.assertEqual(verdict.verdict, 'negative_at_depth')

    def test_serialized_verdicts(self):
        gc = GridClassification.from_mask(annulus_mask())
        data = SpiderWebVerdictSerializer(spiders_web_verdict(complement_components(gc), gc.origin_cell())).data
        self.assertEqual(data['verdict'], 'evidence_positive')
        self.assertTrue(data['evidence_positive'])
        self.assertEqual(data['resolution'], 41)
        self.assertIn('evidence, not proof', data['evidence'])
        point = PointVerdictSerializer(gc.verdict(gc.origin_cell())).data
        self.assertEqual(dict(point), {'status': 'failed_at_step', 'step': 0, 'in_level': False})

    def test_origin_in_level_is_an_error(self):
        gc = GridClassification.from_mask(np.zeros((9, 9), dtype=bool))
        with self.assertRaises(OriginNotInComplement):
            spiders_web_verdict(complement_components(gc), gc.origin_cell())

    def test_exponential_control_is_negative(self):
        spec = family_spec('exp')
        gc = classify_grid(spec, prepare_ladder(spec, 1.0, 8), GridSpec(0j, 8.0, 128, depth=8))
        verdict = spiders_web_verdict(complement_components(gc), gc.origin_cell())
        self.assertFalse(verdict.evidence_positive)

    def test_gap_series_is_evidence_positive(self):
        spec = family_spec('cos_cosh')
        gc = classify_grid(spec, prepare_ladder(spec, 1.0, 10), GridSpec(0j, 6.0, 1024, depth=10), threads=4)
        verdict = spiders_web_verdict(complement_components(gc), gc.origin_cell())
        self.assertTrue(verdict.evidence_positive)


class RasterTests(SimpleTestCase):
    def test_write_and_read_back(self):
        spec = family_spec('cos_cosh')
        ladder = prepare_ladder(spec, 1.0, 6)
        gc = classify_grid(spec, ladder, GridSpec(0.5 + 0.5j, 3.0, 24, depth=5, level=1))
        with tempfile.TemporaryDirectory() as tmp:
            path = write_raster(gc, Path(tmp) / 'level1.swgc', ladder)
            self.assertEqual(path.read_bytes()[:4], b'SWGC')
            self.assertTrue(sidecar_path(path).exists())
            back = read_raster(path)
        self.assertEqual(back.gridspec, gc.gridspec)
        self.assertTrue(np.array_equal(back.codes, gc.codes))
        self.assertTrue(np.array_equal(back.steps, gc.steps))
        self.assertEqual(back.ladder_id, ladder.ladder_id)

    def test_bad_magic(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / 'bad.swgc'
            path.write_bytes(b'NOPE' + bytes(64))
            with self.assertRaises(ArtifactIOError):
                read_raster(path)
