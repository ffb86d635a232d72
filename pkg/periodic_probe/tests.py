import numpy as np
from django.test import SimpleTestCase

from core.exceptions import BasePointOnCurve, ConfigError, ImageNotClosed
from escape_classify.classify import GridSpec
from function_core.families import family_spec, iterate_array
from function_core.ladder import prepare_ladder
from loop_extract.loopset import FundamentalLoopSet, extract_loop_set
from .degree import base_point_candidates, polynomial_like_degree
from .evidence import ScaleEvidence, SingletonEvidence, singleton_evidence, surrounding_chain
from .newton import find_periodic_points
from .serializers import PeriodicSearchSerializer

OMEGA = np.exp(2j * np.pi / 3)


def circle(radius, count=256):
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


def ring_mask(gridspec, z0, inner, outer, gap=None):
    offset = gridspec.cell_centers() - z0
    mask = (np.abs(offset) > inner) & (np.abs(offset) < outer)
    if gap is not None:
        mask &= ~(np.abs(np.angle(offset)) < gap)
    return mask


def numerical_multiplier(spec, z, period, h=1e-6):
    forward = iterate_array(spec, np.asarray([z + h, z - h]), period)
    return (forward[0] - forward[1]) / (2 * h)


class PeriodicPointTests(SimpleTestCase):
    def setUp(self):
        self.square = family_spec('poly', {'degree': 2})
        self.region = GridSpec(0j, 2.0, 64)

    def test_fixed_points_of_the_square(self):
        search = find_periodic_points(self.square, self.region, 1)
        self.assertEqual(len(search.records), 2)
        attracting, repelling = search.records
        self.assertAlmostEqual(abs(attracting.z0), 0.0, places=10)
        self.assertAlmostEqual(abs(attracting.multiplier), 0.0, places=8)
        self.assertFalse(attracting.repelling)
        self.assertAlmostEqual(abs(repelling.z0 - 1), 0.0, places=10)
        self.assertAlmostEqual(abs(repelling.multiplier - 2), 0.0, places=8)
        self.assertTrue(repelling.repelling)

    def test_period_two_cycle_of_the_square(self):
        search = find_periodic_points(self.square, self.region, 2)
        self.assertEqual(len(search.records), 1)
        record = search.records[0]
        self.assertAlmostEqual(abs(record.multiplier - 4), 0.0, places=8)
        self.assertEqual(len(record.cycle), 2)
        self.assertAlmostEqual(abs(record.cycle[0] - OMEGA ** 2), 0.0, places=9)
        self.assertAlmostEqual(abs(record.cycle[1] - OMEGA), 0.0, places=9)
        self.assertGreaterEqual(search.non_minimal, 1)

    def test_multiplier_matches_finite_differences(self):
        for period in (1, 2):
            for record in find_periodic_points(self.square, self.region, period).records:
                self.assertLessEqual(record.residual, 1e-10)
                numeric = numerical_multiplier(self.square, record.z0, period)
                self.assertLess(abs(numeric - record.multiplier), 1e-6 * max(1.0, abs(record.multiplier)))

    def test_classification_is_stable_under_tolerance_halving(self):
        loose = find_periodic_points(self.square, self.region, 1, tolerance=1e-10)
        tight = find_periodic_points(self.square, self.region, 1, tolerance=5e-11)
        self.assertEqual([r.repelling for r in loose.records], [r.repelling for r in tight.records])

    def test_bad_period(self):
        with self.assertRaises(ConfigError):
            find_periodic_points(self.square, self.region, 0)

    def test_serialized_search(self):
        data = PeriodicSearchSerializer(find_periodic_points(self.square, self.region, 1)).data
        self.assertEqual(data['period'], 1)
        self.assertEqual(data['records'][1]['p'], 1)
        self.assertTrue(data['records'][1]['repelling'])
        self.assertAlmostEqual(data['records'][1]['multiplier'][0], 2.0, places=8)

    def test_gap_series_has_repelling_fixed_points(self):
        spec = family_spec('cos_cosh')
        search = find_periodic_points(spec, GridSpec(0j, 6.0, 64), 1)
        repelling = [r for r in search.records if r.repelling]
        self.assertTrue(repelling)
        for record in repelling:
            self.assertLess(record.residual, 1e-10)
            numeric = numerical_multiplier(spec, record.z0, 1)
            self.assertLess(abs(numeric - record.multiplier), 1e-6 * abs(record.multiplier))


class SurroundingChainTests(SimpleTestCase):
    def test_rings_at_every_scale(self):
        z0 = 0.3 - 0.2j
        scales = []
        for rho in (0.5, 0.1, 0.02):
            gs = GridSpec(z0, rho, 101)
            surrounded, cells = surrounding_chain(ring_mask(gs, z0, 0.5 * rho, 0.6 * rho), gs, z0, 0.2 * rho, rho)
            self.assertTrue(surrounded)
            self.assertGreater(cells, 0)
            scales.append(ScaleEvidence(rho, 0.2 * rho, surrounded, cells))
        self.assertTrue(SingletonEvidence(z0, tuple(scales), 0, 8, 101).evidence_positive)

    def test_broken_ring_is_inconclusive(self):
        gs = GridSpec(0j, 1.0, 101)
        surrounded, _ = surrounding_chain(ring_mask(gs, 0j, 0.5, 0.6, gap=0.2), gs, 0j, 0.2, 1.0)
        self.assertFalse(surrounded)
        evidence = SingletonEvidence(0j, (ScaleEvidence(1.0, 0.2, True, 10), ScaleEvidence(0.2, 0.04, False, 0)), 0, 8, 101)
        self.assertFalse(evidence.evidence_positive)
        self.assertEqual(evidence.to_dict()['scales'][1]['status'], 'inconclusive')

    def test_ring_outside_the_annulus_does_not_count(self):
        gs = GridSpec(0j, 1.0, 101)
        surrounded, cells = surrounding_chain(ring_mask(gs, 0j, 0.05, 0.15), gs, 0j, 0.2, 1.0)
        self.assertFalse(surrounded)
        self.assertEqual(cells, 0)

    def test_scales_must_decrease(self):
        spec = family_spec('cos_cosh')
        ladder = prepare_ladder(spec, 1.0, 12)
        with self.assertRaises(ConfigError):
            singleton_evidence(spec, ladder, 0j, [0.1, 0.5])


class DegreeTests(SimpleTestCase):
    def setUp(self):
        self.ls = FundamentalLoopSet.from_polylines([circle(1.0, 512), circle(1.5, 512)])

    def test_monomial_degrees(self):
        for degree in (2, 3):
            spec = family_spec('poly', {'degree': degree})
            report = polynomial_like_degree(spec, self.ls, 0, 1)
            self.assertEqual(report.degree, degree)
            self.assertTrue(report.polynomial_like)

    def test_degree_does_not_depend_on_the_base_point(self):
        spec = family_spec('poly', {'degree': 2})
        points = base_point_candidates(self.ls, 1, 5, seed=3)
        self.assertTrue(np.all(np.abs(points) < 0.75))
        self.assertEqual({polynomial_like_degree(spec, self.ls, 0, 1, base_point=w).degree for w in points}, {2})

    def test_base_point_on_the_image(self):
        with self.assertRaises(BasePointOnCurve):
            polynomial_like_degree(family_spec('poly', {'degree': 2}), self.ls, 0, 1, base_point=1 + 0j)

    def test_coarse_sampling(self):
        with self.assertRaises(ImageNotClosed):
            polynomial_like_degree(family_spec('poly', {'degree': 3}), self.ls, 0, 1, samples=8)


class GapSeriesPeriodicTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.spec = family_spec('cos_cosh')
        cls.ladder = prepare_ladder(cls.spec, 1.0, 12)
        cls.ls = extract_loop_set(cls.spec, cls.ladder, GridSpec(0j, 12.0, 512, depth=8), 2, threads=4)

    def test_first_hole_maps_with_degree_at_least_two(self):
        degrees = {
            polynomial_like_degree(self.spec, self.ls, 0, 1, base_point=w).degree
            for w in base_point_candidates(self.ls, 1, 5, seed=0)
        }
        self.assertEqual(len(degrees), 1)
        self.assertGreaterEqual(degrees.pop(), 2)

    def test_repelling_fixed_point_is_surrounded_at_three_scales(self):
        near = -4.7156 - 4.6249j
        search = find_periodic_points(self.spec, GridSpec(near, 0.25, 16), 1)
        repelling = [r for r in search.records if r.repelling and abs(r.z0 - near) < 1e-3]
        self.assertEqual(len(repelling), 1, [r.z0 for r in search.records])
        self.assertGreater(abs(repelling[0].multiplier), 70)

        evidence = singleton_evidence(self.spec, self.ladder, repelling[0].z0, [0.5, 0.1, 0.02], gridres=128, threads=2)
        data = evidence.to_dict()
        self.assertEqual([s['radius'] for s in data['scales']], [0.5, 0.1, 0.02])
        self.assertEqual([s['status'] for s in data['scales']], ['surrounded'] * 3)
        self.assertTrue(data['evidence_positive'])
        self.assertIn('evidence, not proof', data['evidence'])

    def test_evidence_near_the_origin_is_inconclusive(self):
        # The base disk is one complement component, so nothing in level can surround 0.
        evidence = singleton_evidence(self.spec, self.ladder, 0j, [0.5], gridres=64)
        self.assertFalse(evidence.evidence_positive)
        self.assertEqual(evidence.scales[0].status, 'inconclusive')
