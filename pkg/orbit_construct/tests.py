import math
from unittest import mock

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import ConfigError, MsetInsufficient, NoBranchAvailable, RefinementExhausted
from escape_classify.classify import GridSpec
from function_core.families import family_spec
from function_core.ladder import prepare_ladder
from itinerary.partition import build_partition
from itinerary.symbols import Itinerary, detect_expanding_indices, validate_itinerary_rule
from loop_extract.loopset import FundamentalLoopSet, extract_loop_set
from .generate import (
    BOUNDED_A, BOUNDED_SUBORBIT_B, ESCAPING_C, SLOW_ESCAPE, OrbitTypeParams, branch_pair, escape_schedule,
    generate_itinerary,
)
from .realize import realize_point
from .serializers import OrbitTypeParamsSerializer, RegionChainSerializer
from .verify import modulus_window, verify_orbit_type

CIRCLE_GEOMETRY = [(10.0, 10.0), (20.0, 20.0), (40.0, 40.0), (80.0, 80.0)]


def circle(radius, count=256):
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


def doubling_partition(levels=4, half_width=100.0, resolution=200):
    ls = FundamentalLoopSet.from_polylines([circle(10 * 2 ** k) for k in range(levels)], GridSpec(0j, half_width, resolution))
    return build_partition(ls, 1)


def doubling_ladder():
    """Rungs 6, 12, 24, ..., 384 for z -> 2z."""
    return prepare_ladder(family_spec('linear', {'a': 2.0}), 6.0, 6)


class GenerateTests(SimpleTestCase):
    def test_bounded_orbit_alternates_below_target(self):
        it = generate_itinerary(OrbitTypeParams(BOUNDED_A, j0=2), (0, 3, 7), 8)
        self.assertEqual(it.symbols, (7, 6, 7, 6, 7, 6, 7, 6))
        self.assertEqual(it.truncation, 'constructed')
        self.assertTrue(validate_itinerary_rule(it).valid)
        five = generate_itinerary(OrbitTypeParams(BOUNDED_A, j0=2), (0, 3, 5), 6)
        self.assertEqual(five.symbols, (5, 4, 5, 4, 5, 4))

    def test_bounded_suborbit_resets_at_first_visits(self):
        it = generate_itinerary(OrbitTypeParams(BOUNDED_SUBORBIT_B), (0, 3, 7), 18)
        self.assertEqual(it.symbols, (0, 1, 2, 3, 4, 5, 6, 7, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9))
        self.assertTrue(validate_itinerary_rule(it).valid)

    def test_escaping_schedule_from_the_ladder(self):
        ladder = doubling_ladder()
        self.assertEqual(escape_schedule((0, 1, 2, 3), CIRCLE_GEOMETRY, ladder), [(1, 0), (2, 1), (3, 2), (4, 3), (5, 3), (6, 3)])
        it = generate_itinerary(OrbitTypeParams(ESCAPING_C), (0, 1, 2, 3), 12, geometry=CIRCLE_GEOMETRY, ladder=ladder, top_index=3)
        self.assertEqual(it.symbols, (1, 1, 1, 1, 2, 2, 3, 3, 3, 3, 3, 3))
        self.assertTrue(validate_itinerary_rule(it).valid)

    def test_escaping_itinerary_beyond_the_partition(self):
        with self.assertRaises(MsetInsufficient) as ctx:
            generate_itinerary(OrbitTypeParams(ESCAPING_C), (0, 1, 2, 3), 13, geometry=CIRCLE_GEOMETRY, ladder=doubling_ladder(), top_index=3)
        self.assertEqual(ctx.exception.context['step'], 12)

    def test_slow_escape_waits_for_the_rate(self):
        params = OrbitTypeParams(SLOW_ESCAPE, rate=(15.0, 15.0, 25.0, 25.0, 50.0, 100.0))
        it = generate_itinerary(params, (0, 1, 2, 3), 8, geometry=CIRCLE_GEOMETRY)
        self.assertEqual(it.symbols, (0, 0, 1, 1, 2, 3, 3, 3))
        self.assertTrue(validate_itinerary_rule(it).valid)

    def test_insufficient_mset(self):
        with self.assertRaises(MsetInsufficient):
            generate_itinerary(OrbitTypeParams(BOUNDED_A, j0=2), (0, 3), 8)
        with self.assertRaises(MsetInsufficient):
            generate_itinerary(OrbitTypeParams(BOUNDED_SUBORBIT_B), (0, 3), 8)
        with self.assertRaises(MsetInsufficient):
            generate_itinerary(OrbitTypeParams(ESCAPING_C), (0,), 8, geometry=CIRCLE_GEOMETRY, ladder=doubling_ladder())

    def test_bad_params(self):
        with self.assertRaises(ConfigError):
            OrbitTypeParams(BOUNDED_A, j0=1)
        with self.assertRaises(ConfigError):
            OrbitTypeParams('wandering')
        with self.assertRaises(ConfigError):
            OrbitTypeParams(SLOW_ESCAPE)


class BranchTests(SimpleTestCase):
    def assertBranches(self, pair, step):
        first, second = pair
        self.assertEqual(first.symbols[:step + 1], second.symbols[:step + 1])
        self.assertNotEqual(first.symbols[step + 1], second.symbols[step + 1])
        self.assertTrue(validate_itinerary_rule(first).valid)
        self.assertTrue(validate_itinerary_rule(second).valid)

    def test_bounded_orbit_drops_two(self):
        pair = branch_pair(OrbitTypeParams(BOUNDED_A, j0=2), (0, 3, 7), 0)
        self.assertBranches(pair, 0)
        self.assertEqual(pair[1].symbols[:4], (7, 5, 6, 7))

    def test_bounded_suborbit_resets_to_one(self):
        pair = branch_pair(OrbitTypeParams(BOUNDED_SUBORBIT_B), (0, 3, 7), 7, 12)
        self.assertBranches(pair, 7)
        self.assertEqual(pair[1].symbols[8], 1)

    def test_escaping_orbit_dwells_once_more(self):
        pair = branch_pair(OrbitTypeParams(ESCAPING_C), (0, 1, 2, 3), 3, 10, geometry=CIRCLE_GEOMETRY, ladder=doubling_ladder())
        self.assertBranches(pair, 3)
        self.assertEqual(pair[1].symbols[:7], (1, 1, 1, 1, 1, 2, 3))

    def test_forced_step(self):
        with self.assertRaises(NoBranchAvailable):
            branch_pair(OrbitTypeParams(BOUNDED_A, j0=2), (0, 3, 7), 1)


class RealizeTests(SimpleTestCase):
    def setUp(self):
        self.doubling = family_spec('linear', {'a': 2.0})

    def test_realizes_a_stub_itinerary(self):
        chain = realize_point(self.doubling, doubling_partition(), Itinerary((0, 0, 1, 2, 3)), max_subdiv=1)
        self.assertTrue(chain.self_consistent)
        self.assertEqual(chain.recomputed, (0, 0, 1, 2, 3))
        self.assertEqual(chain.subdivision, 0)
        self.assertTrue(all(count > 0 for count in chain.kept_counts))
        self.assertTrue(2.5 < abs(chain.witness) < 5.0)

    def test_rotation_keeps_the_annulus(self):
        rotation = family_spec('linear', {'a': np.exp(0.7j)})
        chain = realize_point(rotation, doubling_partition(), Itinerary((2, 2, 2, 2)), max_subdiv=0)
        self.assertTrue(chain.self_consistent)
        self.assertTrue(20 < abs(chain.witness) < 40)

    def test_impossible_itinerary(self):
        p = doubling_partition(levels=7, half_width=700.0, resolution=280)
        with self.assertRaises(RefinementExhausted) as ctx:
            realize_point(self.doubling, p, Itinerary((1, 5)), max_subdiv=1)
        self.assertEqual(ctx.exception.context['step'], 0)

    def test_more_subdivision_never_loses_prefix(self):
        p = doubling_partition()
        it = Itinerary((0, 1, 2, 3))
        coarse = realize_point(self.doubling, p, it, max_subdiv=0)
        fine = realize_point(self.doubling, p, it, max_subdiv=2)
        self.assertGreaterEqual(fine.achieved_prefix, coarse.achieved_prefix)

    def test_prefix_length_is_checked(self):
        with self.assertRaises(ConfigError):
            realize_point(self.doubling, doubling_partition(), Itinerary((0, 1)), prefix_len=3)

    def test_serialized_chain(self):
        chain = realize_point(self.doubling, doubling_partition(), Itinerary((0, 1)), max_subdiv=0)
        data = RegionChainSerializer(chain).data
        self.assertEqual(data['symbols'], [0, 1])
        self.assertEqual(len(data['witness']), 2)
        self.assertEqual(data['self_consistent'], chain.self_consistent)


class VerifyTests(SimpleTestCase):
    def setUp(self):
        self.p = doubling_partition()
        self.ladder = doubling_ladder()
        self.doubling = family_spec('linear', {'a': 2.0})
        self.mset = (0, 1, 2, 3)

    def test_rotation_orbit_is_bounded(self):
        rotation = family_spec('linear', {'a': np.exp(0.7j)})
        params = OrbitTypeParams(BOUNDED_A, j0=2)
        self.assertTrue(verify_orbit_type(rotation, self.ladder, 15 + 0j, params, 12, self.p, self.mset).passed)
        outside = verify_orbit_type(rotation, self.ladder, 90 + 0j, params, 12, self.p, self.mset)
        self.assertFalse(outside.passed)
        self.assertEqual(outside.checks['bound_index'], 3)
        self.assertFalse(outside.checks['bound_clamped'])

    def test_twice_inequality_for_a_slow_start(self):
        report = verify_orbit_type(self.doubling, self.ladder, 0.1 + 0j, OrbitTypeParams(ESCAPING_C), 10, self.p, self.mset)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(report.checks['I'], 2)
        self.assertEqual([row['n'] for row in report.checks['twice_inequality']], [2, 4, 6, 8, 10])
        self.assertTrue(report.checks['escaping_trend'])
        self.assertTrue(report.checks['modulus_trend'])

    def test_orbit_stalled_in_one_annulus_is_not_escaping(self):
        stalled = np.array([0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 15, 15j, -15, -15j, 15], dtype=complex)
        with mock.patch('orbit_construct.verify.stride_orbit', return_value=stalled):
            report = verify_orbit_type(self.doubling, self.ladder, 0.1 + 0j, OrbitTypeParams(ESCAPING_C), 10, self.p, self.mset)
        self.assertTrue(report.checks['escaping_trend'])
        self.assertFalse(report.checks['modulus_trend'])
        self.assertEqual(report.checks['trend_moduli'], [15.0] * 5)
        self.assertFalse(report.passed)
        self.assertTrue(any('not increasing' in v for v in report.violations))

    def test_modulus_window_skips_overflow(self):
        window = modulus_window(np.array([1, 2, 3, 4, 5, 6, np.inf], dtype=complex))
        self.assertEqual(window.tolist(), [2.0, 3.0, 4.0, 5.0, 6.0])

    def test_shallow_partition_clamps_the_bound(self):
        rotation = family_spec('linear', {'a': np.exp(0.7j)})
        report = verify_orbit_type(rotation, self.ladder, 15 + 0j, OrbitTypeParams(BOUNDED_A, j0=2), 12, self.p, (0, 1, 3))
        self.assertTrue(report.passed, report.violations)
        self.assertTrue(report.checks['bound_clamped'])
        self.assertEqual(report.checks['bound_index'], 3)

    def test_fast_start_breaks_the_twice_inequality(self):
        report = verify_orbit_type(self.doubling, self.ladder, 15 + 0j, OrbitTypeParams(ESCAPING_C), 10, self.p, self.mset)
        self.assertFalse(report.passed)

    def test_doubling_orbit_never_returns(self):
        report = verify_orbit_type(self.doubling, self.ladder, 3 + 0j, OrbitTypeParams(BOUNDED_SUBORBIT_B), 8, self.p, self.mset)
        self.assertFalse(report.passed)
        self.assertEqual(report.checks['reset_steps'][0], 3)

    def test_slow_escape_under_a_generous_rate(self):
        params = OrbitTypeParams(SLOW_ESCAPE, rate=(1e9,))
        self.assertTrue(verify_orbit_type(self.doubling, self.ladder, 3 + 0j, params, 10, self.p, self.mset).passed)


class SerializerTests(SimpleTestCase):
    def test_params(self):
        serializer = OrbitTypeParamsSerializer(data={'kind': 'escaping_c', 'length': 12})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data['params'], OrbitTypeParams(ESCAPING_C, length=12))

    def test_bad_j0(self):
        self.assertFalse(OrbitTypeParamsSerializer(data={'kind': 'bounded_a', 'j0': 1}).is_valid())


class GapSeriesConstructionTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.spec = family_spec('cos_cosh')
        cls.ladder = prepare_ladder(cls.spec, 1.0, 12)
        cls.ls = extract_loop_set(cls.spec, cls.ladder, GridSpec(0j, 12.0, 512, depth=8), 3, threads=4)

    def setUp(self):
        self.assertIsNotNone(self.ls.N_disjoint, 'no disjointness stride on this grid')
        self.p = build_partition(self.ls, self.ls.N_disjoint, spec=self.spec)

    def test_escape_schedule_stays_under_the_rungs(self):
        schedule = escape_schedule((0, 1, 2), self.p.geometry(), self.ladder)
        self.assertTrue(schedule)
        for i, m in schedule:
            self.assertTrue(math.isfinite(self.ladder.rung(i)))
            if m:
                self.assertLess(self.p.geometry()[m][1], self.ladder.rung(i))

    def test_realizes_a_climbing_prefix(self):
        chain = realize_point(self.spec, self.p, Itinerary((0, 1, 2)), max_subdiv=1)
        self.assertTrue(chain.self_consistent, chain.recomputed)

    def test_bounded_orbit_when_the_indices_allow(self):
        mset = detect_expanding_indices(self.spec, self.p, samples=1024, seed=0).mset
        params = OrbitTypeParams(BOUNDED_A, j0=2, length=8)
        if len(mset) < 3:
            with self.assertRaises(MsetInsufficient):
                generate_itinerary(params, mset, top_index=self.p.top_index)
            return
        it = generate_itinerary(params, mset, top_index=self.p.top_index)
        chain = realize_point(self.spec, self.p, it, max_subdiv=2)
        self.assertTrue(chain.self_consistent, chain.recomputed)
        report = verify_orbit_type(self.spec, self.ladder, chain.witness, params, 8, self.p, mset)
        self.assertTrue(report.passed, report.violations)
