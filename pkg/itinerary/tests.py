import numpy as np
from django.test import SimpleTestCase

from core.exceptions import InsufficientLoops
from escape_classify.classify import GridSpec
from function_core.families import family_spec, iterate_array
from function_core.ladder import prepare_ladder
from loop_extract.loopset import FundamentalLoopSet, extract_loop_set
from .partition import build_partition
from .serializers import ItinerarySerializer
from .symbols import Itinerary, compute_itineraries, compute_itinerary, detect_expanding_indices, validate_itinerary_rule


def circle(radius, count=256):
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


def doubling_loop_set():
    """Circles of radius 10, 20, 40, 80; z -> 2z maps B_m onto B_(m+1) for m >= 1."""
    return FundamentalLoopSet.from_polylines([circle(10 * 2 ** k) for k in range(4)], GridSpec(0j, 100.0, 200))


class PartitionTests(SimpleTestCase):
    def setUp(self):
        self.p = build_partition(FundamentalLoopSet.from_polylines([circle(10), circle(20), circle(30)]), 1)

    def test_top_index(self):
        self.assertEqual(self.p.top_index, 2)

    def test_examples(self):
        self.assertEqual(self.p.annulus_index(0j).value, 0)
        self.assertTrue(self.p.annulus_index(0j).is_plain)
        self.assertEqual(self.p.annulus_index(15 + 0j).value, 1)
        self.assertEqual(self.p.annulus_index(45 + 3j).kind, 'outside')
        on_loop = self.p.annulus_index(complex(self.p.loops[1].vertices[7]))
        self.assertEqual((on_loop.kind, on_loop.value), ('on_loop', 1))

    def test_band_is_half_a_cell(self):
        self.assertEqual(self.p.annulus_index(20.4 + 0j).kind, 'on_loop')
        self.assertEqual(self.p.annulus_index(20.7 + 0j).value, 2)

    def test_index_is_consistent_with_containment(self):
        rng = np.random.default_rng(11)
        points = rng.uniform(-32, 32, 400) + 1j * rng.uniform(-32, 32, 400)
        kinds, values = self.p.classify_points(points)
        for z, kind, value in zip(points, kinds, values):
            if kind == 0:
                inner = self.p.annulus_index(z * 0.5)
                self.assertTrue(inner.kind == 'on_loop' or inner.value <= value)

    def test_index_is_constant_inside_cells_away_from_loops(self):
        gs = self.p.sample_grid
        rng = np.random.default_rng(5)
        for cell in [(10, 10), (128, 128), (100, 200), (40, 180)]:
            corners = gs.cell_center(cell) + gs.cell_size * np.array([-0.5 - 0.5j, 0.5 - 0.5j, -0.5 + 0.5j, 0.5 + 0.5j])
            if min(abs(abs(corners) - r).min() for r in (10, 20, 30)) < 1.0:
                continue
            inner = gs.cell_center(cell) + gs.cell_size * (rng.random(20) - 0.5 + 1j * (rng.random(20) - 0.5))
            kinds, values = self.p.classify_points(inner)
            self.assertEqual(len(set(zip(kinds, values))), 1)

    def test_too_few_loops_at_stride(self):
        with self.assertRaises(InsufficientLoops):
            build_partition(FundamentalLoopSet.from_polylines([circle(10), circle(20), circle(30)]), 2)


class ExpandingIndexTests(SimpleTestCase):
    def test_doubling_stub_has_no_expanding_index_beyond_zero(self):
        p = build_partition(doubling_loop_set(), 1)
        found = detect_expanding_indices(family_spec('linear', {'a': 2.0}), p, samples=256, seed=1)
        self.assertEqual(found.mset, (0,))
        self.assertTrue(all(found.confidence[m] == 0.0 for m in (1, 2, 3)))

    def test_rotation_stub_makes_every_index_expanding(self):
        p = build_partition(doubling_loop_set(), 1)
        rotation = family_spec('linear', {'a': np.exp(0.7j)})
        self.assertEqual(detect_expanding_indices(rotation, p, samples=128).mset, (0, 1, 2, 3))

    def test_detection_is_seeded(self):
        p = build_partition(doubling_loop_set(), 1)
        rotation = family_spec('linear', {'a': np.exp(0.7j)})
        first = detect_expanding_indices(rotation, p, samples=64, seed=9)
        second = detect_expanding_indices(rotation, p, samples=64, seed=9)
        self.assertEqual(first.confidence, second.confidence)


class ItineraryTests(SimpleTestCase):
    def setUp(self):
        self.doubling = family_spec('linear', {'a': 2.0})
        self.p = build_partition(doubling_loop_set(), 1)

    def test_origin(self):
        self.assertEqual(compute_itinerary(self.doubling, self.p, 0j, 1).symbols, (0,))

    def test_hand_computed_stub_sequence(self):
        it = compute_itinerary(self.doubling, self.p, 5 + 3j, 10)
        self.assertEqual(it.symbols, (0, 1, 2, 3))
        self.assertEqual(it.truncation, 'outside')
        self.assertTrue(validate_itinerary_rule(it).valid)

    def test_start_on_loop(self):
        it = compute_itinerary(self.doubling, self.p, 10 + 0j, 4)
        self.assertEqual(it.symbols, ())
        self.assertEqual(it.truncation, 'start_not_plain')

    def test_shift_property(self):
        z = np.array([4.1 + 1.3j])
        head = compute_itinerary(self.doubling, self.p, z[0], 6)
        tail = compute_itinerary(self.doubling, self.p, iterate_array(self.doubling, z, 1)[0], 6)
        self.assertEqual(head.symbols[1:], tail.symbols[:len(head.symbols) - 1])

    def test_serialized_itinerary(self):
        data = ItinerarySerializer(compute_itinerary(self.doubling, self.p, 5 + 3j, 10)).data
        self.assertEqual(data['z'], [5.0, 3.0])
        self.assertEqual(data['symbols'], [0, 1, 2, 3])
        self.assertEqual(data['mset'], [0])


class RuleTests(SimpleTestCase):
    def test_examples(self):
        self.assertTrue(validate_itinerary_rule(Itinerary((0, 1, 2, 3), mset=(0,))).valid)
        check = validate_itinerary_rule(Itinerary((5, 7), mset=(0,)))
        self.assertFalse(check.valid)
        self.assertEqual(check.index, 0)
        self.assertTrue(validate_itinerary_rule(Itinerary((4, 0), mset=(0, 4))).valid)

    def test_expanding_index_may_not_jump_two(self):
        self.assertFalse(validate_itinerary_rule(Itinerary((3, 5), mset=(0, 3))).valid)
        self.assertTrue(validate_itinerary_rule(Itinerary((3, 4, 5), mset=(0, 3))).valid)

    def test_explicit_mset_overrides(self):
        self.assertTrue(validate_itinerary_rule(Itinerary((2, 1)), mset={0, 2}).valid)


class GapSeriesItineraryTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.spec = family_spec('cos_cosh')
        ladder = prepare_ladder(cls.spec, 1.0, 12)
        cls.ls = extract_loop_set(cls.spec, ladder, GridSpec(0j, 12.0, 512, depth=8), 3, threads=4)

    def setUp(self):
        self.assertIsNotNone(self.ls.N_disjoint, 'no disjointness stride on this grid')
        self.p = build_partition(self.ls, self.ls.N_disjoint, spec=self.spec)

    def test_real_axis_between_first_loops(self):
        self.assertEqual(self.p.annulus_index(1.5 + 0j).value, 1)
        self.assertEqual(self.p.annulus_index(0j).value, 0)

    def test_random_itineraries_obey_the_rule(self):
        mset = detect_expanding_indices(self.spec, self.p, samples=2048, seed=0).mset
        rng = np.random.default_rng(2024)
        rows, cols = np.nonzero(self.p.cell_kind == 0)
        picks = rng.choice(len(rows), size=1000, replace=False)
        gs = self.p.sample_grid
        points = gs.origin + ((cols[picks] + rng.random(1000)) + 1j * (rows[picks] + rng.random(1000))) * gs.cell_size
        itineraries = [it for it in compute_itineraries(self.spec, self.p, points, 6, mset) if it.symbols]
        self.assertGreater(len(itineraries), 900)
        failures = [(it.start, it.symbols) for it in itineraries if not validate_itinerary_rule(it).valid]
        self.assertEqual(failures, [])

    def test_positive_axis_point_climbs(self):
        it = compute_itinerary(self.spec, self.p, 1.2 + 0j, 8)
        self.assertEqual(list(it.symbols), sorted(set(it.symbols)))
        self.assertIn(it.truncation, ('outside', 'overflow'))
