import math

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import ConfigError, DisjointnessNotFound, OriginNotInComplement, UnboundedHole
from escape_classify.classify import GridClassification, GridSpec
from function_core.families import family_spec
from function_core.ladder import prepare_ladder
from .checks import check_forward_loop_map, check_nesting, find_disjointness_N
from .holes import extract_hole
from .loops import trace_loop
from .loopset import FundamentalLoopSet, extract_loop_set
from .serializers import FundamentalLoopSerializer


def circle(radius, count=256, center=0j):
    return center + radius * np.exp(2j * np.pi * np.arange(count) / count)


def disk_mask(resolution, radius):
    gridspec = GridSpec(0j, resolution / 2.0, resolution)
    return np.abs(gridspec.cell_centers()) < radius


class HoleTests(SimpleTestCase):
    def test_annulus_hole_is_inner_disk(self):
        gridspec = GridSpec(0j, 20.5, 41)
        r = np.abs(gridspec.cell_centers())
        hole = extract_hole(GridClassification.from_mask((r < 6) | (r > 10), gridspec))
        self.assertTrue(np.array_equal(hole.cells, r < 6))
        self.assertEqual(hole.area_cells, int(np.count_nonzero(r < 6)))
        self.assertTrue(hole.bounded)

    def test_origin_must_be_complement(self):
        with self.assertRaises(OriginNotInComplement):
            extract_hole(GridClassification.from_mask(np.zeros((9, 9), dtype=bool)))


class TraceTests(SimpleTestCase):
    def test_single_cell_traces_to_four_vertices(self):
        mask = np.zeros((9, 9), dtype=bool)
        mask[4, 4] = True
        loop = trace_loop(extract_hole(GridClassification.from_mask(mask)))
        self.assertEqual(len(loop.vertices), 5)
        self.assertEqual(loop.vertices[0], loop.vertices[-1])
        self.assertTrue(np.allclose(np.abs(loop.vertices), 0.5))
        self.assertEqual(loop.winding, 1)

    def test_disk_of_radius_ten_cells(self):
        loop = trace_loop(extract_hole(GridClassification.from_mask(disk_mask(41, 10))))
        self.assertLess(abs(loop.length - 2 * math.pi * 10), 0.15 * 2 * math.pi * 10)
        self.assertEqual(loop.winding, 1)

    def test_hole_touching_the_border(self):
        with self.assertRaises(UnboundedHole):
            trace_loop(extract_hole(GridClassification.from_mask(np.ones((8, 8), dtype=bool))))

    def test_inner_pockets_are_not_traced(self):
        mask = disk_mask(41, 12)
        mask[20, 23] = False
        loop = trace_loop(extract_hole(GridClassification.from_mask(mask)))
        self.assertGreater(np.abs(loop.vertices).min(), 10)

    def test_serialized_loop(self):
        loop = trace_loop(extract_hole(GridClassification.from_mask(disk_mask(21, 4))))
        data = FundamentalLoopSerializer(loop).data
        self.assertTrue(data['closed'])
        self.assertEqual(data['winding'], 1)
        self.assertEqual(data['vertices'][0], data['vertices'][-1])


class SyntheticCheckTests(SimpleTestCase):
    def setUp(self):
        self.grid = GridSpec(0j, 40.0, 80)

    def test_concentric_circles_are_nested(self):
        ls = FundamentalLoopSet.from_polylines([circle(10), circle(20), circle(30)], self.grid)
        self.assertTrue(check_nesting(ls).passed)

    def test_shuffled_masks_fail_with_witness(self):
        ls = FundamentalLoopSet.from_polylines([circle(10), circle(30), circle(20)], self.grid)
        report = check_nesting(ls)
        self.assertFalse(report.passed)
        self.assertGreater(report.entries[1]['outside_next'], 0)
        i, j = report.entries[1]['outside_next_witness']
        self.assertGreater(abs(self.grid.cell_center((i, j))), 19)

    def test_identity_stub_maps_loop_onto_itself(self):
        ls = FundamentalLoopSet.from_polylines([circle(10), circle(10)])
        report = check_forward_loop_map(family_spec('linear', {'a': 1.0}), ls, 0, 512)
        self.assertAlmostEqual(report.distance, 0.0, places=9)

    def test_doubling_stub(self):
        ls = FundamentalLoopSet.from_polylines([circle(10), circle(20)])
        report = check_forward_loop_map(family_spec('linear', {'a': 2.0}), ls, 0, 300)
        self.assertAlmostEqual(report.distance_cells, 0.0, places=9)
        self.assertTrue(report.within_bound)

    def test_forward_map_beyond_the_cell_bound_is_flagged(self):
        ls = FundamentalLoopSet.from_polylines([circle(10), circle(23)])
        report = check_forward_loop_map(family_spec('linear', {'a': 2.0}), ls, 0, 300)
        self.assertAlmostEqual(report.distance_cells, 3.0, places=2)
        self.assertFalse(report.within_bound)
        self.assertFalse(report.to_dict()['within_bound'])
        self.assertTrue(check_forward_loop_map(family_spec('linear', {'a': 2.0}), ls, 0, 300, bound_cells=3.5).within_bound)

    def test_concentric_circles_are_disjoint_at_stride_one(self):
        result = find_disjointness_N(FundamentalLoopSet.from_polylines([circle(10), circle(20), circle(30)]))
        self.assertEqual(result.N, 1)
        self.assertFalse(result.resolution_limited)
        self.assertGreater(min(result.separations.values()), 9)

    def test_interleaved_circles_need_stride_two(self):
        ls = FundamentalLoopSet.from_polylines([circle(10), circle(10.5), circle(20), circle(20.5)])
        self.assertEqual(find_disjointness_N(ls).N, 2)

    def test_close_circles_are_flagged(self):
        result = find_disjointness_N(FundamentalLoopSet.from_polylines([circle(10), circle(11.5)]))
        self.assertEqual(result.N, 1)
        self.assertTrue(result.resolution_limited)

    def test_duplicated_loops_are_never_disjoint(self):
        with self.assertRaises(DisjointnessNotFound):
            find_disjointness_N(FundamentalLoopSet.from_polylines([circle(10), circle(10), circle(10)]))

    def test_round_trip_through_dict(self):
        ls = FundamentalLoopSet.from_polylines([circle(10), circle(20)], self.grid).with_disjointness()
        back = FundamentalLoopSet.from_dict(ls.to_dict())
        self.assertEqual(back.indices, [0, 1])
        self.assertEqual(back.N_disjoint, 1)
        self.assertTrue(np.allclose(back.loop(1).vertices, ls.loop(1).vertices))


class GapSeriesLoopTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.spec = family_spec('cos_cosh')
        cls.ladder = prepare_ladder(cls.spec, 1.0, 12)
        cls.ls = extract_loop_set(cls.spec, cls.ladder, GridSpec(0j, 12.0, 512, depth=8), 3, threads=4)

    def test_every_loop_winds_once_around_the_origin(self):
        self.assertEqual([loop.winding for loop in self.ls.loops], [1, 1, 1])

    def test_loops_pass_outside_the_ladder_circles(self):
        for loop in self.ls.loops:
            self.assertGreaterEqual(loop.radii[0], self.ladder.rung(loop.index) - self.ls.cell_size)

    def test_forward_map_follows_next_loop(self):
        report = check_forward_loop_map(self.spec, self.ls, 0, 512)
        self.assertLess(report.median_cells, 3.0)

    def test_disjointness_separations_exceed_one_cell(self):
        if self.ls.N_disjoint is not None:
            self.assertTrue(all(s > 1.0 for s in self.ls.separations.values()))

    def test_too_small_grid_gives_unbounded_hole(self):
        with self.assertRaises(UnboundedHole):
            extract_loop_set(self.spec, self.ladder, GridSpec(0j, 1.5, 64, depth=4), 1)

    def test_grid_must_contain_the_base_disk(self):
        with self.assertRaises(ConfigError):
            extract_loop_set(self.spec, self.ladder, GridSpec(0j, 0.5, 32, depth=4), 1)
        with self.assertRaises(ConfigError):
            extract_loop_set(self.spec, self.ladder, GridSpec(3 + 0j, 3.5, 32, depth=4), 1)


class GapSeriesNestingTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.spec = family_spec('cos_cosh')
        cls.ladder = prepare_ladder(cls.spec, 1.0, 12)
        # H_3 contains the disk of radius M^3(1) ~ 16.9, so the grid reaches well past it.
        cls.ls = extract_loop_set(cls.spec, cls.ladder, GridSpec(0j, 24.0, 512, depth=8), 4, threads=4)

    def test_holes_zero_to_three_are_nested(self):
        self.assertEqual([hole.index for hole in self.ls.holes], [0, 1, 2, 3])
        report = check_nesting(self.ls)
        self.assertTrue(report.passed, report.entries)
        for entry in report.entries:
            self.assertEqual(entry['disk_missing'], 0)
            self.assertIsNone(entry['disk_witness'])
        self.assertEqual([entry['outside_next'] for entry in report.entries[:-1]], [0, 0, 0])
        self.assertGreater(report.entries[3]['disk_radius'], 16.0)


class GapSeriesForwardMapResolutionTests(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.spec = family_spec('cos_cosh')
        ladder = prepare_ladder(cls.spec, 1.0, 12)
        cls.coarse = extract_loop_set(cls.spec, ladder, GridSpec(0j, 6.0, 1024, depth=10), 3, threads=4)
        cls.fine = extract_loop_set(cls.spec, ladder, GridSpec(0j, 6.0, 2048, depth=10), 3, threads=4)

    def test_distance_shrinks_with_resolution(self):
        for m in (0, 1):
            coarse = check_forward_loop_map(self.spec, self.coarse, m, 512)
            fine = check_forward_loop_map(self.spec, self.fine, m, 512)
            self.assertLessEqual(fine.distance, 0.75 * coarse.distance, f'm={m}: {coarse.distance} -> {fine.distance}')
            self.assertLess(coarse.median_cells, 1.5)
            self.assertIn('within_bound', coarse.to_dict())
