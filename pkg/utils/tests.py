import math
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from core.exceptions import ArtifactIOError
from .geometry import (
    close_polyline, contains, distance_to_polyline, polyline_length, polyline_separation, resample_polyline,
    signed_area, winding_number,
)
from .jsonio import jsonable, read_json, render_json, write_json

SQUARE = np.array([0, 1, 1 + 1j, 1j])


def circle(radius, count=256):
    return radius * np.exp(2j * np.pi * np.arange(count) / count)


class GeometryTests(SimpleTestCase):
    def test_closing_is_idempotent(self):
        closed = close_polyline(SQUARE)
        self.assertEqual(len(closed), 5)
        self.assertEqual(len(close_polyline(closed)), 5)

    def test_area_and_length(self):
        self.assertAlmostEqual(signed_area(SQUARE), 1.0)
        self.assertAlmostEqual(signed_area(SQUARE[::-1]), -1.0)
        self.assertAlmostEqual(polyline_length(SQUARE), 4.0)

    def test_resampling_is_even(self):
        points = resample_polyline(SQUARE, 8)
        self.assertEqual(len(points), 8)
        self.assertTrue(np.allclose(np.abs(np.diff(points)), 0.5))

    def test_distances(self):
        self.assertTrue(np.allclose(distance_to_polyline([0.5 + 0.5j, 2 + 0.5j], SQUARE), [0.5, 1.0]))
        self.assertAlmostEqual(polyline_separation(circle(1.0), circle(3.0)), 2.0, places=3)

    def test_contains(self):
        inside = contains(circle(2.0), np.array([0, 1.5j, 3]))
        self.assertEqual(list(inside), [True, True, False])

    def test_winding(self):
        self.assertEqual(winding_number(circle(1.0), 0j)[0], 1)
        self.assertEqual(winding_number(circle(1.0)[::-1], 0j)[0], -1)
        self.assertEqual(winding_number(circle(1.0), 2.0)[0], 0)
        self.assertEqual(winding_number(circle(1.0) ** 2, 0.1j)[0], 2)
        _, step = winding_number(circle(1.0, count=3), 0j)
        self.assertGreater(step, math.pi / 2)


class JsonTests(SimpleTestCase):
    def test_jsonable(self):
        data = {1: np.float64(0.5), 'z': 1 + 2j, 'bad': math.inf, 'arr': np.arange(3)}
        self.assertEqual(jsonable(data), {'1': 0.5, 'z': [1.0, 2.0], 'bad': None, 'arr': [0, 1, 2]})

    def test_write_and_read(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = write_json(Path(tmp) / 'nested' / 'report.json', {'b': 1, 'a': [1j]})
            self.assertEqual(read_json(path), {'b': 1, 'a': [[0.0, 1.0]]})
            self.assertEqual(path.read_bytes(), render_json({'b': 1, 'a': [1j]}))

    def test_read_errors(self):
        with tempfile.TemporaryDirectory() as tmp:
            broken = Path(tmp) / 'broken.json'
            broken.write_text('{not json')
            with self.assertRaises(ArtifactIOError):
                read_json(broken)
            with self.assertRaises(ArtifactIOError):
                read_json(Path(tmp) / 'missing.json')
