import math

import mpmath
import numpy as np
from django.test import SimpleTestCase, override_settings

from core.exceptions import ConfigError, EvaluationOverflow, InvalidRadius, LadderTooShort
from .families import derivative, evaluate, family_spec
from .ladder import build_ladder, prepare_ladder, validate_radius
from .modulus import max_modulus, min_modulus, sampled_max_modulus
from .serializers import FunctionSpecSerializer, RadiusLadderSerializer


def cos_cosh_oracle(x):
    mpmath.mp.dps = 40
    return float(mpmath.cos(x) + mpmath.cosh(x))


class EvaluateTests(SimpleTestCase):
    def setUp(self):
        self.gap = family_spec('cos_cosh')
        self.exp = family_spec('exp', {'lambda': 1.0})
        self.square = family_spec('poly', {'degree': 2})

    def test_trivial_values(self):
        self.assertEqual(evaluate(self.gap, 0j), 2.0)
        self.assertEqual(evaluate(self.exp, 0j), 1.0)

    def test_gap_series_against_high_precision(self):
        value = evaluate(self.gap, 1 + 0j)
        self.assertAlmostEqual(value.real, cos_cosh_oracle(1), places=13)
        # cos 1 + cosh 1 = 2.0833829...
        self.assertAlmostEqual(value.real, 2.0833829, places=6)
        self.assertEqual(value.imag, 0.0)

    def test_overflow_is_signalled(self):
        with self.assertRaises(EvaluationOverflow):
            evaluate(self.exp, 800 + 0j)

    def test_derivatives(self):
        self.assertEqual(derivative(self.gap, 0j), 0)
        self.assertAlmostEqual(derivative(self.exp, 1 + 0j).real, math.e, places=12)
        self.assertEqual(derivative(self.square, 1 + 0j), 2)

    def test_derivative_matches_central_differences(self):
        rng = np.random.default_rng(7)
        points = rng.uniform(-3, 3, 20) + 1j * rng.uniform(-3, 3, 20)
        h = 1e-5
        for spec in (self.gap, self.exp, self.square):
            for z in points:
                numeric = (evaluate(spec, z + h) - evaluate(spec, z - h)) / (2 * h)
                exact = derivative(spec, z)
                self.assertLess(abs(numeric - exact), 1e-6 * max(1.0, abs(exact)))

    def test_metadata(self):
        self.assertTrue(self.gap.positive_coefficients)
        self.assertTrue(self.gap.transcendental)
        self.assertFalse(family_spec('exp', {'lambda': -1.0}).positive_coefficients)
        self.assertFalse(self.square.transcendental)

    def test_unknown_family_and_low_degree_are_rejected(self):
        with self.assertRaises(ConfigError):
            family_spec('sine')
        with self.assertRaises(ConfigError):
            family_spec('poly', {'coeffs': [0, 1]})


class ModulusTests(SimpleTestCase):
    def setUp(self):
        self.gap = family_spec('cos_cosh')
        self.exp = family_spec('exp', {'lambda': 1.0})
        self.square = family_spec('poly', {'degree': 2})

    def test_positive_coefficient_oracle(self):
        for r in (0.25, 0.5, 1, 2, 5, 10):
            exact = evaluate(self.gap, complex(r)).real
            self.assertEqual(max_modulus(self.gap, r), exact)
            sampled = sampled_max_modulus(self.gap, r)
            self.assertLess(abs(sampled - exact), 1e-9 * exact)

    def test_max_modulus_examples(self):
        self.assertEqual(max_modulus(self.gap, 0), 2.0)
        self.assertAlmostEqual(max_modulus(self.exp, 3), math.exp(3), places=9)

    def test_sampled_path_for_non_positive_family(self):
        rotated = family_spec('exp', {'lambda': -1.0})
        self.assertLess(abs(max_modulus(rotated, 3) - math.exp(3)), 1e-9 * math.exp(3))

    def test_min_modulus_examples(self):
        self.assertAlmostEqual(min_modulus(self.exp, 2), math.exp(-2), places=10)
        self.assertAlmostEqual(min_modulus(self.square, 1), 1.0, places=10)

    def test_min_modulus_matches_dense_sampling_for_gap_series(self):
        theta = np.linspace(0, 2 * np.pi, 1_000_000, endpoint=False)
        dense = np.abs(self.gap.evaluate_array(2 * np.exp(1j * theta))).min()
        self.assertLessEqual(min_modulus(self.gap, 2), dense * (1 + 1e-9))
        self.assertLess(abs(min_modulus(self.gap, 2) - dense), 1e-8)

    def test_refinement_is_monotone_in_samples(self):
        coarse = sampled_max_modulus(family_spec('exp', {'lambda': 1j}), 2.5, samples=256)
        fine = sampled_max_modulus(family_spec('exp', {'lambda': 1j}), 2.5, samples=4096)
        self.assertGreaterEqual(fine, coarse * (1 - 1e-9))


class LadderTests(SimpleTestCase):
    def test_validate_radius_examples(self):
        self.assertTrue(validate_radius(family_spec('cos_cosh'), 1, 100).passed)
        self.assertTrue(validate_radius(family_spec('exp'), 1, 100).passed)
        failed = validate_radius(family_spec('poly', {'degree': 2}), 0.5, 10)
        self.assertFalse(failed.passed)
        self.assertEqual(failed.witness, 0.5)

    def test_gap_series_ladder(self):
        ladder = prepare_ladder(family_spec('cos_cosh'), 1.0, 2)
        self.assertEqual(ladder.values[0], 1.0)
        self.assertAlmostEqual(ladder.values[1], cos_cosh_oracle(1), places=12)
        self.assertAlmostEqual(ladder.values[2], cos_cosh_oracle(cos_cosh_oracle(1)), places=11)

    def test_exponential_tower(self):
        ladder = prepare_ladder(family_spec('exp'), 1.0, 3)
        self.assertAlmostEqual(ladder.values[1], math.e, places=12)
        self.assertAlmostEqual(ladder.values[2], math.exp(math.e), places=10)
        self.assertLess(abs(ladder.values[3] - math.exp(math.exp(math.e))), 1e-6 * ladder.values[3])

    def test_strictly_increasing_and_truncated_on_overflow(self):
        ladder = prepare_ladder(family_spec('cos_cosh'), 1.0, 8)
        self.assertTrue(all(b > a for a, b in zip(ladder.values, ladder.values[1:])))
        self.assertTrue(ladder.truncated)
        self.assertEqual(ladder.rung(8), math.inf)
        with self.assertRaises(LadderTooShort):
            ladder.rung(9)

    def test_depth_zero_and_missing_certificate(self):
        spec = family_spec('exp')
        self.assertEqual(prepare_ladder(spec, 2.0, 0).values, (2.0,))
        with self.assertRaises(InvalidRadius):
            build_ladder(spec, 1.0, 3, None)
        with self.assertRaises(InvalidRadius):
            build_ladder(family_spec('poly', {'degree': 2}), 0.5, 3, validate_radius(family_spec('poly', {'degree': 2}), 0.5, 10))

    @override_settings(SPIDERWEB_OVERFLOW_THRESHOLD=1e6)
    def test_overflow_threshold_is_configurable(self):
        ladder = prepare_ladder(family_spec('exp'), 1.0, 3)
        self.assertEqual(len(ladder.values), 3)
        self.assertTrue(ladder.truncated)


class SerializerTests(SimpleTestCase):
    def test_function_spec_serializer(self):
        serializer = FunctionSpecSerializer(data={'family': 'exp', 'params': {'lambda': 2.0}})
        self.assertTrue(serializer.is_valid(), serializer.errors)
        self.assertEqual(serializer.validated_data['spec'].params['lambda'], 2.0)
        bad = FunctionSpecSerializer(data={'family': 'exp', 'params': {'mu': 1}})
        self.assertFalse(bad.is_valid())

    def test_ladder_document(self):
        ladder = prepare_ladder(family_spec('exp'), 1.0, 2)
        data = RadiusLadderSerializer(ladder).data
        self.assertEqual(data['function']['family'], 'exp')
        self.assertEqual(data['R'], 1.0)
        self.assertEqual(len(data['values']), 3)
        self.assertTrue(data['certificate']['passed'])
