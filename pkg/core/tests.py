from django.core.exceptions import ValidationError
from django.test import SimpleTestCase

from .exceptions import (
    ArtifactIOError, ConfigError, InvalidRadius, LadderTooShort, MsetInsufficient, RefinementExhausted,
    SpiderWebError,
)
from .validators import parse_grid, parse_number, parse_param


class ValidatorTests(SimpleTestCase):
    def test_numbers(self):
        self.assertEqual(parse_number('2'), 2.0)
        self.assertIsInstance(parse_number('-0.5'), float)
        self.assertEqual(parse_number('0.5+0.2j'), 0.5 + 0.2j)
        self.assertEqual(parse_number('1j'), 1j)
        with self.assertRaises(ValidationError):
            parse_number('one')

    def test_grid(self):
        self.assertEqual(
            parse_grid('0,-1.5,6,256'),
            {'center_re': 0.0, 'center_im': -1.5, 'half_width': 6.0, 'resolution': 256},
        )
        for bad in ('0,0,6', '0,0,-6,256', '0,0,6,1', '0,0,6,2.5', None):
            with self.assertRaises(ValidationError):
                parse_grid(bad)

    def test_params(self):
        self.assertEqual(parse_param('lambda=0.5+0.2j'), ('lambda', 0.5 + 0.2j))
        self.assertEqual(parse_param(' a = 2 '), ('a', 2.0))
        self.assertEqual(parse_param('coeffs=0,0,1'), ('coeffs', [0.0, 0.0, 1.0]))
        with self.assertRaises(ValidationError):
            parse_param('lambda')


class ExceptionTests(SimpleTestCase):
    def test_exit_code_families(self):
        self.assertEqual(ConfigError().exit_code, 2)
        self.assertEqual(InvalidRadius().exit_code, 3)
        self.assertEqual(LadderTooShort().exit_code, 3)
        self.assertEqual(MsetInsufficient().exit_code, 4)
        self.assertEqual(RefinementExhausted().exit_code, 4)
        self.assertEqual(ArtifactIOError().exit_code, 5)

    def test_detail_code_and_context(self):
        e = RefinementExhausted('empty at step 3', step=3)
        self.assertIsInstance(e, SpiderWebError)
        self.assertEqual(str(e), 'empty at step 3')
        self.assertEqual(e.code, 'refinement_exhausted')
        self.assertEqual(e.context, {'step': 3})
        self.assertEqual(str(LadderTooShort()), LadderTooShort.default_detail)
