# periodic_probe/degree.py
import logging
from dataclasses import dataclass

import numpy as np
from django.conf import settings

from core.exceptions import BasePointOnCurve, ImageNotClosed
from function_core.families import EntireFunctionSpec, iterate_array
from utils.geometry import close_polyline, resample_polyline, winding_number

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DegreeReport:
    m: int
    N: int
    degree: int
    base_point: complex
    samples: int
    largest_step: float

    @property
    def polynomial_like(self) -> bool:
        return self.degree >= 2

    def to_dict(self) -> dict:
        return {
            'm': self.m,
            'N': self.N,
            'degree': self.degree,
            'base_point': self.base_point,
            'samples': self.samples,
            'largest_step': self.largest_step,
            'polynomial_like': self.polynomial_like,
        }


def base_point_candidates(ls, index: int, count: int = 5, seed: int = 0) -> np.ndarray:
    """Uniform points in the disk of half the smallest radius of loop `index`; all lie inside its hole."""
    radius = 0.5 * float(np.abs(ls.loop(index).vertices).min())
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(count))
    theta = 2 * np.pi * rng.random(count)
    return r * np.exp(1j * theta)


def polynomial_like_degree(spec: EntireFunctionSpec, ls, m: int, N: int, base_point: complex = 0j,
                           samples: int = None) -> DegreeReport:
    """
    Degree of f^N : H_m -> H_(m+N), read off as the winding number of the
    image of L_m about a base point inside H_(m+N).
    """
    samples = samples or getattr(settings, 'SPIDERWEB_CIRCLE_SAMPLES', 4096)
    ls.loop(m + N)
    curve = resample_polyline(ls.loop(m).vertices, samples)
    image = iterate_array(spec, curve, N)
    if not np.all(np.isfinite(image)):
        raise ImageNotClosed(f'f^{N} of loop {m} overflowed.', m=m, N=N)

    segment = 0.5 * float(np.median(np.abs(np.diff(close_polyline(image)))))
    clearance = float(np.min(np.abs(image - base_point)))
    if clearance <= segment:
        raise BasePointOnCurve(
            f'Base point {base_point} is {clearance:.3g} from the image curve (half a typical segment is {segment:.3g}).',
            base_point=base_point,
        )

    degree, largest = winding_number(image, base_point)
    if largest > np.pi / 2:
        raise ImageNotClosed(
            f'Image of loop {m} turns by {largest:.3g} rad between samples; raise the sample count.', m=m, N=N,
        )
    report = DegreeReport(m, N, degree, complex(base_point), samples, largest)
    logger.info(f"{'✅' if report.polynomial_like else '⚠️'} Degree of f^{N} on H_{m}: {degree}")
    return report
