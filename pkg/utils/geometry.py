# utils/geometry.py
"""Polyline helpers shared by the loop, itinerary and degree code.

Polylines are complex NumPy arrays in plane coordinates. A closed polyline
repeats its first vertex at the end.
"""
import numpy as np
from matplotlib.path import Path


def close_polyline(points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=complex)
    if len(points) and points[0] != points[-1]:
        points = np.concatenate([points, points[:1]])
    return points


def signed_area(points: np.ndarray) -> float:
    """Shoelace area; positive for counterclockwise polylines."""
    p = close_polyline(points)
    x, y = p.real, p.imag
    return 0.5 * float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


def polyline_length(points: np.ndarray) -> float:
    p = close_polyline(points)
    return float(np.sum(np.abs(np.diff(p))))


def resample_polyline(points: np.ndarray, count: int) -> np.ndarray:
    """`count` points equally spaced by arclength along a closed polyline (not repeated at the end)."""
    p = close_polyline(points)
    seg = np.abs(np.diff(p))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    if total == 0:
        return np.repeat(p[:1], count)
    s = np.arange(count) * (total / count)
    k = np.clip(np.searchsorted(cum, s, side='right') - 1, 0, len(seg) - 1)
    t = np.where(seg[k] > 0, (s - cum[k]) / np.where(seg[k] > 0, seg[k], 1.0), 0.0)
    return p[k] + t * (p[k + 1] - p[k])


def distance_to_polyline(points: np.ndarray, polyline: np.ndarray, chunk: int = 256) -> np.ndarray:
    """Distance from each point to the nearest segment of a closed polyline."""
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    p = close_polyline(polyline)
    a, b = p[:-1], p[1:]
    ab = b - a
    denom = np.abs(ab) ** 2
    denom = np.where(denom > 0, denom, 1.0)
    out = np.empty(len(pts))
    for start in range(0, len(pts), chunk):
        block = pts[start:start + chunk, None]
        t = np.clip(((block - a) * np.conj(ab)).real / denom, 0.0, 1.0)
        out[start:start + chunk] = np.min(np.abs(block - (a + t * ab)), axis=1)
    return out


def polyline_separation(first: np.ndarray, second: np.ndarray) -> float:
    """Minimum vertex-to-segment distance between two closed polylines, both ways."""
    return float(min(
        distance_to_polyline(first, second).min(),
        distance_to_polyline(second, first).min(),
    ))


def contains(polyline: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Point-in-polygon test for a closed polyline."""
    p = close_polyline(polyline)
    path = Path(np.column_stack([p.real, p.imag]), closed=True)
    pts = np.atleast_1d(np.asarray(points, dtype=complex))
    return path.contains_points(np.column_stack([pts.real, pts.imag]))


def winding_number(curve: np.ndarray, w: complex = 0.0, max_step: float = np.pi / 2) -> tuple:
    """
    Winding number of a closed curve about `w` by angle accumulation.

    Returns (winding, largest_angle_step). A step above `max_step` means the
    curve is too coarsely sampled for the count to be trusted.
    """
    p = close_polyline(curve) - w
    steps = np.angle(p[1:] / p[:-1])
    winding = int(np.rint(np.sum(steps) / (2 * np.pi)))
    largest = float(np.max(np.abs(steps))) if len(steps) else 0.0
    return winding, largest
