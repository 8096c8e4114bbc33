"""Shared numeric oracles for the test suite.

These deliberately use closed forms or dense discretizations rather than
package code paths, so they stay independent of what they check.
"""

from __future__ import annotations

import numpy as np

SQRT2 = np.sqrt(2.0)

# Coefficients of the sphere-union-plane cubic, keyed by exponent, exactly
# as printed in the benchmark's closed form.
SPHERE_PLANE_TERMS = {
    (3, 0, 0): 1.0,
    (2, 1, 0): -1.0,
    (2, 0, 0): -1.0,
    (1, 2, 0): 1.0,
    (1, 0, 2): 1.0,
    (1, 0, 1): -1.0,
    (1, 0, 0): 0.5,
    (0, 3, 0): -1.0,
    (0, 2, 0): 1.0,
    (0, 1, 2): -1.0,
    (0, 1, 1): 1.0,
    (0, 1, 0): -0.5,
}


def singular_circle_points(k: int) -> np.ndarray:
    """k evenly spaced points on the circle where the sphere meets the plane."""
    theta = np.linspace(0.0, 2.0 * np.pi, k, endpoint=False)
    u = 0.5 + np.cos(theta) / (2.0 * SQRT2)
    z = 0.5 + 0.5 * np.sin(theta)
    return np.column_stack([u, u, z])


def distance_to_singular_circle(points: np.ndarray) -> np.ndarray:
    """Distance from each point to a dense polyline of the circle."""
    circle = singular_circle_points(20000)
    d = np.linalg.norm(points[:, None, :] - circle[None, :, :], axis=2)
    return d.min(axis=1)


def distance_to_line(points: np.ndarray, anchor, direction) -> np.ndarray:
    """Euclidean distance from points to the infinite line anchor + t*direction."""
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    diff = points - np.asarray(anchor, dtype=float)
    perp = diff - (diff @ d)[:, None] * d
    return np.linalg.norm(perp, axis=1)
