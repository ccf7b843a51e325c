"""
Fixed quadrature rules: 5-point Gauss–Legendre on segments, the 7-point
degree-5 rule on triangles.
"""

import numpy as np
from scipy.special import roots_legendre

GAUSS_POINTS = 5

_x, _w = roots_legendre(GAUSS_POINTS)
SEGMENT_NODES = 0.5 * (_x + 1.0)
SEGMENT_WEIGHTS = 0.5 * _w

_s15 = np.sqrt(15.0)
_a1, _b1 = (6.0 - _s15) / 21.0, (9.0 + 2.0 * _s15) / 21.0
_a2, _b2 = (6.0 + _s15) / 21.0, (9.0 - 2.0 * _s15) / 21.0
TRIANGLE_BARYCENTRIC = np.array([
    [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    [_a1, _a1, _b1], [_a1, _b1, _a1], [_b1, _a1, _a1],
    [_a2, _a2, _b2], [_a2, _b2, _a2], [_b2, _a2, _a2],
])
TRIANGLE_WEIGHTS = np.array([
    9.0 / 40.0,
    *([(155.0 - _s15) / 1200.0] * 3),
    *([(155.0 + _s15) / 1200.0] * 3),
])


def segment_rule(segments: np.ndarray):
    """
    Nodes on segments of shape (n, 2, D).

    Returns points (n, q, D) and weights (n, q) that already include the length.
    """
    start, end = segments[:, 0], segments[:, 1]
    points = start[:, None, :] + SEGMENT_NODES[None, :, None] * (end - start)[:, None, :]
    lengths = np.linalg.norm(end - start, axis=1)
    return points, lengths[:, None] * SEGMENT_WEIGHTS[None, :]


def triangle_areas(triangles: np.ndarray) -> np.ndarray:
    e1 = triangles[:, 1] - triangles[:, 0]
    e2 = triangles[:, 2] - triangles[:, 0]
    if triangles.shape[-1] == 2:
        return 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])
    return 0.5 * np.linalg.norm(np.cross(e1, e2), axis=1)


def triangle_rule(triangles: np.ndarray):
    """Nodes on triangles of shape (n, 3, D); weights include the area."""
    points = np.einsum('qc,ncd->nqd', TRIANGLE_BARYCENTRIC, triangles)
    return points, triangle_areas(triangles)[:, None] * TRIANGLE_WEIGHTS[None, :]


def evaluate(field, points: np.ndarray) -> np.ndarray:
    """Evaluate a pointwise field on an (..., D) point array."""
    flat = points.reshape(-1, points.shape[-1])
    values = np.asarray(field(flat), dtype=float)
    return values.reshape(points.shape[:-1] + values.shape[1:])
