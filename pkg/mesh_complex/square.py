"""
Bounded square [0, pi]^2 with an acute, boundary-aligned triangulation.

Even rows carry n+1 vertices including both walls; odd rows carry n interior
vertices whose outermost pair is pulled in to p = (a+b)/2 so that the wall
triangles stay acute. Boundary primal edges get dual half-edges flagged in
`dual_boundary_mask`.
"""

import logging

import numpy as np

from .complex import CellComplex, complex_from_triangulation
from .errors import MeshError
from .torus import MAX_PERTURBATION, jitter_vertices
from .triangulation import Triangulation, cross2

logger = logging.getLogger(__name__)

FAMILIES = ('structured', 'perturbed')
SIDE = np.pi


def row_count(n: int) -> int:
    """Even row count nearest 2n/sqrt(3), raised to exceed n."""
    m = 2 * int(round(n / np.sqrt(3.0)))
    while m <= n:
        m += 2
    return m


def square_layout(n: int):
    """Vertices, triangles and a boundary-vertex mask of the structured square."""
    m = row_count(n)
    a, b = SIDE / n, SIDE / m
    p = 0.5 * (a + b)

    rows = []
    ids = []
    boundary = []
    next_id = 0
    for j in range(m + 1):
        if j % 2 == 0:
            xs = np.arange(n + 1) * a
            on_wall = np.zeros(n + 1, dtype=bool)
            on_wall[[0, -1]] = True
            if j in (0, m):
                on_wall[:] = True
        else:
            xs = (np.arange(n) + 0.5) * a
            xs[0], xs[-1] = p, SIDE - p
            on_wall = np.zeros(n, dtype=bool)
        rows.append(np.column_stack([xs, np.full(xs.size, j * b)]))
        ids.append(next_id + np.arange(xs.size))
        boundary.append(on_wall)
        next_id += xs.size

    triangles = []
    for j in range(1, m, 2):
        odd = ids[j]
        for even in (ids[j - 1], ids[j + 1]):
            for i in range(n):
                triangles.append((even[i], even[i + 1], odd[i]))
            for i in range(n - 1):
                triangles.append((even[i + 1], odd[i + 1], odd[i]))
        below, above = ids[j - 1], ids[j + 1]
        triangles.append((below[0], odd[0], above[0]))
        triangles.append((below[n], above[n], odd[n - 1]))

    vertices = np.concatenate(rows)
    triangles = np.asarray(triangles, dtype=np.int64)
    # counterclockwise, as the containment margins of the jitter expect
    coords = vertices[triangles]
    clockwise = cross2(coords[:, 1] - coords[:, 0], coords[:, 2] - coords[:, 0]) < 0.0
    triangles[clockwise] = triangles[clockwise][:, [0, 2, 1]]
    return vertices, triangles, np.concatenate(boundary)


def build_square_dirichlet(n: int, family: str = 'structured', perturbation: float = 0.0,
                           seed: int = 0) -> CellComplex:
    """Non-periodic square complex for the no-slip problem."""
    if family not in FAMILIES:
        raise MeshError(f"unknown square family '{family}' (expected one of {FAMILIES})")
    if n < 4:
        raise MeshError(f"square mesh needs n >= 4, got {n}")
    if not 0.0 <= perturbation < MAX_PERTURBATION:
        raise MeshError(f"perturbation must lie in [0, {MAX_PERTURBATION}), got {perturbation}")

    logger.info("[INFO] Building %s square mesh n=%d (m=%d rows)", family, n, row_count(n))
    vertices, triangles, on_wall = square_layout(n)
    shifts = np.zeros(triangles.shape + (2,), dtype=np.int64)

    if family == 'perturbed' and perturbation > 0.0:
        h0 = (SIDE / row_count(n)) / np.sqrt(3.0)
        rng = np.random.default_rng(seed)
        vertices = jitter_vertices(vertices, triangles, shifts, np.zeros(2),
                                   perturbation * h0, rng, movable=~on_wall, h0=h0)

    tri = Triangulation(vertices, triangles, shifts=shifts, periods=None)
    meta = {'n': n, 'rows': row_count(n), 'seed': seed, 'perturbation': perturbation}
    return complex_from_triangulation(tri, kind='square', family=family, extras=meta)
