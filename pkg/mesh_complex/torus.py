"""
Periodic Delaunay–Voronoi meshes of the flat torus.

The equilateral lattice only closes up on a rectangle of aspect sqrt(3)/2, so
the torus is [0, 2*pi) x [0, sqrt(3)*pi) with n vertices per row and n rows.
"""

import logging

import numpy as np

import settings
from .complex import CellComplex, complex_from_triangulation
from .errors import MeshError
from .triangulation import Triangulation, circumcentres, containment_margins

logger = logging.getLogger(__name__)

FAMILIES = ('equilateral', 'perturbed')
MAX_PERTURBATION = 0.3
ROBUST_MARGIN = 0.02


def torus_periods(n: int) -> np.ndarray:
    a = 2.0 * np.pi / n
    return np.array([2.0 * np.pi, n * a * np.sqrt(3.0) / 2.0])


def lattice_connectivity(n: int):
    """
    Triangles of the n x n periodic equilateral lattice as
    (canonical vertex ids, integer period shifts).
    """
    I, J = np.meshgrid(np.arange(n), np.arange(n), indexing='xy')
    I, J = I.ravel(), J.ravel()
    even = (J % 2) == 0

    corners = []
    # even rows: up (i,j)(i+1,j)(i,j+1), down (i+1,j)(i+1,j+1)(i,j+1)
    # odd rows:  up (i,j)(i+1,j)(i+1,j+1), down (i,j)(i+1,j+1)(i,j+1)
    up_even = [(0, 0), (1, 0), (0, 1)]
    down_even = [(1, 0), (1, 1), (0, 1)]
    up_odd = [(0, 0), (1, 0), (1, 1)]
    down_odd = [(0, 0), (1, 1), (0, 1)]
    for pat_even, pat_odd in ((up_even, up_odd), (down_even, down_odd)):
        tri_i = np.empty((I.size, 3), dtype=np.int64)
        tri_j = np.empty((I.size, 3), dtype=np.int64)
        for c in range(3):
            di = np.where(even, pat_even[c][0], pat_odd[c][0])
            dj = np.where(even, pat_even[c][1], pat_odd[c][1])
            tri_i[:, c] = I + di
            tri_j[:, c] = J + dj
        corners.append((tri_i, tri_j))

    tri_i = np.concatenate([c[0] for c in corners])
    tri_j = np.concatenate([c[1] for c in corners])
    triangles = (tri_j % n) * n + (tri_i % n)
    shifts = np.stack([tri_i // n, tri_j // n], axis=-1)
    return triangles, shifts


def lattice_vertices(n: int) -> np.ndarray:
    a = 2.0 * np.pi / n
    r = a * np.sqrt(3.0) / 2.0
    I, J = np.meshgrid(np.arange(n), np.arange(n), indexing='xy')
    I, J = I.ravel(), J.ravel()
    x = I * a + (J % 2) * 0.5 * a
    y = J * r
    return np.column_stack([x, y])


def _triangle_margins(vertices, triangles, shifts, periods):
    coords = vertices[triangles] + shifts * periods
    return containment_margins(coords, circumcentres(coords))


def jitter_vertices(vertices, triangles, shifts, periods, delta, rng,
                    movable=None, retries=None, h0=None):
    """
    Uniform jitter in [-delta, delta]^2, redrawn per vertex until every
    triangle keeps its circumcentre strictly inside.
    """
    retries = settings.MESH_RETRIES if retries is None else retries
    h0 = delta if h0 is None else h0
    threshold = max(1e-12 * h0, ROBUST_MARGIN * h0)
    if movable is None:
        movable = np.ones(vertices.shape[0], dtype=bool)

    offsets = np.zeros_like(vertices)
    idx = np.nonzero(movable)[0]
    offsets[idx] = rng.uniform(-delta, delta, size=(idx.size, 2))

    for attempt in range(retries + 1):
        jittered = vertices + offsets
        margins = _triangle_margins(jittered, triangles, shifts, periods)
        bad = margins < threshold
        if not np.any(bad):
            logger.info("|-- [OK] Jitter accepted after %d redraw rounds", attempt)
            return jittered
        redraw = np.unique(triangles[bad].ravel())
        redraw = redraw[movable[redraw]]
        if redraw.size == 0:
            break
        offsets[redraw] = rng.uniform(-delta, delta, size=(redraw.size, 2))

    raise MeshError(f"could not keep all triangles acute after {retries} redraw rounds "
                    f"(jitter {delta:.3g} too large)")


def build_torus_mesh(n: int, family: str = 'equilateral', perturbation: float = 0.0,
                     seed: int = 0) -> CellComplex:
    """
    Periodic flat torus complex.

    family='equilateral' gives the exact lattice (centroid proximity and
    reconstruction symmetry hold); family='perturbed' jitters every vertex by
    at most perturbation * h0, h0 = a/sqrt(3) being the lattice dual edge.
    """
    if family not in FAMILIES:
        raise MeshError(f"unknown torus family '{family}' (expected one of {FAMILIES})")
    if n < 4:
        raise MeshError(f"torus mesh needs n >= 4, got {n}")
    if n % 2:
        raise MeshError(f"torus mesh needs an even n for the lattice to close, got {n}")
    if not 0.0 <= perturbation < MAX_PERTURBATION:
        raise MeshError(f"perturbation must lie in [0, {MAX_PERTURBATION}), got {perturbation}")

    logger.info("[INFO] Building %s torus mesh n=%d", family, n)
    periods = torus_periods(n)
    vertices = lattice_vertices(n)
    triangles, shifts = lattice_connectivity(n)

    meta = {'n': n, 'seed': seed, 'perturbation': perturbation}
    if family == 'perturbed' and perturbation > 0.0:
        h0 = (2.0 * np.pi / n) / np.sqrt(3.0)
        rng = np.random.default_rng(seed)
        vertices = jitter_vertices(vertices, triangles, shifts, periods,
                                   perturbation * h0, rng, h0=h0)

    tri = Triangulation(vertices, triangles, shifts=shifts, periods=periods)
    return complex_from_triangulation(tri, kind='torus', family=family, extras=meta)
