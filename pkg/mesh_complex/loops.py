"""
Dual 1-chains: homology cycles snapped to dual edges and random cycles.

A dual 1-chain is a real coefficient per dual edge; its boundary is D~0^T.
"""

import logging
from typing import Optional

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import dijkstra

from .complex import CellComplex
from .errors import MeshError

logger = logging.getLogger(__name__)

# winding copies kept in the lifted dual graph
_WIND_X = (-1, 0, 1, 2)
_WIND_Y = (-1, 0, 1)
# initial half-width of the band around the requested line, in dual lengths
BAND_FACTOR = 1.5


def dual_boundary(cx: CellComplex, chain: np.ndarray) -> np.ndarray:
    return cx.dual_incidence[0].T @ np.asarray(chain, dtype=float)


def _dual_edge_windings(tri):
    """Right/left triangles of every planar dual edge and the period vector it crosses."""
    tail, head = tri.edge_right, tri.edge_left
    canon = np.mod(tri.circumcentres, tri.periods)
    disp = tri.dual_segments[:, 1] - tri.dual_segments[:, 0]
    wrap = np.rint((canon[tail] + disp - canon[head]) / tri.periods).astype(np.int64)
    return tail, head, wrap


def _line_distance(coords: np.ndarray, offset: float, period: float) -> np.ndarray:
    gap = np.abs(np.mod(coords, period) - np.mod(offset, period))
    return np.minimum(gap, period - gap)


def _planar_homology_cycle(tri, axis: int, offset: float) -> np.ndarray:
    """
    Shortest dual cycle in the class of `axis` among the dual edges whose
    endpoints lie within a band around the line at `offset`.

    The band starts at BAND_FACTOR dual lengths and doubles until a cycle fits,
    so the loop stays within O(h) of the line.
    """
    if tri.periods is None:
        raise MeshError("homology cycles exist only on periodic meshes")
    period = tri.periods[1 - axis]
    ends = _line_distance(tri.dual_segments[:, :, 1 - axis], offset, period).max(axis=1)
    mids = _line_distance(tri.dual_midpoints[:, 1 - axis], offset, period)
    weight = tri.dual_lengths + mids
    band = BAND_FACTOR * tri.dual_lengths.max()
    while True:
        chain = _snap_cycle(tri, axis, offset, weight, ends <= band)
        if chain is not None:
            logger.debug("Homology cycle along axis %d within %.3g of %.3g", axis, band, offset)
            return chain
        if band >= period:
            raise MeshError("no dual cycle found in the requested homology class")
        band *= 2.0


def _snap_cycle(tri, axis: int, offset: float, weight: np.ndarray, allowed: np.ndarray):
    tail, head, wrap = _dual_edge_windings(tri)
    nT, nE = tri.n_triangles, tri.n_edges
    period = tri.periods[1 - axis]
    canon = np.mod(tri.circumcentres, tri.periods)

    wa_list, wb_list = _WIND_X, _WIND_Y
    nwb = len(wb_list)
    wa = wrap[:, axis]
    wb = wrap[:, 1 - axis]

    def node(t, ia, ib):
        return (ia * nwb + ib) * nT + t

    rows, cols, vals, edge_ids, directions = [], [], [], [], []
    for ia, a in enumerate(wa_list):
        for ib, b in enumerate(wb_list):
            for sign, src, dst, da, db in ((1, tail, head, wa, wb), (-1, head, tail, -wa, -wb)):
                na = a + da
                nb = b + db
                ok = allowed & np.isin(na, wa_list) & np.isin(nb, wb_list)
                ja = np.searchsorted(wa_list, na[ok])
                jb = np.searchsorted(wb_list, nb[ok])
                rows.append(node(src[ok], ia, ib))
                cols.append(node(dst[ok], ja, jb))
                vals.append(weight[ok])
                edge_ids.append(np.nonzero(ok)[0])
                directions.append(np.full(int(ok.sum()), sign))
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)
    edge_ids = np.concatenate(edge_ids)
    directions = np.concatenate(directions)

    n_nodes = nT * len(wa_list) * nwb
    graph = sp.csr_matrix((vals, (rows, cols)), shape=(n_nodes, n_nodes))
    lookup = {(int(r), int(c)): (int(e), int(s)) for r, c, e, s in zip(rows, cols, edge_ids, directions)}

    gap = np.abs(canon[:, 1 - axis] - np.mod(offset, period))
    gap = np.minimum(gap, period - gap)
    start = int(np.lexsort((canon[:, axis], gap))[0])
    zero_b = wb_list.index(0)
    source = node(start, wa_list.index(0), zero_b)
    target = node(start, wa_list.index(1), zero_b)

    _, pred = dijkstra(graph, directed=True, indices=source, return_predecessors=True)
    if pred[target] < 0:
        return None

    chain = np.zeros(nE)
    cur = target
    while cur != source:
        prev = int(pred[cur])
        e, s = lookup[(prev, cur)]
        chain[e] += s
        cur = prev
    return chain


def horizontal_dual_cycle(cx: CellComplex, y0: float = 0.0) -> np.ndarray:
    """Dual 1-cycle winding once in +x near height y0 (layer 0 in 3D)."""
    return homology_cycle(cx, axis=0, offset=y0)


def homology_cycle(cx: CellComplex, axis: int, offset: float = 0.0, layer: int = 0) -> np.ndarray:
    """
    Dual 1-cycle winding once along `axis` (0: x, 1: y, 2: z in 3D).

    The planar cycles are snapped by Dijkstra on the winding-lifted dual graph,
    restricted to a band of dual edges around the line at `offset`.
    """
    if cx.dimension == 2:
        if axis not in (0, 1):
            raise MeshError(f"2D homology axis must be 0 or 1, got {axis}")
        chain = _planar_homology_cycle(cx.layer, axis, offset)
    else:
        ix = cx.extras['index']
        chain = np.zeros(cx.n_dual[1])
        if axis == 2:
            start = int(np.argmin(np.linalg.norm(np.mod(cx.layer.circumcentres, cx.layer.periods), axis=1)))
            chain[ix.tface(start, np.arange(ix.L))] = 1.0
        else:
            planar = _planar_homology_cycle(cx.layer, axis, offset)
            # quad dual edges run left -> right, opposite to the planar dual edges
            chain[ix.qface(np.arange(ix.nE), layer)] = -planar
    residual = np.abs(dual_boundary(cx, chain)).max()
    if residual > 1e-12:
        raise MeshError(f"snapped homology chain is not closed (|boundary| = {residual:.2e})")
    return chain


def homology_basis(cx: CellComplex) -> list:
    if not cx.is_periodic:
        return []
    axes = range(cx.dimension)
    return [homology_cycle(cx, axis) for axis in axes]


def random_dual_cycles(cx: CellComplex, rng: np.random.Generator, count: int = 1,
                       homology: Optional[list] = None) -> np.ndarray:
    """
    Random dual 1-cycles D~1^T c plus random multiples of the homology cycles.

    Returns an array of shape (count, n_dual_edges).
    """
    if homology is None:
        homology = homology_basis(cx)
    n2 = cx.n_dual[2]
    coeffs = rng.standard_normal((count, n2))
    chains = (cx.dual_incidence[1].T @ coeffs.T).T
    for cycle in homology:
        chains += rng.standard_normal((count, 1)) * cycle[None, :]
    logger.info("|-- [OK] Drew %d random dual cycles", count)
    return chains
