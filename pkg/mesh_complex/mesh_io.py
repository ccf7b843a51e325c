"""
decflow-mesh v1: self-describing text format for cell complexes.

Layout (one section per header line, counts up front):

    # decflow-mesh
    version 1
    kind <torus|square|prism>
    family <name>
    dimension <2|3>
    periods <px py [pz]>|none
    meta <json>
    vertices <nV>             x y               (layer vertices)
    triangles <nT>            i j k  s0x s0y s1x s1y s2x s2y
    heights <L>               h                 (L = 0 for 2D)
    boundary_edges <nB>       edge id
    incidence <k> <nnz>       row col value     (one block per primal D_k)

Reading rebuilds the complex from vertices, triangles and heights, then checks
every stored incidence triplet against the rebuilt matrices.
"""

import io
import json
import logging
from pathlib import Path
from typing import List, Union

import numpy as np

from .complex import CellComplex, complex_from_triangulation
from .errors import MeshError
from .prism import extrude_prismatic
from .triangulation import Triangulation

logger = logging.getLogger(__name__)

MAGIC = '# decflow-mesh'
FORMAT_VERSION = 1


def _meta_of(cx: CellComplex) -> dict:
    keep = {}
    for key, value in cx.extras.items():
        if isinstance(value, (int, float, str, bool)) and not key.startswith('_'):
            keep[key] = value
    return keep


def _block(fh, array: np.ndarray, fmt: str) -> None:
    if array.size:
        np.savetxt(fh, array, fmt=fmt)


def write_mesh(cx: CellComplex, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tri = cx.layer
    with open(path, 'w', encoding='utf-8') as fh:
        fh.write(f"{MAGIC}\n")
        fh.write(f"version {FORMAT_VERSION}\n")
        fh.write(f"kind {cx.kind}\n")
        fh.write(f"family {cx.family}\n")
        fh.write(f"dimension {cx.dimension}\n")
        if tri.periods is None:
            fh.write("periods none\n")
        else:
            fh.write("periods " + " ".join(f"{p:.17g}" for p in tri.periods) + "\n")
        fh.write(f"meta {json.dumps(_meta_of(cx), sort_keys=True)}\n")

        fh.write(f"vertices {tri.n_vertices}\n")
        _block(fh, tri.vertices, '%.17g')
        fh.write(f"triangles {tri.n_triangles}\n")
        _block(fh, np.column_stack([tri.triangles, tri.shifts.reshape(-1, 6)]), '%d')
        heights = cx.heights if cx.heights is not None else np.zeros(0)
        fh.write(f"heights {heights.size}\n")
        _block(fh, heights[:, None], '%.17g')
        boundary = np.nonzero(cx.dual_boundary_mask)[0]
        fh.write(f"boundary_edges {boundary.size}\n")
        _block(fh, boundary[:, None], '%d')
        for k, mat in enumerate(cx.incidence):
            coo = mat.tocoo()
            order = np.lexsort((coo.col, coo.row))
            triplets = np.column_stack([coo.row[order], coo.col[order], coo.data[order]])
            fh.write(f"incidence {k} {triplets.shape[0]}\n")
            _block(fh, triplets, '%d')
    logger.info("|-- [OK] Mesh written to %s", path)
    return path


class _Reader:
    def __init__(self, lines: List[str]):
        self.lines = lines
        self.pos = 0

    def header(self, key: str) -> List[str]:
        if self.pos >= len(self.lines):
            raise MeshError(f"mesh file truncated: expected '{key}'")
        parts = self.lines[self.pos].split(maxsplit=1 if key == 'meta' else -1)
        if not parts or parts[0] != key:
            raise MeshError(f"mesh file: expected '{key}' at line {self.pos + 1}")
        self.pos += 1
        return parts[1:]

    def table(self, rows: int, cols: int, dtype) -> np.ndarray:
        chunk = self.lines[self.pos:self.pos + rows]
        if len(chunk) != rows:
            raise MeshError("mesh file truncated inside a table")
        self.pos += rows
        if rows == 0:
            return np.zeros((0, cols), dtype=dtype)
        data = np.loadtxt(io.StringIO("\n".join(chunk)), dtype=dtype, ndmin=2)
        if data.shape[1] != cols:
            raise MeshError(f"mesh file: table has {data.shape[1]} columns, expected {cols}")
        return data


def read_mesh(path: Union[str, Path]) -> CellComplex:
    path = Path(path)
    try:
        lines = [ln.rstrip('\n') for ln in path.read_text(encoding='utf-8').splitlines() if ln.strip()]
    except OSError as exc:
        raise MeshError(f"cannot read mesh file {path}: {exc}") from exc
    if not lines or lines[0].strip() != MAGIC:
        raise MeshError(f"{path} is not a decflow-mesh file")

    rd = _Reader(lines)
    rd.pos = 1
    version = int(rd.header('version')[0])
    if version != FORMAT_VERSION:
        raise MeshError(f"unsupported decflow-mesh version {version}")
    kind = rd.header('kind')[0]
    family = rd.header('family')[0]
    dimension = int(rd.header('dimension')[0])
    period_fields = rd.header('periods')
    periods = None if period_fields == ['none'] else np.array([float(p) for p in period_fields])
    meta = json.loads(rd.header('meta')[0])

    n_vertices = int(rd.header('vertices')[0])
    vertices = rd.table(n_vertices, 2, float)
    n_triangles = int(rd.header('triangles')[0])
    cells = rd.table(n_triangles, 9, np.int64)
    n_heights = int(rd.header('heights')[0])
    heights = rd.table(n_heights, 1, float).ravel()
    n_boundary = int(rd.header('boundary_edges')[0])
    boundary = rd.table(n_boundary, 1, np.int64).ravel()

    tri = Triangulation(vertices, cells[:, :3], shifts=cells[:, 3:].reshape(-1, 3, 2),
                        periods=None if periods is None else periods[:2])
    cx = complex_from_triangulation(tri, kind='square' if kind == 'square' else 'torus',
                                    family=family, extras=meta)
    if dimension == 3:
        cx = extrude_prismatic(cx, n_heights, heights)

    for k, mat in enumerate(cx.incidence):
        fields = rd.header('incidence')
        if int(fields[0]) != k:
            raise MeshError(f"mesh file: incidence blocks out of order at D_{k}")
        stored = rd.table(int(fields[1]), 3, np.int64)
        coo = mat.tocoo()
        order = np.lexsort((coo.col, coo.row))
        rebuilt = np.column_stack([coo.row[order], coo.col[order], coo.data[order]])
        if stored.shape != rebuilt.shape or np.any(stored != rebuilt):
            raise MeshError(f"mesh file: stored D_{k} does not match the rebuilt complex")

    if not np.array_equal(np.nonzero(cx.dual_boundary_mask)[0], boundary):
        raise MeshError("mesh file: boundary flags do not match the rebuilt complex")
    logger.info("|-- [OK] Mesh read from %s (%s/%s, d=%d)", path, kind, family, dimension)
    return cx
