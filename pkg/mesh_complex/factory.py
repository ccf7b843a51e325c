"""
Mesh spec strings.

    torus:equilateral:<n>
    torus:perturbed:<n>:<perturbation>
    prism:<torus family>:<n>:<layers>[:<perturbation>]
    square:structured:<n>
    square:perturbed:<n>:<perturbation>
"""

from dataclasses import dataclass, replace
from typing import Optional

from .complex import CellComplex
from .errors import MeshError
from .prism import extrude_prismatic
from .square import build_square_dirichlet
from .torus import build_torus_mesh

KINDS = ('torus', 'prism', 'square')
DEFAULT_PERTURBATION = 0.15


@dataclass(frozen=True)
class MeshSpec:
    kind: str
    family: str
    n: int
    layers: Optional[int] = None
    perturbation: float = 0.0

    def with_resolution(self, n: int) -> 'MeshSpec':
        layers = self.layers
        if layers is not None and self.n:
            layers = max(2, round(layers * n / self.n))
        return replace(self, n=n, layers=layers)

    def __str__(self) -> str:
        parts = [self.kind, self.family, str(self.n)]
        if self.kind == 'prism':
            parts.append(str(self.layers))
        if self.family == 'perturbed':
            parts.append(repr(self.perturbation))
        return ':'.join(parts)


def parse_mesh_spec(text: str) -> MeshSpec:
    parts = text.strip().split(':')
    if len(parts) < 3 or parts[0] not in KINDS:
        raise MeshError(f"malformed mesh spec '{text}' (expected kind:family:n[...])")
    kind, family = parts[0], parts[1]
    try:
        n = int(parts[2])
        rest = parts[3:]
        layers = None
        if kind == 'prism':
            if not rest:
                raise MeshError(f"prism mesh spec '{text}' needs a layer count")
            layers = int(rest[0])
            rest = rest[1:]
        perturbation = 0.0
        if family == 'perturbed':
            perturbation = float(rest[0]) if rest else DEFAULT_PERTURBATION
            rest = rest[1:]
    except ValueError as exc:
        raise MeshError(f"malformed mesh spec '{text}': {exc}") from exc
    if rest:
        raise MeshError(f"mesh spec '{text}' has trailing fields {rest}")
    return MeshSpec(kind=kind, family=family, n=n, layers=layers, perturbation=perturbation)


def build_mesh(spec, seed: int = 0) -> CellComplex:
    if isinstance(spec, str):
        spec = parse_mesh_spec(spec)
    if spec.kind == 'torus':
        return build_torus_mesh(spec.n, spec.family, spec.perturbation, seed)
    if spec.kind == 'square':
        return build_square_dirichlet(spec.n, spec.family, spec.perturbation, seed)
    layer = build_torus_mesh(spec.n, spec.family, spec.perturbation, seed)
    return extrude_prismatic(layer, spec.layers)
