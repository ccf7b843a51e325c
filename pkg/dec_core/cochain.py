"""
Cochain: values on the dual k-cells of one complex.

Numerical kernels work on plain numpy arrays; `Cochain` is the checked
wrapper used at API boundaries and in files. `values_of` accepts either and
validates length, degree and complex tag.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np

from mesh_complex import CellComplex, CochainMismatchError


@dataclass(frozen=True, eq=False)
class Cochain:
    values: np.ndarray
    degree: int
    complex_tag: str

    def __post_init__(self):
        object.__setattr__(self, 'values', np.asarray(self.values, dtype=float))

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)

    def __len__(self):
        return self.values.shape[0]

    def _check(self, other: 'Cochain') -> None:
        if not isinstance(other, Cochain):
            raise CochainMismatchError("cochain arithmetic needs another Cochain")
        if other.degree != self.degree or other.complex_tag != self.complex_tag:
            raise CochainMismatchError(
                f"cochain mismatch: degree {self.degree}/{other.degree}, "
                f"complex {self.complex_tag}/{other.complex_tag}")

    def __add__(self, other):
        self._check(other)
        return Cochain(self.values + other.values, self.degree, self.complex_tag)

    def __sub__(self, other):
        self._check(other)
        return Cochain(self.values - other.values, self.degree, self.complex_tag)

    def __mul__(self, scalar: float):
        return Cochain(self.values * float(scalar), self.degree, self.complex_tag)

    __rmul__ = __mul__

    def __neg__(self):
        return Cochain(-self.values, self.degree, self.complex_tag)

    def pairing(self, chain: np.ndarray) -> float:
        """Unweighted duality pairing with a chain (e.g. circulation along a loop)."""
        return float(np.dot(self.values, chain))


CochainLike = Union[Cochain, np.ndarray]


def make_cochain(cx: CellComplex, k: int, values=None) -> Cochain:
    n = cx.n_dual[k]
    if values is None:
        values = np.zeros(n)
    values = np.asarray(values, dtype=float)
    if values.shape != (n,):
        raise CochainMismatchError(f"degree-{k} cochain needs {n} values, got shape {values.shape}")
    return Cochain(values, k, cx.tag)


def values_of(x: CochainLike, cx: CellComplex, k: int) -> np.ndarray:
    """Raw values of `x`, checked against complex `cx` and degree `k`."""
    if isinstance(x, Cochain):
        if x.degree != k:
            raise CochainMismatchError(f"expected a degree-{k} cochain, got degree {x.degree}")
        if x.complex_tag != cx.tag:
            raise CochainMismatchError("cochain belongs to a different complex")
        return x.values
    values = np.asarray(x, dtype=float)
    if values.shape != (cx.n_dual[k],):
        raise CochainMismatchError(
            f"degree-{k} cochain needs {cx.n_dual[k]} values, got shape {values.shape}")
    return values
