"""Containers shared across modules: realized structures and 3-tensors.

A :class:`HomogeneousStructure` records a reductive split g = h + m inside
so(n, 1) together with the metric on m.  Everything downstream (the
homogeneous tensor, curvatures, holonomy) is read off the structure
constants of g in the adapted basis ``h_1..h_p, b_1..b_n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Any

import numpy as np

from .lie_core import (
    DEFAULT_TOL,
    Coordinates,
    LieAlgebraData,
    Subspace,
    as_float,
    exact,
    is_exact,
    max_abs,
    norm,
    orthonormalize,
)

if TYPE_CHECKING:
    from .structure_builder import EquivariantMaps, ModuleSplit, StructureSpec


@dataclass(frozen=True, eq=False)
class Tensor3:
    """Components T[i, j, k] = g(S_{e_i} e_j, e_k) in an orthonormal frame."""

    T: np.ndarray
    frame: str = "orthonormal"

    @property
    def n(self) -> int:
        return int(self.T.shape[0])

    @property
    def exact(self) -> bool:
        return is_exact(self.T)

    def norm(self) -> float:
        return norm(self.T)

    def skew_residual(self) -> float:
        return max_abs(self.T + self.T.transpose(0, 2, 1))

    def to_float(self) -> "Tensor3":
        return Tensor3(as_float(self.T), self.frame)

    def __add__(self, other: "Tensor3") -> "Tensor3":
        return Tensor3(self.T + other.T, self.frame)

    def __sub__(self, other: "Tensor3") -> "Tensor3":
        return Tensor3(self.T - other.T, self.frame)


def transform(tensor: np.ndarray, M: np.ndarray) -> np.ndarray:
    """Apply the change of basis M (rows = new vectors in old coordinates) to every slot."""
    if not is_exact(M):
        tensor = as_float(tensor)
    out = tensor
    for axis in range(tensor.ndim):
        out = np.moveaxis(np.tensordot(M, out, axes=(1, axis)), 0, axis)
    return out


def _frame_matrix(G: np.ndarray) -> np.ndarray:
    """Rows: a G-orthonormal frame whose last vector is the last basis vector, rescaled."""
    n = G.shape[0]
    if is_exact(G) and all(G[i, j] == (1 if i == j else 0) for i in range(n) for j in range(n)):
        return exact(np.eye(n, dtype=int))
    Gf = as_float(G)
    order = [n - 1] + list(range(n - 1))
    vecs: list[np.ndarray] = []
    for i in order:
        v = np.zeros(n)
        v[i] = 1.0
        for u in vecs:
            v = v - (u @ Gf @ v) * u
        v = v / np.sqrt(v @ Gf @ v)
        vecs.append(v)
    return np.array(vecs[1:] + vecs[:1])


@dataclass(frozen=True, eq=False)
class HomogeneousStructure:
    """A reductive decomposition g = h + m of a transitive algebra with metric on m.

    ``m_basis`` is the adapted basis: for F_rN descriptions the lifts
    ``N(e_i) + phi(N(e_i))`` followed by ``xi``; for the symmetric
    description the p-basis followed by ``A``.  ``gram`` is the metric in
    that basis.
    """

    n: int
    h: LieAlgebraData
    m_basis: np.ndarray
    gram: np.ndarray
    spec: "StructureSpec | None" = None
    maps: "EquivariantMaps | None" = None
    module_split: "ModuleSplit | None" = None
    symmetric: bool = False
    tol: float = DEFAULT_TOL
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return is_exact(self.m_basis)

    @property
    def p(self) -> int:
        return self.h.dim

    @property
    def size(self) -> int:
        return self.m_basis.shape[1]

    @cached_property
    def total(self) -> LieAlgebraData:
        """Structure constants of g in the basis h_1..h_p, b_1..b_n."""
        if self.p:
            hb, mb = self.h.basis, self.m_basis
            if is_exact(hb) != is_exact(mb):
                hb, mb = as_float(hb), as_float(mb)
            B = np.concatenate([hb, mb])
        else:
            B = self.m_basis
        return LieAlgebraData.from_basis(B, self.tol)

    @cached_property
    def m_coordinates(self) -> Coordinates:
        return Coordinates(self.m_basis.reshape(self.n, -1), self.tol)

    @cached_property
    def h_subspace(self) -> Subspace:
        return orthonormalize(list(self.h.basis), self.tol, self.size ** 2)

    @cached_property
    def m_subspace(self) -> Subspace:
        return orthonormalize(list(self.m_basis), self.tol, self.size ** 2)

    # bracket pieces, all in adapted coordinates
    @property
    def mm_m(self) -> np.ndarray:
        """[b_i, b_j]_m coordinates, shape (n, n, n)."""
        p = self.p
        return self.total.structure_constants[p:, p:, p:]

    @property
    def mm_h(self) -> np.ndarray:
        """[b_i, b_j]_h coordinates, shape (n, n, p)."""
        p = self.p
        return self.total.structure_constants[p:, p:, :p]

    @property
    def hm_m(self) -> np.ndarray:
        """D[a, k, l]: b_l-coefficient of [h_a, b_k]."""
        p = self.p
        return self.total.structure_constants[:p, p:, p:]

    @property
    def hm_h(self) -> np.ndarray:
        """h-part of [h_a, b_k]; zero exactly when m is ad(h)-stable."""
        p = self.p
        return self.total.structure_constants[:p, p:, :p]

    @cached_property
    def gram_inverse(self) -> np.ndarray:
        from .lie_core import exact_inverse

        if self.exact and is_exact(self.gram):
            return exact_inverse(self.gram)
        return np.linalg.inv(as_float(self.gram))

    @cached_property
    def frame_matrix(self) -> np.ndarray:
        return _frame_matrix(self.gram)

    @property
    def frame(self) -> np.ndarray:
        M = self.frame_matrix
        B = self.m_basis if is_exact(M) else as_float(self.m_basis)
        return np.tensordot(M, B, axes=(1, 0))

    def metric(self, x, y):
        """g on adapted coordinate vectors."""
        return np.asarray(x) @ self.gram @ np.asarray(y)

    def label(self) -> str:
        return self.spec.to_text() if self.spec is not None else f"n={self.n}"
