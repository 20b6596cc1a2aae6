"""Splitting of metric homogeneous tensors into the classes T1, T2, T3.

Tensors live in the space of T[i, j, k] skew in (j, k), of dimension
n^2 (n-1) / 2.  T1 is the trace part, T3 the totally skew (cyclic) part and
T2 what is left.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, TensorError
from .holonomy import holonomy_from_brackets
from .hyperbolic_model import nilp_element
from .lie_core import (
    Rational,
    as_float,
    bracket,
    exact,
    is_exact,
    like,
    max_abs,
    norm,
    nullspace,
    rank,
    zeros,
)
from .structure import Tensor3

CLASSIFY_TOL = 1e-8
ABS_FLOOR = 1e-12


def _array(T) -> np.ndarray:
    return T.T if isinstance(T, Tensor3) else np.asarray(T)


def _check_skew(A: np.ndarray, tol: float) -> None:
    if A.ndim != 3 or len(set(A.shape)) != 1:
        raise DimensionError(f"expected an n x n x n array, got shape {A.shape}")
    res = max_abs(A + A.transpose(0, 2, 1))
    if res > tol * max(1.0, max_abs(A)):
        raise TensorError(f"tensor is not skew in its last two slots (residual {res:.3e})")


def trace_vector(T, tol: float = 1e-9) -> np.ndarray:
    A = _array(T)
    _check_skew(A, tol)
    return np.einsum("iik->k", A)


def _components(A: np.ndarray):
    n = A.shape[0]
    if n < 2:
        raise DimensionError("the splitting needs n >= 2")
    c = np.einsum("iik->k", A)
    eye = np.eye(n, dtype=int)
    if is_exact(A):
        eye = exact(eye)
        third, inv = Rational(1, 3), Rational(1, n - 1)
    else:
        third, inv = 1 / 3, 1 / (n - 1)
    T3 = (A + A.transpose(1, 2, 0) + A.transpose(2, 0, 1)) * third
    T1 = (np.einsum("ij,k->ijk", eye, c) - np.einsum("ik,j->ijk", eye, c)) * inv
    return T1, A - T1 - T3, T3


def project_components(T, tol: float = 1e-9) -> tuple[Tensor3, Tensor3, Tensor3]:
    A = _array(T)
    _check_skew(A, tol)
    return tuple(Tensor3(x) for x in _components(A))


@dataclass(frozen=True)
class TypeReport:
    norms: tuple[float, float, float]
    label: tuple[int, ...]
    tol: float
    threshold: float
    total_norm: float
    trace: tuple[float, ...]

    @property
    def name(self) -> str:
        if not self.label:
            return "0"
        if self.label == (1, 2, 3):
            return "general"
        return "T" + "+".join(map(str, self.label))

    def to_dict(self) -> dict:
        return {
            "norms": [float(x) for x in self.norms],
            "label": list(self.label),
            "name": self.name,
            "tol": self.tol,
            "threshold": self.threshold,
            "norm": self.total_norm,
            "trace_vector": [float(x) for x in self.trace],
        }


def classify(T, tol: float = CLASSIFY_TOL) -> TypeReport:
    """Label = components whose norm exceeds tol * |T| (1e-12 absolute for tiny T)."""
    A = _array(T)
    _check_skew(A, 1e-9)
    parts = _components(A)
    norms = tuple(norm(p) for p in parts)
    total = norm(A)
    thr = tol * total if total >= 1e-8 else ABS_FLOOR
    label = tuple(i + 1 for i, x in enumerate(norms) if x > thr)
    c = as_float(np.einsum("iik->k", A))
    return TypeReport(norms, label, tol, thr, total, tuple(float(x) for x in c))


# ---------------------------------------------------------------------------
# projectors as matrices on the skew tensor space
# ---------------------------------------------------------------------------


def skew_basis(n: int) -> list[tuple[int, int, int]]:
    """Index triples (i, j, k), j < k, labelling e_i x (e_j ^ e_k)."""
    return [(i, j, k) for i in range(n) for j, k in combinations(range(n), 2)]


def to_coords(A: np.ndarray) -> np.ndarray:
    return np.array([A[i, j, k] for i, j, k in skew_basis(A.shape[0])], dtype=A.dtype)


def from_coords(x, n: int) -> np.ndarray:
    x = np.asarray(x)
    A = zeros((n, n, n), is_exact(x)) if is_exact(x) else np.zeros((n, n, n), dtype=x.dtype)
    for v, (i, j, k) in zip(x, skew_basis(n)):
        A[i, j, k] = v
        A[i, k, j] = -v
    return A


def projector_matrices(n: int, exact_mode: bool = True) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """P1, P2, P3 acting on coordinates of skew tensors (orthogonal basis, equal norms)."""
    idx = skew_basis(n)
    N = len(idx)
    cols: list[list[np.ndarray]] = [[], [], []]
    for col in range(N):
        e = np.zeros(N, dtype=int)
        e[col] = 1
        A = from_coords(exact(e) if exact_mode else e.astype(float), n)
        for P, part in zip(cols, _components(A)):
            P.append(to_coords(part))
    return tuple(np.array(P, dtype=object if exact_mode else float).T for P in cols)


class ComponentDims(NamedTuple):
    """Ranks in the order (trace part, totally skew part, remainder)."""

    t1: int
    t3: int
    t2: int


def component_space_dims(n: int) -> ComponentDims:
    if n < 3:
        raise DimensionError("component dimensions are tabulated for n >= 3")
    P1, P2, P3 = projector_matrices(n, exact_mode=True)
    return ComponentDims(rank(P1), rank(P3), rank(P2))


def so_action_matrices(n: int) -> list[np.ndarray]:
    """E_ab - E_ba acting as derivations on skew tensor coordinates."""
    idx = skew_basis(n)
    N = len(idx)
    out = []
    for a, b in combinations(range(n), 2):
        X = np.zeros((n, n), dtype=int)
        X[a, b], X[b, a] = 1, -1
        L = np.zeros((N, N), dtype=int)
        for col in range(N):
            e = np.zeros(N, dtype=int)
            e[col] = 1
            A = from_coords(e, n)
            dA = (np.einsum("li,ljk->ijk", X, A) + np.einsum("lj,ilk->ijk", X, A)
                  + np.einsum("lk,ijl->ijk", X, A))
            L[:, col] = to_coords(dA)
        out.append(L)
    return out


def invariant_submodule_dim(n: int) -> int:
    """dim of the so(n)-fixed skew tensors: kernel of the stacked action."""
    if n < 3:
        raise DimensionError("needs n >= 3")
    Ls = so_action_matrices(n)
    gram = sum(L.T @ L for L in Ls)
    return gram.shape[0] - rank(exact(gram))


def expected_label(H) -> tuple[int, ...]:
    """Type forced by the holonomy data of H.

    S = 0 for the symmetric description; T1 when hol = 0 and A0 = 0; T1+3
    when A0 = 0 and hol is semisimple and trivial on ker phi; otherwise
    general.  A0 != 0 gives the general type even when hol = 0.
    """
    if H.maps is None:
        return ()
    tol = H.tol
    a0_zero = max_abs(H.maps.A0) <= tol
    res = holonomy_from_brackets(H)
    if not a0_zero:
        return (1, 2, 3)
    if res.dim == 0:
        return (1,)
    if res.center_dim:
        return (1, 2, 3)
    kernel = nullspace(H.maps.phi_nilp, tol) if H.maps.phi_nilp.shape[0] else np.eye(H.n - 1)
    for Y in res.hol.matrices():
        for v in kernel:
            if max_abs(bracket(Y, nilp_element(like(v, Y)))) > tol:
                return (1, 2, 3)
    return (1, 3)
