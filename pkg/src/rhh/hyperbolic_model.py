"""so(n,1) in the light-cone realization and its Iwasawa pieces.

Matrices act on R^{n+1} = R^{n-1} + R + R and preserve
Q = diag(Id_{n-1}, [[0, 1], [1, 0]]).  Blocks are indexed as (v, s, t) with
v in R^{n-1}:

    so(n-1) block   [[B, 0, 0], [0, 0, 0], [0, 0, 0]]
    compact part    [[0, v, v], [-v^T, 0, 0], [-v^T, 0, 0]]
    A               diag(0, ..., 0, 1, -1)
    nilp            [[0, 0, v], [-v^T, 0, 0], [0, 0, 0]]
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .catalog import so_basis
from .lie_core import DEFAULT_TOL, LieAlgebraData, Rational, Subspace, exact, orthonormalize, zeros
from .structure import HomogeneousStructure


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ValueError(f"real hyperbolic space needs n >= 2, got {n!r}")


def _mode(a, exact_mode: bool) -> np.ndarray:
    return exact(a) if exact_mode else np.asarray(a, dtype=float)


def lorentz_form(n: int, exact_mode: bool = True) -> np.ndarray:
    _check_n(n)
    Q = np.zeros((n + 1, n + 1), dtype=int)
    Q[: n - 1, : n - 1] = np.eye(n - 1, dtype=int)
    Q[n - 1, n] = Q[n, n - 1] = 1
    return _mode(Q, exact_mode)


def so_block(B, n: int) -> np.ndarray:
    """Embed an (n-1)x(n-1) matrix as the so(n-1) block."""
    B = np.asarray(B)
    out = zeros((n + 1, n + 1), B.dtype == object) if B.dtype == object else np.zeros((n + 1, n + 1), dtype=B.dtype)
    out[: n - 1, : n - 1] = B
    return out


def nilp_element(v) -> np.ndarray:
    v = np.asarray(v)
    n = v.size + 1
    X = zeros((n + 1, n + 1), True) if v.dtype == object else np.zeros((n + 1, n + 1), dtype=v.dtype)
    X[: n - 1, n] = v
    X[n - 1, : n - 1] = -v
    return X


def compact_element(v) -> np.ndarray:
    v = np.asarray(v)
    n = v.size + 1
    X = zeros((n + 1, n + 1), True) if v.dtype == object else np.zeros((n + 1, n + 1), dtype=v.dtype)
    X[: n - 1, n - 1] = v
    X[: n - 1, n] = v
    X[n - 1, : n - 1] = -v
    X[n, : n - 1] = -v
    return X


def p_element(v) -> np.ndarray:
    """Element of the noncompact Cartan complement: nilp(v) - compact(v)/2."""
    v = np.asarray(v)
    if v.dtype == object:
        return nilp_element(v) - compact_element(v) * Rational(1, 2)
    return nilp_element(v) - 0.5 * compact_element(v)


def generator_A(n: int, exact_mode: bool = True) -> np.ndarray:
    _check_n(n)
    A = np.zeros((n + 1, n + 1), dtype=int)
    A[n - 1, n - 1] = 1
    A[n, n] = -1
    return _mode(A, exact_mode)


def nilp_coordinates(X) -> np.ndarray:
    """v with X = alpha*A + nilp(v) for X in a + nilp."""
    n = X.shape[0] - 1
    return X[: n - 1, n]


def _units(n: int, exact_mode: bool) -> list[np.ndarray]:
    return [_mode(np.eye(n - 1, dtype=int)[i], exact_mode) for i in range(n - 1)]


def so_n_minus_1_basis(n: int, exact_mode: bool = True) -> np.ndarray:
    if n < 3:
        return _mode(np.zeros((0, n + 1, n + 1), dtype=int), exact_mode)
    return np.array([so_block(B, n) for B in _mode(so_basis(n - 1), exact_mode)])


def nilp_basis(n: int, exact_mode: bool = True) -> np.ndarray:
    return np.array([nilp_element(u) for u in _units(n, exact_mode)])


def compact_basis(n: int, exact_mode: bool = True) -> np.ndarray:
    """so(n): the so(n-1) block followed by compact_element(e_i)."""
    extra = np.array([compact_element(u) for u in _units(n, exact_mode)])
    return np.concatenate([so_n_minus_1_basis(n, exact_mode), extra])


def p_basis(n: int, exact_mode: bool = True) -> np.ndarray:
    return np.array([p_element(u) for u in _units(n, exact_mode)])


def build_so_n1(n: int, exact_mode: bool = True, tol: float = DEFAULT_TOL) -> LieAlgebraData:
    """Basis of {X : X^T Q + Q X = 0}: so(n) pieces, then A, then nilp."""
    _check_n(n)
    basis = np.concatenate([
        compact_basis(n, exact_mode),
        generator_A(n, exact_mode)[None],
        nilp_basis(n, exact_mode),
    ])
    return LieAlgebraData.from_basis(basis, tol)


@dataclass(frozen=True, eq=False)
class IwasawaModel:
    n: int
    Q: np.ndarray
    A: np.ndarray
    so_n: Subspace
    a: Subspace
    nilp: Subspace
    so_n_minus_1: Subspace
    algebra: LieAlgebraData

    @property
    def exact(self) -> bool:
        return self.algebra.exact

    def nilp_basis(self) -> np.ndarray:
        return nilp_basis(self.n, self.exact)

    def so_n_minus_1_basis(self) -> np.ndarray:
        return so_n_minus_1_basis(self.n, self.exact)

    def compact_basis(self) -> np.ndarray:
        return compact_basis(self.n, self.exact)


def iwasawa(n: int, exact_mode: bool = True, tol: float = DEFAULT_TOL) -> IwasawaModel:
    algebra = build_so_n1(n, exact_mode, tol)
    D = (n + 1) ** 2
    A = generator_A(n, exact_mode)
    return IwasawaModel(
        n=n,
        Q=lorentz_form(n, exact_mode),
        A=A,
        so_n=orthonormalize(list(compact_basis(n, exact_mode)), tol, D),
        a=orthonormalize([A], tol, D),
        nilp=orthonormalize(list(nilp_basis(n, exact_mode)), tol, D),
        so_n_minus_1=orthonormalize(list(so_n_minus_1_basis(n, exact_mode)), tol, D),
        algebra=algebra,
    )


def symmetric_structure(n: int, exact_mode: bool = True, curvature: float = 1.0,
                        tol: float = DEFAULT_TOL) -> HomogeneousStructure:
    """so(n,1) = so(n) + p with the metric of curvature -curvature."""
    _check_n(n)
    h = LieAlgebraData.from_basis(compact_basis(n, exact_mode), tol)
    m_basis = np.concatenate([p_basis(n, exact_mode), generator_A(n, exact_mode)[None]])
    half = Rational(1, 2) if exact_mode else 0.5
    G = zeros((n, n), exact_mode)
    for i in range(n - 1):
        G[i, i] = half
    G[n - 1, n - 1] = G[n - 1, n - 1] + 1
    if curvature != 1:
        G = G / (Rational(str(curvature)) if exact_mode else float(curvature))
    from .structure_builder import StructureSpec

    spec = StructureSpec(n=n, symmetric=True, curvature=curvature)
    return HomogeneousStructure(n=n, h=h, m_basis=m_basis, gram=G, spec=spec,
                                symmetric=True, tol=tol)
