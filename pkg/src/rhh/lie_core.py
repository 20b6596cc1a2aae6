"""Matrix Lie algebra arithmetic over exact rationals or floats.

Exact arrays are numpy object arrays holding ``gmpy2.mpq`` rationals.  Every routine dispatches on ``dtype == object``, so the same call
works in both scalar modes and exact inputs give exact answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg
from gmpy2 import mpq

from .errors import DecompositionError, DimensionError, ReductiveError

DEFAULT_TOL = 1e-9

Matrix = np.ndarray

Rational = mpq
_to_rational = np.vectorize(mpq, otypes=[object])


# ---------------------------------------------------------------------------
# scalar modes
# ---------------------------------------------------------------------------


def is_exact(a) -> bool:
    return np.asarray(a).dtype == object


def exact(a) -> np.ndarray:
    """Convert to an object array of rationals (floats convert bit-exactly)."""
    a = np.asarray(a)
    if a.size == 0:
        return a.astype(object)
    return _to_rational(a)


def as_float(a) -> np.ndarray:
    return np.asarray(a, dtype=float)


def like(a, ref) -> np.ndarray:
    """Coerce ``a`` into the scalar mode of ``ref``."""
    return exact(a) if is_exact(ref) else as_float(a)


def zeros(shape, exact_mode: bool) -> np.ndarray:
    if exact_mode:
        return np.full(shape, mpq(0), dtype=object)
    return np.zeros(shape)


def max_abs(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(as_float(a))))


def norm(a) -> float:
    return float(np.linalg.norm(as_float(a)))


# ---------------------------------------------------------------------------
# exact row reduction
# ---------------------------------------------------------------------------


def rref(M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of an exact matrix; pivots chosen lowest index first."""
    R = np.array(M, dtype=object, copy=True)
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = [i for i in range(r, rows) if R[i, c] != 0]
        if not nz:
            continue
        p = nz[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        pivots.append(c)
        r += 1
    return R, pivots


def exact_inverse(A) -> np.ndarray:
    A = np.asarray(A, dtype=object)
    k = A.shape[0]
    aug = np.concatenate([A, exact(np.eye(k, dtype=int))], axis=1)
    R, piv = rref(aug)
    if piv[:k] != list(range(k)):
        raise np.linalg.LinAlgError("singular matrix")
    return R[:, k:]


def rank(M, tol: float = DEFAULT_TOL) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    if is_exact(M):
        return len(rref(M)[1])
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0])))


def nullspace(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Rows spanning ``{x : M x = 0}``."""
    M = np.asarray(M)
    cols = M.shape[1]
    if is_exact(M):
        R, piv = rref(M)
        free = [c for c in range(cols) if c not in piv]
        out = zeros((len(free), cols), True)
        for row, f in enumerate(free):
            out[row, f] = mpq(1)
            for j, p in enumerate(piv):
                out[row, p] = -R[j, f]
        return out
    if M.shape[0] == 0:
        return np.eye(cols)
    _, s, vt = np.linalg.svd(M, full_matrices=True)
    r = int(np.sum(s > tol * max(1.0, s[0]))) if s.size else 0
    return vt[r:]


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------


def _stack(vectors, ambient_dim: int | None) -> np.ndarray:
    vs = [np.asarray(v).reshape(-1) for v in vectors]
    if not vs:
        if ambient_dim is None:
            raise DimensionError("ambient dimension needed for an empty vector list")
        return np.zeros((0, ambient_dim))
    sizes = {v.size for v in vs}
    if len(sizes) != 1:
        raise DimensionError(f"vectors of mixed sizes {sorted(sizes)}")
    if any(v.dtype == object for v in vs):
        return np.array([exact(v) for v in vs], dtype=object)
    return np.array(vs, dtype=float)


def _orthogonalize(V: np.ndarray, tol: float) -> tuple[np.ndarray, list[int]]:
    """Orthogonal basis of the row span of V plus the indices of the rows used.

    Float rows are normalized and processed by column-pivoted modified
    Gram-Schmidt (largest residual first, lowest index on ties).  Exact rows
    are processed in index order and the result is orthogonal but not
    normalized.
    """
    k, D = V.shape
    if is_exact(V):
        Q: list[np.ndarray] = []
        QQ: list = []
        piv: list[int] = []
        for i in range(k):
            w = V[i].copy()
            for q, qq in zip(Q, QQ):
                c = q.dot(w)
                if c != 0:
                    w = w - (c / qq) * q
            if any(x != 0 for x in w):
                Q.append(w)
                QQ.append(w.dot(w))
                piv.append(i)
        if not Q:
            return zeros((0, D), True), []
        return np.array(Q, dtype=object), piv

    norms = np.linalg.norm(V, axis=1)
    scale = max(1.0, float(norms.max())) if k else 1.0
    alive = [i for i in range(k) if norms[i] > tol * scale]
    W = np.zeros_like(V)
    W[alive] = V[alive] / norms[alive, None]
    basis: list[np.ndarray] = []
    piv = []
    while alive:
        res = np.linalg.norm(W[alive], axis=1)
        j = int(np.argmax(res))
        if res[j] <= tol:
            break
        idx = alive.pop(j)
        q = W[idx] / res[j]
        if basis:
            B = np.array(basis)
            q = q - B.T @ (B @ q)
            q = q / np.linalg.norm(q)
        basis.append(q)
        piv.append(idx)
        if alive:
            W[alive] -= np.outer(W[alive] @ q, q)
    if not basis:
        return np.zeros((0, D)), []
    return np.array(basis), piv


@dataclass(frozen=True, eq=False)
class Subspace:
    """Linear subspace of R^D held through an orthogonal basis (rows).

    Float bases are orthonormal.  Exact bases are orthogonal with rational
    entries; their norms are carried implicitly by ``basis @ basis.T``.
    """

    basis: np.ndarray
    ambient_dim: int
    tol: float = DEFAULT_TOL

    @property
    def dim(self) -> int:
        return int(self.basis.shape[0])

    @property
    def exact(self) -> bool:
        return is_exact(self.basis)

    def _norms2(self):
        return np.array([b.dot(b) for b in self.basis], dtype=self.basis.dtype)

    def coefficients(self, v) -> np.ndarray:
        v = np.asarray(v).reshape(-1)
        if v.size != self.ambient_dim:
            raise DimensionError(f"vector of size {v.size} in ambient {self.ambient_dim}")
        if self.dim == 0:
            return zeros(0, self.exact)
        return (self.basis @ like(v, self.basis)) / self._norms2()

    def project(self, v) -> np.ndarray:
        v = np.asarray(v)
        if self.dim == 0:
            return zeros(v.shape, self.exact)
        return (self.coefficients(v) @ self.basis).reshape(v.shape)

    def contains(self, v) -> bool:
        v = np.asarray(v)
        r = like(v, self.basis).reshape(-1) - self.project(v).reshape(-1)
        if self.exact and is_exact(v):
            return not any(x != 0 for x in r)
        return norm(r) <= self.tol * max(1.0, norm(v))

    def matrices(self) -> np.ndarray:
        d = int(round(np.sqrt(self.ambient_dim)))
        return self.basis.reshape(self.dim, d, d)

    def to_float(self) -> "Subspace":
        """Orthonormal float copy."""
        if not self.exact:
            return self
        B = as_float(self.basis)
        if self.dim:
            B = B / np.linalg.norm(B, axis=1)[:, None]
        return Subspace(B, self.ambient_dim, self.tol)


def orthonormalize(vectors: Iterable, tol: float = DEFAULT_TOL,
                   ambient_dim: int | None = None) -> Subspace:
    V = _stack(list(vectors), ambient_dim)
    Q, _ = _orthogonalize(V, tol)
    return Subspace(Q, V.shape[1], tol)


def subspace_sum(*subs: Subspace) -> Subspace:
    D = subs[0].ambient_dim
    return orthonormalize([b for s in subs for b in s.basis], subs[0].tol, D)


def subspace_distance(U: Subspace, V: Subspace) -> float:
    """Largest principal angle between two subspaces (pi/2 if the dims differ)."""
    if U.ambient_dim != V.ambient_dim:
        raise DimensionError("subspaces live in different ambient spaces")
    if U.dim != V.dim:
        return float(np.pi / 2)
    if U.dim == 0:
        return 0.0
    if U.exact and V.exact:
        if rank(np.concatenate([U.basis, V.basis])) == U.dim:
            return 0.0
    a, b = U.to_float().basis, V.to_float().basis
    return float(np.max(scipy.linalg.subspace_angles(a.T, b.T)))


# ---------------------------------------------------------------------------
# coordinates against a (not necessarily orthogonal) basis
# ---------------------------------------------------------------------------


class Coordinates:
    """Solve ``v = sum_i c_i b_i`` for a fixed independent list ``b_i``."""

    def __init__(self, vectors, tol: float = DEFAULT_TOL):
        B = np.asarray(vectors)
        B = B.reshape(B.shape[0], -1)
        self.basis = B
        self.tol = tol
        self.exact = is_exact(B)
        k = B.shape[0]
        if k == 0:
            return
        if self.exact:
            _, piv = rref(B)
            if len(piv) < k:
                raise DecompositionError("basis vectors are linearly dependent")
            self._cols = piv
            self._inv = exact_inverse(B[:, piv])
        else:
            if rank(B, tol) < k:
                raise DecompositionError("basis vectors are linearly dependent")
            self._pinv = np.linalg.pinv(B)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def solve_many(self, vs) -> np.ndarray:
        """Coordinates of each item of ``vs`` (items flattened), shape (N, k)."""
        vs = np.asarray(vs)
        V = vs.reshape(vs.shape[0], -1)
        if V.shape[1] != self.basis.shape[1]:
            raise DimensionError(f"vectors of size {V.shape[1]} against basis of size {self.basis.shape[1]}")
        if self.dim == 0:
            C = zeros((V.shape[0], 0), self.exact)
        elif self.exact:
            V = like(V, self.basis)
            C = V[:, self._cols] @ self._inv
        else:
            V = as_float(V)
            C = V @ self._pinv
        R = like(V, self.basis) - C @ self.basis if self.dim else like(V, self.basis)
        if self.exact and is_exact(V):
            bad = any(x != 0 for x in R.reshape(-1))
        else:
            res = np.linalg.norm(as_float(R), axis=1)
            ref = np.maximum(1.0, np.linalg.norm(as_float(V), axis=1))
            bad = bool(np.any(res > self.tol * ref))
        if bad:
            raise DecompositionError(
                f"vector not in the span of the basis (residual {max_abs(R):.3e})")
        return C

    def solve(self, v) -> np.ndarray:
        return self.solve_many(np.asarray(v)[None])[0]


# ---------------------------------------------------------------------------
# brackets and algebras
# ---------------------------------------------------------------------------


def bracket(X: Matrix, Y: Matrix) -> Matrix:
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.ndim != 2 or X.shape[0] != X.shape[1] or X.shape != Y.shape:
        raise DimensionError(f"cannot bracket matrices of shapes {X.shape} and {Y.shape}")
    return X @ Y - Y @ X


def trace_form(X: Matrix, Y: Matrix):
    """Negative trace form -tr(XY); positive definite on skew matrices."""
    return -np.trace(np.asarray(X) @ np.asarray(Y))


def _pair_brackets(B: np.ndarray) -> np.ndarray:
    XY = np.einsum("aij,bjk->abik", B, B)
    return XY - XY.transpose(1, 0, 2, 3)


@dataclass(frozen=True, eq=False)
class LieAlgebraData:
    """Structure constants ``[b_i, b_j] = sum_k c[i, j, k] b_k``.

    ``basis`` holds the matrices b_i when the algebra is realized; abstract
    algebras (e.g. from the Nomizu construction) leave it as ``None``.
    """

    structure_constants: np.ndarray
    basis: np.ndarray | None = None
    tol: float = DEFAULT_TOL

    @property
    def dim(self) -> int:
        return int(self.structure_constants.shape[0])

    @property
    def exact(self) -> bool:
        return is_exact(self.structure_constants)

    @classmethod
    def from_basis(cls, basis: Sequence[Matrix] | np.ndarray,
                   tol: float = DEFAULT_TOL) -> "LieAlgebraData":
        B = np.asarray(basis)
        k = B.shape[0]
        if k == 0:
            return cls(zeros((0, 0, 0), is_exact(B)), B, tol)
        coords = Coordinates(B.reshape(k, -1), tol)
        brackets = _pair_brackets(B).reshape(k * k, -1)
        c = coords.solve_many(brackets).reshape(k, k, k)
        return cls(c, B, tol)

    def element(self, coeffs) -> Matrix:
        if self.basis is None:
            raise ValueError("abstract algebra has no matrix realization")
        return np.tensordot(np.asarray(coeffs), self.basis, axes=(0, 0))

    def coordinates(self, X: Matrix) -> np.ndarray:
        if self.basis is None:
            raise ValueError("abstract algebra has no matrix realization")
        return Coordinates(self.basis.reshape(self.dim, -1), self.tol).solve(X)

    def ad(self, i: int) -> np.ndarray:
        """Matrix of ad(b_i): column j holds the coordinates of [b_i, b_j]."""
        return self.structure_constants[i].T

    def antisymmetry_residual(self) -> float:
        c = self.structure_constants
        return max_abs(c + c.transpose(1, 0, 2))

    def jacobi_residual(self) -> float:
        c = self.structure_constants
        if self.dim == 0:
            return 0.0
        cc = np.einsum("ijl,lkm->ijkm", c, c)
        J = cc + cc.transpose(2, 0, 1, 3) + cc.transpose(1, 2, 0, 3)
        return max_abs(J)

    def closure_residual(self) -> float:
        """Distance of all pairwise brackets from the span of ``basis``."""
        if self.basis is None or self.dim == 0:
            return 0.0
        B = self.basis
        br = _pair_brackets(B)
        rec = np.einsum("ijk,kab->ijab", self.structure_constants, B)
        return max_abs(br - rec)


def span_closure(generators: Sequence[Matrix], tol: float = DEFAULT_TOL,
                 ambient_dim: int | None = None) -> Subspace:
    """Smallest bracket-closed subspace containing ``generators``."""
    gens = [np.asarray(g) for g in generators]
    if not gens:
        return Subspace(np.zeros((0, ambient_dim or 0)), ambient_dim or 0, tol)
    d = gens[0].shape[0]
    V = _stack(gens, d * d)
    Q, piv = _orthogonalize(V, tol)
    raw = [V[i].reshape(d, d) for i in piv]
    dim = len(raw)
    for _ in range(d * d):
        if not raw:
            break
        R = np.array(raw, dtype=V.dtype)
        br = _pair_brackets(R)
        iu = np.triu_indices(len(raw), 1)
        cands = br[iu].reshape(-1, d * d)
        allv = np.concatenate([R.reshape(len(raw), -1), cands]) if len(cands) else R.reshape(len(raw), -1)
        Q, piv = _orthogonalize(allv, tol)
        if len(piv) == dim:
            break
        raw = [allv[i].reshape(d, d) for i in piv]
        dim = len(raw)
    return Subspace(Q, d * d, tol)


def reductive_split(k: LieAlgebraData) -> tuple[Subspace, Subspace]:
    """Split a compact-type algebra into its center and derived algebra.

    Subspaces are returned in the matrix ambient space when ``k`` is
    realized, otherwise in coordinate space.
    """
    n = k.dim
    c = k.structure_constants
    tol = k.tol
    ex = k.exact
    if n == 0:
        empty = Subspace(zeros((0, 0), ex), 0, tol)
        return empty, empty
    # x is central iff sum_j x_j c[j, i, l] = 0 for all i, l
    M = c.transpose(1, 2, 0).reshape(n * n, n)
    center_c = nullspace(M, tol)
    derived_c = orthonormalize(list(c.reshape(n * n, n)), tol, n)
    both = np.concatenate([center_c.reshape(-1, n), derived_c.basis.reshape(-1, n)])
    if center_c.shape[0] + derived_c.dim != n or rank(both, tol) != n:
        raise ReductiveError(
            f"not reductive/compact-type input: dim center {center_c.shape[0]} + "
            f"dim derived {derived_c.dim} does not split dim {n}")
    if k.basis is None:
        return orthonormalize(list(center_c), tol, n), derived_c
    to_mat = lambda rows: [np.tensordot(r, k.basis, axes=(0, 0)) for r in rows]
    D = k.basis[0].size
    center = orthonormalize(to_mat(center_c), tol, D)
    derived = orthonormalize(to_mat(c.reshape(n * n, n)), tol, D)
    return center, derived


def project(sub: Subspace, v, complement: Subspace | None = None,
            tol: float | None = None) -> np.ndarray:
    """Project ``v`` onto ``sub``; along ``complement`` when one is given."""
    v = np.asarray(v)
    if complement is None:
        return sub.project(v)
    if sub.ambient_dim != complement.ambient_dim:
        raise DimensionError("subspace and complement live in different ambient spaces")
    tol = sub.tol if tol is None else tol
    B = np.concatenate([sub.basis, complement.basis]) if complement.dim else sub.basis
    if B.shape[0] == 0:
        if norm(v) > tol:
            raise DecompositionError("vector outside the zero decomposition")
        return v
    try:
        coef = Coordinates(B, tol).solve(v)
    except DecompositionError as exc:
        raise DecompositionError(f"vector not in sub + complement: {exc}") from None
    return (coef[:sub.dim] @ sub.basis).reshape(v.shape) if sub.dim else zeros(v.shape, is_exact(B))
