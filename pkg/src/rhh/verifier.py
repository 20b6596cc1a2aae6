"""Curvature, Ambrose-Singer checks and the Nomizu reconstruction.

Curvature follows R(X, Y) = [D_X, D_Y] - D_[X,Y], so sectional curvature is
g(R(X, Y)Y, X) and RH(n) has sec = -1 at the default normalization.  Four
index arrays are covariant in the orthonormal frame:
R[i, j, k, l] = g(R(e_i, e_j) e_k, e_l).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import StructureError
from .holonomy import hol_action, holonomy_from_brackets
from .lie_core import (
    Coordinates,
    LieAlgebraData,
    as_float,
    is_exact,
    max_abs,
    orthonormalize,
    span_closure,
    subspace_distance,
    zeros,
)
from .structure import HomogeneousStructure, Tensor3, transform
from .structure_builder import homogeneous_tensor, tensor_in_basis


def _pieces(H: HomogeneousStructure):
    """Basis-coordinate data in one scalar mode: (G, Ginv, mm_m, mm_h, D, M)."""
    M = H.frame_matrix
    arrs = [H.gram, H.gram_inverse, H.mm_m, H.mm_h, H.hm_m, M]
    if not is_exact(M) or not H.exact:
        arrs = [as_float(a) for a in arrs]
    return arrs


def _lower(E: np.ndarray, G: np.ndarray) -> np.ndarray:
    """Endomorphism-valued array E[..., l, k] (b_l coefficient of E b_k) to g(E b_k, b_m)."""
    return np.einsum("...lk,lm->...km", E, G)


def _isotropy_matrices(D: np.ndarray) -> np.ndarray:
    """acts[a][l, k]: b_l-coefficient of [h_a, b_k]."""
    return D.transpose(0, 2, 1)


def _canonical_endos(H: HomogeneousStructure, mm_h, D) -> np.ndarray:
    """Rt[i, j] as endomorphisms: -ad([b_i, b_j]_h) on m."""
    n = H.n
    if H.p == 0:
        return zeros((n, n, n, n), is_exact(mm_h))
    return -np.einsum("ija,alk->ijlk", mm_h, _isotropy_matrices(D))


def _s_endos(T: np.ndarray, Ginv: np.ndarray) -> np.ndarray:
    """S_end[i][l, j]: b_l coefficient of S_{b_i} b_j."""
    return np.einsum("ijk,kl->ilj", T, Ginv)


def _riemann_endos(H, Rt, S_end, mm_m) -> np.ndarray:
    comm = np.einsum("ilm,jmk->ijlk", S_end, S_end)
    comm = comm - comm.transpose(1, 0, 2, 3)
    tors = np.einsum("ijq,qlk->ijlk", mm_m, S_end)
    return Rt + comm - tors


def canonical_curvature(H: HomogeneousStructure) -> np.ndarray:
    G, _, _, mm_h, D, M = _pieces(H)
    return transform(_lower(_canonical_endos(H, mm_h, D), G), M)


def riemann_in_basis(H: HomogeneousStructure) -> np.ndarray:
    """g(R(b_i, b_j) b_k, b_l) in the adapted basis; exact when H is."""
    G, Ginv, mm_m, mm_h, D = H.gram, H.gram_inverse, H.mm_m, H.mm_h, H.hm_m
    T = tensor_in_basis(H)
    if not H.exact:
        G, Ginv, mm_m, mm_h, D, T = (as_float(a) for a in (G, Ginv, mm_m, mm_h, D, T))
    R = _riemann_endos(H, _canonical_endos(H, mm_h, D), _s_endos(T, Ginv), mm_m)
    return _lower(R, G)


def constant_curvature_form(G: np.ndarray, K) -> np.ndarray:
    """K (g_jk g_il - g_ik g_jl) for a Gram matrix G."""
    return K * (np.einsum("jk,il->ijkl", G, G) - np.einsum("ik,jl->ijkl", G, G))


def riemann_curvature(H: HomogeneousStructure, check: bool = True,
                      tol: float | None = None) -> np.ndarray:
    M = H.frame_matrix
    Rb = riemann_in_basis(H)
    Rf = transform(Rb if is_exact(M) else as_float(Rb), M)
    if check:
        res = curvature_residual(Rf, expected_curvature(H))
        if res > (H.tol if tol is None else tol):
            raise StructureError(f"curvature is not constant (residual {res:.3e})")
    return Rf


def expected_curvature(H: HomogeneousStructure) -> float:
    c = H.spec.curvature if H.spec is not None else 1.0
    return -float(c)


def constant_curvature_tensor(n: int, K) -> np.ndarray:
    eye = np.eye(n)
    return K * (np.einsum("jk,il->ijkl", eye, eye) - np.einsum("ik,jl->ijkl", eye, eye))


def curvature_residual(R: np.ndarray, K: float) -> float:
    return max_abs(as_float(R) - constant_curvature_tensor(R.shape[0], K))


def sectional_curvature(R: np.ndarray, X, Y) -> float:
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    num = np.einsum("ijkl,i,j,k,l->", as_float(R), X, Y, Y, X)
    den = (X @ X) * (Y @ Y) - (X @ Y) ** 2
    return float(num / den)


def random_sectional_curvatures(R: np.ndarray, count: int = 100, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    n = R.shape[0]
    return np.array([sectional_curvature(R, rng.normal(size=n), rng.normal(size=n))
                     for _ in range(count)])


def curvature_symmetry_residuals(R: np.ndarray) -> dict[str, float]:
    R = as_float(R)
    return {
        "pair_skew": max(max_abs(R + R.transpose(1, 0, 2, 3)), max_abs(R + R.transpose(0, 1, 3, 2))),
        "pair_exchange": max_abs(R - R.transpose(2, 3, 0, 1)),
        "bianchi": max_abs(R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)),
    }


# ---------------------------------------------------------------------------
# Ambrose-Singer
# ---------------------------------------------------------------------------


def derivation_action(X: np.ndarray, T: np.ndarray) -> np.ndarray:
    """X . T for a covariant tensor T and an endomorphism X[l, k] (b_l coefficient of X b_k)."""
    out = 0
    letters = "abcdefgh"[: T.ndim]
    for slot in range(T.ndim):
        src = letters.replace(letters[slot], "z")
        out = out - np.einsum(f"z{letters[slot]},{src}->{letters}", X, T)
    return out


@dataclass
class VerificationReport:
    residuals: dict[str, float]
    thresholds: dict[str, float]
    curvature_constant: float
    reconstructed_dim: int
    meta: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.residuals[k] < self.thresholds[k] for k in self.residuals)

    def failures(self) -> list[str]:
        return [k for k in self.residuals if not self.residuals[k] < self.thresholds[k]]

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "thresholds": dict(self.thresholds),
            "failures": self.failures(),
            "curvature_constant": self.curvature_constant,
            "reconstructed_dim": self.reconstructed_dim,
        }


def check_ambrose_singer(H: HomogeneousStructure, tol: float | None = None) -> VerificationReport:
    tol = H.tol if tol is None else tol
    G, Ginv, mm_m, mm_h, D, M = _pieces(H)
    T = tensor_in_basis(H)
    if not is_exact(G):
        T = as_float(T)
    res: dict[str, float] = {}

    Tf = transform(T, M)
    res["skew"] = max_abs(Tf + Tf.transpose(0, 2, 1))
    brk = transform(np.einsum("ijl,lk->ijk", mm_m, G), M)
    res["torsion"] = max_abs(Tf - Tf.transpose(1, 0, 2) - brk)
    res["m_stability"] = max_abs(H.hm_h) if H.p else 0.0

    Rt_end = _canonical_endos(H, mm_h, D)
    R_end = _riemann_endos(H, Rt_end, _s_endos(T, Ginv), mm_m)
    Rc = _lower(R_end, G)
    acts = _isotropy_matrices(D) if H.p else []
    inv_g = inv_s = inv_r = 0.0
    for X in acts:
        inv_g = max(inv_g, max_abs(derivation_action(X, G)))
        inv_s = max(inv_s, max_abs(derivation_action(X, T)))
        inv_r = max(inv_r, max_abs(derivation_action(X, Rc)))
    res["h_invariance_g"] = inv_g
    res["h_invariance_S"] = inv_s
    res["h_invariance_R"] = inv_r

    # hol is spanned by the canonical curvature endomorphisms
    hol_gens = Rt_end.reshape(-1, H.n, H.n)
    hol_s = hol_r = 0.0
    for X in hol_gens:
        if max_abs(X) == 0:
            continue
        hol_s = max(hol_s, max_abs(derivation_action(X, T)))
        hol_r = max(hol_r, max_abs(derivation_action(X, Rc)))
    res["hol_invariance_S"] = hol_s
    res["hol_invariance_R"] = hol_r

    Rf = transform(Rc, M)
    K = expected_curvature(H)
    res["constant_curvature"] = curvature_residual(Rf, K)
    try:
        alg = nomizu_reconstruct(H, check=False)
        res["nomizu_jacobi"] = alg.jacobi_residual()
        rdim = alg.dim
    except Exception:  # a corrupted structure may not even decompose
        res["nomizu_jacobi"] = float("inf")
        rdim = -1
    res = {k: float(v) for k, v in res.items()}
    thresholds = {k: tol for k in res}
    Kest = float(np.mean([as_float(Rf)[i, j, j, i] for i in range(H.n) for j in range(H.n) if i != j])) \
        if H.n > 1 else 0.0
    return VerificationReport(res, thresholds, Kest, rdim)


# ---------------------------------------------------------------------------
# S.S and Nomizu
# ---------------------------------------------------------------------------


def s_dot_s(S) -> np.ndarray:
    """Out[x, y, z, w] = g((S_x . S)_y z, e_w) in an orthonormal frame."""
    T = S.T if isinstance(S, Tensor3) else np.asarray(S)
    return (np.einsum("yzk,xkw->xyzw", T, T) - np.einsum("xyk,kzw->xyzw", T, T)
            - np.einsum("xzk,ykw->xyzw", T, T))


def curvature_holonomy(H: HomogeneousStructure):
    """Bracket closure of the canonical curvature endomorphisms (frame matrices)."""
    Rt = canonical_curvature(H)
    n = H.n
    # as endomorphisms in the orthonormal frame: E[i, j][l, k] = R[i, j, k, l]
    gens = [Rt[i, j].T for i in range(n) for j in range(i + 1, n) if max_abs(Rt[i, j]) > 0]
    if not gens:
        return orthonormalize([], H.tol, n * n)
    return span_closure(gens, H.tol, n * n)


def holonomy_consistency(H: HomogeneousStructure) -> float:
    """Distance between the curvature closure and the bracket holonomy acting on m."""
    res = holonomy_from_brackets(H)
    acts = hol_action(H, res.hol)
    via_brackets = orthonormalize(list(acts), H.tol, H.n * H.n)
    return subspace_distance(curvature_holonomy(H), via_brackets)


def nomizu_reconstruct(H: HomogeneousStructure, check: bool = True,
                       tol: float | None = None) -> LieAlgebraData:
    """hol + m with [U, V] = UV - VU, [U, X] = U X, [X, Y] = -Rt(X, Y) + S_X Y - S_Y X."""
    tol = H.tol if tol is None else tol
    n = H.n
    Tf = homogeneous_tensor(H).T
    Rt = canonical_curvature(H)
    if not is_exact(Tf) or not is_exact(Rt):
        Tf, Rt = as_float(Tf), as_float(Rt)
    Rend = Rt.transpose(0, 1, 3, 2)
    hol = curvature_holonomy(H)
    E = hol.matrices()
    if not is_exact(Tf):
        E = as_float(E)
    q = hol.dim
    d = q + n
    c = np.zeros((d, d, d), dtype=object if is_exact(Tf) else float)
    if is_exact(Tf):
        c[...] = 0
    coords = Coordinates(E.reshape(q, -1), tol) if q else None
    for u in range(q):
        for v in range(q):
            c[u, v, :q] = coords.solve(E[u] @ E[v] - E[v] @ E[u])
        for k in range(n):
            c[u, q + k, q:] = E[u][:, k]
            c[q + k, u, q:] = -E[u][:, k]
    for i in range(n):
        for j in range(n):
            if q:
                c[q + i, q + j, :q] = coords.solve(-Rend[i, j])
            elif max_abs(Rend[i, j]) > tol:
                raise StructureError("curvature endomorphism outside the holonomy algebra")
            c[q + i, q + j, q:] = Tf[i, j] - Tf[j, i]
    alg = LieAlgebraData(c, None, tol)
    if check:
        jr = alg.jacobi_residual()
        if jr > tol:
            raise StructureError(f"Nomizu bracket violates Jacobi (residual {jr:.3e})")
    return alg
