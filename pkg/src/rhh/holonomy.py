"""Holonomy algebras of canonical connections and admissible holonomy types."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import NamedTuple

import numpy as np

from .catalog import CATALOG
from .errors import NotApplicableError
from .hyperbolic_model import nilp_element
from .lie_core import (
    Coordinates,
    LieAlgebraData,
    Subspace,
    as_float,
    like,
    max_abs,
    orthonormalize,
    reductive_split,
    span_closure,
    subspace_distance,
)
from .structure import HomogeneousStructure


@dataclass(frozen=True, eq=False)
class HolonomyResult:
    hol: Subspace
    predicted: Subspace
    dim: int
    center_dim: int
    ss_dim: int
    matched_prediction: bool
    residual: float

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "center_dim": self.center_dim,
            "ss_dim": self.ss_dim,
            "predicted_dim": self.predicted.dim,
            "matched_prediction": self.matched_prediction,
            "residual": float(self.residual),
        }


def bracket_generators(H: HomogeneousStructure) -> list[np.ndarray]:
    """[b_i, b_j]_h for i < j, as matrices."""
    if H.p == 0:
        return []
    mmh = H.mm_h
    out = []
    for i in range(H.n):
        for j in range(i + 1, H.n):
            X = np.tensordot(mmh[i, j], H.h.basis, axes=(0, 0))
            if max_abs(X) > 0:
                out.append(X)
    return out


def _algebra_of(sub: Subspace) -> LieAlgebraData:
    return LieAlgebraData.from_basis(sub.matrices(), sub.tol)


def split_dims(sub: Subspace) -> tuple[int, int]:
    """(center dim, derived dim) of a bracket-closed subspace."""
    if sub.dim == 0:
        return 0, 0
    center, derived = reductive_split(_algebra_of(sub))
    return center.dim, derived.dim


def predicted_holonomy(H: HomogeneousStructure) -> Subspace:
    """phi(nilp) inside h; all of h for the symmetric description."""
    D = H.size ** 2
    if H.maps is None:
        return orthonormalize(list(H.h.basis), H.tol, D)
    units = like(np.eye(H.n - 1), H.maps.phi_nilp)
    return orthonormalize([H.maps.phi(nilp_element(u)) for u in units], H.tol, D)


def holonomy_from_brackets(H: HomogeneousStructure) -> HolonomyResult:
    D = H.size ** 2
    gens = bracket_generators(H)
    hol = span_closure(gens, H.tol, D) if gens else orthonormalize([], H.tol, D)
    pred = predicted_holonomy(H)
    dist = subspace_distance(hol, pred)
    r, ss = split_dims(hol)
    return HolonomyResult(hol, pred, hol.dim, r, ss, dist < H.tol, dist)


def hol_action(H: HomogeneousStructure, sub: Subspace) -> np.ndarray:
    """Matrices of the hol basis acting on m in the orthonormal frame."""
    if sub.dim == 0:
        return np.zeros((0, H.n, H.n))
    coords = Coordinates(H.h.basis.reshape(H.p, -1), H.tol)
    X = coords.solve_many(sub.basis)
    M = H.frame_matrix
    G = H.gram
    D = H.hm_m
    if not (H.exact and M.dtype == object):
        X, M, G, D = as_float(X), as_float(M), as_float(G), as_float(D)
    acts = np.einsum("qa,akl->qlk", X, D)  # acts[q][l, k]: b_l-coefficient of x_q . b_k
    return np.einsum("ip,pr,qrs,js->qij", M, G, acts, M)


def transversal_margin(H: HomogeneousStructure) -> float:
    """Smallest singular value of 1 + ad(A0) on nilp."""
    if H.maps is None:
        raise NotApplicableError("no transversal element for the symmetric description")
    n = H.n
    A0 = as_float(H.maps.A0)
    units = np.eye(n - 1)
    cols = [nilp_element(u) + (A0 @ nilp_element(u) - nilp_element(u) @ A0) for u in units]
    Mx = np.array([c[: n - 1, n] for c in cols]).T
    return float(np.linalg.svd(Mx, compute_uv=False).min())


# ---------------------------------------------------------------------------
# admissible holonomy types
# ---------------------------------------------------------------------------


def check_admissible(n: int, r: int, ss_dims) -> bool:
    ss_dims = list(ss_dims)
    if r < 0 or any(d < 3 for d in ss_dims):
        raise ValueError("need r >= 0 and simple factor dimensions >= 3")
    return 3 * r + sum(ss_dims) <= n - 1


class AdmissibleEntry(NamedTuple):
    r: int
    ss: tuple[str, ...]
    dim: int
    so_n: bool = False

    @property
    def ss_dim(self) -> int:
        return sum(CATALOG[s].dim for s in self.ss)

    def budget(self) -> int:
        return 3 * self.r + self.ss_dim

    def to_dict(self, n: int | None = None) -> dict:
        if self.so_n:
            return {"so_n": True, "dim": self.dim}
        d = {"r": self.r, "ss": list(self.ss), "dim": self.dim}
        if n is not None:
            d["constraint"] = self.budget()
            d["bound"] = n - 1
        return d


def enumerate_admissible(n: int) -> list[AdmissibleEntry]:
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    names = sorted(CATALOG, key=lambda s: (CATALOG[s].dim, s))
    out = []
    for r in range((n - 1) // 3 + 1):
        room = n - 1 - 3 * r
        for k in range(room // 3 + 1):
            for combo in combinations_with_replacement(names, k):
                d = sum(CATALOG[s].dim for s in combo)
                if d <= room:
                    out.append(AdmissibleEntry(r, combo, r + d))
    out.sort(key=lambda e: (e.dim, e.r, e.ss))
    out.append(AdmissibleEntry(0, (), n * (n - 1) // 2, True))
    return out


def enumeration_json(n: int) -> dict:
    return {"n": n, "entries": [e.to_dict(n) for e in enumerate_admissible(n)]}


class IsotropyModule(NamedTuple):
    module: str
    dim: int
    kind: str


def isotropy_module_report(H: HomogeneousStructure) -> list[IsotropyModule]:
    """m = V_hol + V_1 + (xi line) + trivial remainder, with the hol action checked.

    V_hol is isomorphic to hol through phi; the Abelian part acts trivially on
    its own share of it, so its kind is reported as ``adjoint`` regardless.
    """
    if H.maps is None or H.module_split is None:
        raise NotApplicableError("module report does not apply to full so(n) holonomy")
    res = holonomy_from_brackets(H)
    n = H.n
    if res.dim == 0:
        return [IsotropyModule("m", n, "trivial")]
    acts = as_float(hol_action(H, res.hol))
    # the canonical frame agrees with the adapted basis up to scale
    sp = H.module_split

    def acts_on(idx) -> bool:
        idx = list(idx)
        return bool(idx) and float(np.abs(acts[:, :, idx]).max()) > H.tol

    return [
        IsotropyModule("V_hol", sp.vk_dim, "adjoint"),
        IsotropyModule("V_1", sp.v1_dim,
                       "center-effective" if acts_on(range(*sp.v1)) else "trivial"),
        IsotropyModule("a_r", 1, "hol" if acts_on([n - 1]) else "trivial"),
        IsotropyModule("R^m", sp.triv_dim, "hol" if acts_on(range(*sp.triv)) else "trivial"),
    ]
