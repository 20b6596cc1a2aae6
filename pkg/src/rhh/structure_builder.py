"""Homogeneous structures on RH(n) built from abstract holonomy data.

A spec names the holonomy algebra k = R^r + (simple factors).  The nilpotent
part R^{n-1} is split as V_k + V_1 + R^m: k acts on V_k by its adjoint
representation, the Abelian part rotates r planes of V_1, and R^m is
trivial.  The complement m is the graph of an equivariant map phi, and the
metric makes xi a unit vector orthogonal to the lifted nilpotent part, which
carries the standard inner product.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from .catalog import factor
from .errors import AdmissibilityError, SpecParseError, StructureError
from .hyperbolic_model import (
    generator_A,
    nilp_coordinates,
    nilp_element,
    so_block,
    so_n_minus_1_basis,
    symmetric_structure,
)
from .lie_core import (
    DEFAULT_TOL,
    LieAlgebraData,
    Rational,
    as_float,
    bracket,
    exact,
    is_exact,
    like,
    max_abs,
    nullspace,
    zeros,
)
from .structure import HomogeneousStructure, Tensor3, transform

PHI_MODES = ("canonical", "scaled", "random")
RANDOM_MODES = ("zero", "random")


# ---------------------------------------------------------------------------
# specs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StructureSpec:
    n: int
    r: int = 0
    ss: tuple[str, ...] = ()
    phi: str = "canonical"
    t: float = 1.0
    A1: str = "zero"
    phiA: str = "zero"
    seed: int = 0
    symmetric: bool = False
    curvature: float = 1.0
    scalar: str = "auto"

    def __post_init__(self):
        try:
            object.__setattr__(self, "ss", tuple(factor(s).name for s in self.ss))
        except KeyError as exc:
            raise SpecParseError(exc.args[0]) from None
        if self.phi not in PHI_MODES:
            raise SpecParseError(f"phi mode must be one of {PHI_MODES}, got {self.phi!r}")
        for key in ("A1", "phiA"):
            if getattr(self, key) not in RANDOM_MODES:
                raise SpecParseError(f"{key} mode must be one of {RANDOM_MODES}")
        if self.scalar not in ("auto", "exact", "float"):
            raise SpecParseError("scalar must be auto, exact or float")
        if self.r < 0:
            raise SpecParseError("r must be non-negative")
        if self.t < 0:
            raise SpecParseError("scale t must be non-negative")
        if self.curvature <= 0:
            raise SpecParseError("curvature scale must be positive")

    # -- admissibility -----------------------------------------------------
    @property
    def ss_dim(self) -> int:
        return sum(factor(s).dim for s in self.ss)

    @property
    def hol_dim(self) -> int:
        if self.symmetric:
            return self.n * (self.n - 1) // 2
        return self.r + self.ss_dim

    @property
    def budget(self) -> int:
        return 3 * self.r + self.ss_dim

    def admissible(self) -> bool:
        if self.n < 2:
            return False
        return self.symmetric or self.budget <= self.n - 1

    def validate(self) -> None:
        if self.n < 2:
            raise AdmissibilityError(f"n must be at least 2, got {self.n}")
        if not self.admissible():
            raise AdmissibilityError(
                f"inadmissible holonomy: 3r + dim k_ss = 3*{self.r} + {self.ss_dim} = "
                f"{self.budget} > n - 1 = {self.n - 1}")
        for s in self.ss:
            if not factor(s).constructible:
                raise AdmissibilityError(f"factor {s} is listed by dimension only and cannot be realized")

    # -- scalar mode ---------------------------------------------------------
    @property
    def exact_mode(self) -> bool:
        factors_exact = all(factor(s).exact for s in self.ss)
        if self.scalar == "float":
            return False
        if self.scalar == "exact":
            if not factors_exact:
                raise SpecParseError("exact mode requested for a factor with irrational structure constants")
            return True
        if self.symmetric:
            return True
        return (factors_exact and self.phi != "random" and self.A1 == "zero"
                and self.phiA == "zero")

    # -- text form ---------------------------------------------------------
    def to_text(self) -> str:
        parts = [f"n={self.n}"]
        if self.symmetric:
            parts.append("hol=so_n")
        else:
            parts.append(f"r={self.r}")
            parts.append("ss=" + (",".join(self.ss) if self.ss else "none"))
            if self.phi == "canonical" and self.t != 1:
                parts.append(f"phi=scaled({_fmt(self.t)})")
            else:
                parts.append(f"phi={self.phi}")
                if self.t != 1:
                    parts.append(f"t={_fmt(self.t)}")
            parts.append(f"A1={self.A1}")
            parts.append(f"phiA={self.phiA}")
            parts.append(f"seed={self.seed}")
        if self.curvature != 1:
            parts.append(f"c={_fmt(self.curvature)}")
        if self.scalar != "auto":
            parts.append(f"scalar={self.scalar}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    @classmethod
    def parse(cls, text: str) -> "StructureSpec":
        kw: dict = {}
        for tok in text.split():
            if "=" not in tok:
                raise SpecParseError(f"expected key=value, got {tok!r}")
            key, val = tok.split("=", 1)
            try:
                if key == "n":
                    kw["n"] = int(val)
                elif key == "r":
                    kw["r"] = int(val)
                elif key == "ss":
                    kw["ss"] = parse_factor_list(val)
                elif key == "phi":
                    m = re.fullmatch(r"scaled\(([^)]*)\)", val)
                    if m:
                        kw["phi"] = "canonical"
                        kw["t"] = kw.get("t", 1.0) * float(m.group(1))
                    elif val.startswith("random"):
                        kw["phi"] = "random"
                    else:
                        kw["phi"] = val
                elif key == "t":
                    kw["t"] = kw.get("t", 1.0) * float(val)
                elif key in ("A1", "phiA"):
                    kw[key] = "random" if val.startswith("random") else val
                elif key == "seed":
                    kw["seed"] = int(val)
                elif key == "hol":
                    if val not in ("so_n", "so(n)"):
                        raise SpecParseError(f"hol= only accepts so_n, got {val!r}")
                    kw["symmetric"] = True
                elif key == "c":
                    kw["curvature"] = float(val)
                elif key == "scalar":
                    kw["scalar"] = val
                else:
                    raise SpecParseError(f"unknown key {key!r}")
            except (ValueError, KeyError) as exc:
                if isinstance(exc, SpecParseError):
                    raise
                raise SpecParseError(f"bad value for {key}: {exc}") from None
        if "n" not in kw:
            raise SpecParseError("spec needs n=")
        return cls(**kw)


def _fmt(x: float) -> str:
    return repr(float(x)).rstrip("0").rstrip(".") if float(x) != int(x) else str(int(x))


def parse_factor_list(val: str) -> tuple[str, ...]:
    val = val.strip()
    if val in ("", "-", "none", "[]"):
        return ()
    return tuple(factor(s).name for s in val.strip("[]").split(",") if s.strip())


# ---------------------------------------------------------------------------
# module split and maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleSplit:
    """Index ranges inside R^{n-1} = V_k + V_1 + R^m (V_k = simple blocks then k_0)."""

    ss_blocks: tuple[tuple[str, int, int], ...]
    k0: tuple[int, int]
    v1: tuple[int, int]
    triv: tuple[int, int]

    @property
    def vk(self) -> tuple[int, int]:
        return (0, self.k0[1])

    @property
    def vk_dim(self) -> int:
        return self.k0[1]

    @property
    def v1_dim(self) -> int:
        return self.v1[1] - self.v1[0]

    @property
    def triv_dim(self) -> int:
        return self.triv[1] - self.triv[0]

    def trivial_coordinates(self) -> list[int]:
        """Coordinates on which the whole holonomy algebra acts trivially."""
        return list(range(*self.k0)) + list(range(*self.triv))


@dataclass(frozen=True, eq=False)
class EquivariantMaps:
    """phi on s = a + nilp (through coefficient matrices over the h basis) and A1.

    ``phi_nilp[a, j]`` is the h_a-coefficient of phi(N(e_j)); ``phi_A`` holds
    the coefficients of phi(A).
    """

    n: int
    h_basis: np.ndarray
    phi_nilp: np.ndarray
    phi_A: np.ndarray
    A1: np.ndarray

    def __post_init__(self):
        # a single float input drops every array to float
        arrs = ("h_basis", "phi_nilp", "phi_A", "A1")
        if not all(is_exact(getattr(self, a)) for a in arrs):
            for a in arrs:
                object.__setattr__(self, a, as_float(getattr(self, a)))

    @property
    def exact(self) -> bool:
        return is_exact(self.phi_nilp)

    def _h(self, coeffs) -> np.ndarray:
        if len(self.h_basis) == 0:
            return zeros((self.n + 1, self.n + 1), self.exact)
        return np.tensordot(np.asarray(coeffs), self.h_basis, axes=(0, 0))

    def phi(self, X) -> np.ndarray:
        """phi on s = a + nilp."""
        alpha = X[self.n - 1, self.n - 1]
        v = nilp_coordinates(X)
        return self._h(alpha * self.phi_A + self.phi_nilp @ v)

    def chi_r(self, X) -> np.ndarray:
        """s -> s_r, identity on nilp, A -> A + A1."""
        return X + X[self.n - 1, self.n - 1] * self.A1

    def phi_r(self, X) -> np.ndarray:
        """phi_r on s_r = R(A + A1) + nilp."""
        alpha = X[self.n - 1, self.n - 1]
        v = X[: self.n - 1, self.n]
        return self._h(alpha * self.phi_A + self.phi_nilp @ v)

    @property
    def A(self) -> np.ndarray:
        return generator_A(self.n, self.exact)

    @property
    def A0(self) -> np.ndarray:
        return self.A1 + self._h(self.phi_A)

    @property
    def xi(self) -> np.ndarray:
        return self.A + self.A0

    def lift(self, X) -> np.ndarray:
        """X_phi = X + phi(X)."""
        return X + self.phi(X)

    def scaled(self, t) -> "EquivariantMaps":
        t = _scalar(t, self.exact)
        return EquivariantMaps(self.n, self.h_basis, self.phi_nilp * t, self.phi_A * t, self.A1 * t)

    def residual(self) -> float:
        """Equivariance defect: phi on nilp, A1 in the centralizer, phi(A) central."""
        worst = 0.0
        nb = [nilp_element(u) for u in like(np.eye(self.n - 1), self.phi_nilp)]
        phiA = self._h(self.phi_A)
        for h in self.h_basis:
            for X in nb:
                worst = max(worst, max_abs(self.phi(bracket(h, X)) - bracket(h, self.phi(X))))
            worst = max(worst, max_abs(bracket(self.A1, h)), max_abs(bracket(phiA, h)))
        return worst


def _scalar(x, exact_mode: bool):
    if exact_mode:
        return x if isinstance(x, Rational) else Rational(str(x))
    return float(x)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def realize_compact_algebra(spec: StructureSpec) -> tuple[LieAlgebraData, ModuleSplit]:
    """Embed k = R^r + k_ss in so(n-1) acting on V_k + V_1 + R^m."""
    spec.validate()
    if spec.symmetric:
        raise ValueError("the symmetric description has no abstract holonomy data")
    n, r = spec.n, spec.r
    ex = spec.exact_mode
    blocks = []
    off = 0
    for name in spec.ss:
        f = factor(name)
        blocks.append((f.name, off, off + f.dim))
        off += f.dim
    k0 = (off, off + r)
    v1 = (k0[1], k0[1] + 2 * r)
    triv = (v1[1], n - 1)
    split = ModuleSplit(tuple(blocks), k0, v1, triv)

    elements = []
    for name, s, e in blocks:
        for ad in factor(name).adjoint(ex):
            B = zeros((n - 1, n - 1), ex)
            B[s:e, s:e] = like(ad, B)
            elements.append(so_block(B, n))
    for j in range(r):
        B = zeros((n - 1, n - 1), ex)
        i0 = v1[0] + 2 * j
        B[i0, i0 + 1] = B[i0, i0 + 1] - 1
        B[i0 + 1, i0] = B[i0 + 1, i0] + 1
        elements.append(so_block(B, n))
    if elements:
        basis = np.array(elements)
    else:
        basis = zeros((0, n + 1, n + 1), ex)
    return LieAlgebraData.from_basis(basis, DEFAULT_TOL), split


def centralizer_basis(h: LieAlgebraData, n: int, exact_mode: bool,
                      tol: float = DEFAULT_TOL) -> np.ndarray:
    """Basis of {B in so(n-1) : [B, h] = 0} as (n+1)x(n+1) matrices."""
    E = so_n_minus_1_basis(n, exact_mode)
    if len(E) == 0:
        return E
    if h.dim == 0:
        return E
    cols = [np.concatenate([bracket(Ei, ha).reshape(-1) for ha in h.basis]) for Ei in E]
    M = np.array(cols, dtype=E.dtype).T
    K = nullspace(M, tol)
    if len(K) == 0:
        return zeros((0, n + 1, n + 1), exact_mode)
    return np.tensordot(K, E, axes=(1, 0))


def _base_maps(spec: StructureSpec, k: LieAlgebraData, split: ModuleSplit) -> EquivariantMaps:
    n, p = spec.n, k.dim
    ex = spec.exact_mode
    rng = np.random.default_rng(spec.seed)
    Phi = np.zeros((p, n - 1))
    Phi[:split.vk_dim, :split.vk_dim] = np.eye(split.vk_dim)
    if spec.phi == "random":
        for _, s, e in split.ss_blocks:
            c = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
            Phi[s:e, s:e] = c * np.eye(e - s)
        triv_cols = split.trivial_coordinates()
        if spec.r:
            Phi[split.k0[0]:split.k0[1], :] = 0.0
            Phi[np.ix_(range(*split.k0), triv_cols)] = rng.normal(size=(spec.r, len(triv_cols)))
    phiA = np.zeros(p)
    if spec.phiA == "random" and spec.r:
        phiA[split.k0[0]:split.k0[1]] = rng.normal(size=spec.r)
    A1 = np.zeros((n + 1, n + 1))
    if spec.A1 == "random":
        C = centralizer_basis(k if not ex else LieAlgebraData(k.structure_constants, as_float(k.basis)),
                              n, False)
        if len(C):
            A1 = np.tensordot(rng.normal(size=len(C)) * 0.5, C, axes=(0, 0))
    if ex:
        Phi, phiA, A1 = exact(Phi), exact(phiA), exact(A1)
    basis = k.basis if k.dim else zeros((0, n + 1, n + 1), ex)
    return EquivariantMaps(n, basis, Phi, phiA, A1)


def assemble(spec: StructureSpec, k: LieAlgebraData, split: ModuleSplit | None,
             maps: EquivariantMaps, check: bool = True,
             tol: float = DEFAULT_TOL) -> HomogeneousStructure:
    """m = graph of phi with metric: xi unit, xi orthogonal to lifts, lifts standard."""
    n = spec.n
    ex = maps.exact
    if check:
        res = maps.residual()
        if res > tol:
            raise StructureError(f"phi is not h-equivariant (residual {res:.3e})")
    units = like(np.eye(n - 1), maps.phi_nilp)
    m_basis = np.array([maps.lift(nilp_element(u)) for u in units] + [maps.xi])
    G = like(np.eye(n), maps.phi_nilp)
    if spec.curvature != 1:
        G = G / _scalar(spec.curvature, ex)
    return HomogeneousStructure(n=n, h=k, m_basis=m_basis, gram=G, spec=spec, maps=maps,
                                module_split=split, tol=tol)


def build_structure(spec: StructureSpec | str, tol: float = DEFAULT_TOL) -> HomogeneousStructure:
    if isinstance(spec, str):
        spec = StructureSpec.parse(spec)
    spec.validate()
    if spec.symmetric:
        return symmetric_structure(spec.n, spec.exact_mode, spec.curvature, tol)
    k, split = realize_compact_algebra(spec)
    maps = _base_maps(spec, k, split)
    if spec.t != 1:
        maps = maps.scaled(spec.t)
    return assemble(spec, k, split, maps, tol=tol)


def scale_phi(H: HomogeneousStructure, t) -> HomogeneousStructure:
    """Rebuild H with phi, A1 and phi(A) multiplied by t >= 0."""
    if t < 0:
        raise ValueError("scale must be non-negative")
    if H.maps is None:
        raise ValueError("the symmetric description has no graph map to scale")
    spec = replace(H.spec, t=float(H.spec.t) * float(t))
    return assemble(spec, H.h, H.module_split, H.maps.scaled(t), tol=H.tol)


# ---------------------------------------------------------------------------
# homogeneous tensor
# ---------------------------------------------------------------------------


def tensor_in_basis(H: HomogeneousStructure) -> np.ndarray:
    """g(S_{b_i} b_j, b_k) from the Koszul-type formula, brackets projected to m."""
    W = np.einsum("ijl,lk->ijk", H.mm_m, H.gram)
    return (W - W.transpose(2, 0, 1) + W.transpose(1, 2, 0)) / 2


def homogeneous_tensor(H: HomogeneousStructure) -> Tensor3:
    return Tensor3(transform(tensor_in_basis(H), H.frame_matrix))


class TensorComponents(NamedTuple):
    S1: Tensor3
    S2: Tensor3
    Sr: Tensor3
    hr: np.ndarray


def tensor_components(H: HomogeneousStructure) -> TensorComponents:
    """Closed-form pieces S = S1 + S2, S2 = [B', C] + Sr, computed with matrix brackets."""
    if H.maps is None:
        raise ValueError("closed-form pieces apply to F_rN descriptions only")
    n = H.n
    maps = H.maps
    M = H.frame_matrix
    ex = H.exact and is_exact(M)
    G = H.gram if ex else as_float(H.gram)
    basis = H.m_basis if ex else as_float(H.m_basis)
    conv = (lambda a: a) if ex else as_float
    coords = H.m_coordinates
    phiA = conv(maps.phi(maps.A))
    A1 = conv(maps.A1)
    xi_c = zeros(n, ex)
    xi_c[n - 1] = xi_c[n - 1] + 1
    gxx = G[n - 1, n - 1]

    frame_c = [conv(M[i]) for i in range(n)]
    frame_mats = [np.tensordot(c, basis, axes=(0, 0)) for c in frame_c]
    lam = [(c @ G @ xi_c) / gxx for c in frame_c]
    xs = [c[: n - 1] for c in frame_c]

    units = like(np.eye(n - 1), G)
    Z = np.array([nilp_coordinates(bracket(A1, nilp_element(u))) for u in units]).T
    Gphi = G[: n - 1, : n - 1]
    Gphi_inv = H.gram_inverse[: n - 1, : n - 1] if ex else np.linalg.inv(Gphi)
    Zs = Gphi_inv @ Z.T @ Gphi

    def lift(x):
        out = zeros(n, ex)
        out[: n - 1] = x
        return out

    hr = zeros((n, n), ex)
    for i in range(n):
        for j in range(n):
            hr[i, j] = lift(Z @ xs[i]) @ G @ frame_c[j]

    S1 = zeros((n, n, n), ex)
    S2 = zeros((n, n, n), ex)
    Sr = zeros((n, n, n), ex)
    for i in range(n):
        Bp = lam[i] * phiA + conv(maps.phi(nilp_element(xs[i])))
        for j in range(n):
            gBC = frame_c[i] @ G @ frame_c[j]
            gCxi = frame_c[j] @ G @ xi_c
            s1 = (gBC * xi_c - gCxi * frame_c[i]) / gxx
            br = conv(coords.solve(bracket(Bp, frame_mats[j])))
            sr = (lift(lam[i] * ((Z - Zs) @ xs[j]) - lam[j] * ((Z + Zs) @ xs[i]))
                  + (hr[i, j] + hr[j, i]) / gxx * xi_c) / 2
            for k in range(n):
                fk = G @ frame_c[k]
                S1[i, j, k] = s1 @ fk
                Sr[i, j, k] = sr @ fk
                S2[i, j, k] = (br + sr) @ fk
    return TensorComponents(Tensor3(S1), Tensor3(S2), Tensor3(Sr), hr)


def component_traces(H: HomogeneousStructure) -> tuple[np.ndarray, np.ndarray]:
    """(sum_i Sr_{e_i} e_i, sum_i [e_i', e_i]) as frame coordinates; both vanish."""
    comps = tensor_components(H)
    n = H.n
    sr = np.einsum("iik->k", comps.Sr.T)
    M = H.frame_matrix
    ex = H.exact and is_exact(M)
    conv = (lambda a: a) if ex else as_float
    G = conv(H.gram)
    basis = conv(H.m_basis)
    maps = H.maps
    phiA = conv(maps.phi(maps.A))
    total = zeros(n, ex)
    for i in range(n):
        c = conv(M[i])
        lam = (c @ G[:, n - 1]) / G[n - 1, n - 1]
        Bp = lam * phiA + conv(maps.phi(nilp_element(c[: n - 1])))
        coords = conv(H.m_coordinates.solve(bracket(Bp, np.tensordot(c, basis, axes=(0, 0)))))
        total = total + coords
    return sr, np.array([total @ G @ conv(M[k]) for k in range(n)])
