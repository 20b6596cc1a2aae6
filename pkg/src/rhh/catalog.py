"""Compact simple Lie algebras available as holonomy factors.

Each constructible factor supplies a basis of skew matrices that is
orthogonal with equal norms for the trace form, so its adjoint matrices are
skew-symmetric and can be embedded in so(n-1) unchanged.

Enumeration of holonomy types is complete only relative to this table;
g2 and sp3 are listed by dimension and cannot be built.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .lie_core import LieAlgebraData, exact


def _unit(m: int, i: int, j: int) -> np.ndarray:
    E = np.zeros((m, m), dtype=int)
    E[i, j] = 1
    return E


def so_basis(m: int) -> np.ndarray:
    """E_ij - E_ji for i < j in lexicographic order."""
    out = [_unit(m, i, j) - _unit(m, j, i) for i in range(m) for j in range(i + 1, m)]
    return np.array(out, dtype=int).reshape(-1, m, m)


def su2_basis() -> np.ndarray:
    """so(3) in the cyclic basis L1 = E23 - E32, L2 = E31 - E13, L3 = E12 - E21."""
    return np.array([
        _unit(3, 1, 2) - _unit(3, 2, 1),
        _unit(3, 2, 0) - _unit(3, 0, 2),
        _unit(3, 0, 1) - _unit(3, 1, 0),
    ])


def _gell_mann() -> list[np.ndarray]:
    s3 = 1 / np.sqrt(3)
    lam = np.zeros((8, 3, 3), dtype=complex)
    lam[0][0, 1] = lam[0][1, 0] = 1
    lam[1][0, 1], lam[1][1, 0] = -1j, 1j
    lam[2][0, 0], lam[2][1, 1] = 1, -1
    lam[3][0, 2] = lam[3][2, 0] = 1
    lam[4][0, 2], lam[4][2, 0] = -1j, 1j
    lam[5][1, 2] = lam[5][2, 1] = 1
    lam[6][1, 2], lam[6][2, 1] = -1j, 1j
    lam[7] = s3 * np.diag([1, 1, -2])
    return list(lam)


def su3_basis() -> np.ndarray:
    """i * Gell-Mann matrices, realified to 6x6 skew matrices."""
    out = []
    for lam in _gell_mann():
        M = 1j * lam
        out.append(np.block([[M.real, -M.imag], [M.imag, M.real]]))
    return np.array(out)


@dataclass(frozen=True)
class SimpleFactor:
    name: str
    dim: int
    exact: bool = True
    build: Callable[[], np.ndarray] | None = None

    @property
    def constructible(self) -> bool:
        return self.build is not None

    def basis(self, exact_mode: bool | None = None) -> np.ndarray:
        if self.build is None:
            raise NotImplementedError(f"{self.name} is listed by dimension only")
        B = self.build()
        use_exact = self.exact if exact_mode is None else exact_mode and self.exact
        return exact(B) if use_exact else np.asarray(B, dtype=float)

    def adjoint(self, exact_mode: bool | None = None) -> np.ndarray:
        """ad matrices (dim, dim, dim); entry [a][k, j] is the b_k-coefficient of [b_a, b_j]."""
        return _adjoint(self.name, self.exact if exact_mode is None else exact_mode and self.exact)


@lru_cache(maxsize=None)
def _adjoint(name: str, exact_mode: bool) -> np.ndarray:
    k = LieAlgebraData.from_basis(CATALOG[name].basis(exact_mode))
    return np.array([k.ad(i) for i in range(k.dim)])


CATALOG: dict[str, SimpleFactor] = {
    f.name: f
    for f in [
        SimpleFactor("su2", 3, True, su2_basis),
        SimpleFactor("su3", 8, False, su3_basis),
        SimpleFactor("so5", 10, True, lambda: so_basis(5)),
        SimpleFactor("g2", 14, True, None),
        SimpleFactor("so6", 15, True, lambda: so_basis(6)),
        SimpleFactor("so7", 21, True, lambda: so_basis(7)),
        SimpleFactor("sp3", 21, True, None),
        SimpleFactor("so8", 28, True, lambda: so_basis(8)),
    ]
}

_ALIASES = {"so3": "su2", "sp1": "su2", "sp2": "so5", "su4": "so6"}


def factor(name: str) -> SimpleFactor:
    key = name.strip().lower().replace("(", "").replace(")", "")
    key = _ALIASES.get(key, key)
    try:
        return CATALOG[key]
    except KeyError:
        raise KeyError(f"unknown simple factor {name!r}; catalog: {', '.join(CATALOG)}") from None
