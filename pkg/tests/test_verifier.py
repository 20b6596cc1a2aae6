import numpy as np
import pytest

from conftest import built
from rhh.lie_core import as_float, max_abs
from rhh.structure_builder import EquivariantMaps, assemble, homogeneous_tensor
from rhh.verifier import (
    canonical_curvature,
    check_ambrose_singer,
    curvature_symmetry_residuals,
    holonomy_consistency,
    nomizu_reconstruct,
    random_sectional_curvatures,
    riemann_curvature,
    riemann_in_basis,
    s_dot_s,
    sectional_curvature,
)

H_STEP = 1e-4


def _metric(p):
    n = len(p)
    return np.eye(n) / p[-1] ** 2


def _christoffel(p):
    """Levi-Civita symbols of the half-space metric by central differences."""
    n = len(p)
    dg = np.zeros((n, n, n))  # dg[a] = d_a g
    for a in range(n):
        e = np.zeros(n)
        e[a] = H_STEP
        dg[a] = (_metric(p + e) - _metric(p - e)) / (2 * H_STEP)
    ginv = np.linalg.inv(_metric(p))
    # low[a, b, d] = 1/2 (d_a g_bd + d_b g_ad - d_d g_ab)
    low = 0.5 * (np.einsum("abd->abd", dg) + np.einsum("bad->abd", dg) - np.einsum("dab->abd", dg))
    return np.einsum("cd,abd->cab", ginv, low)


def _s_coords(p):
    """S^c_ab of S_X Y = g(X, Y) xi - g(Y, xi) X, xi = y d_y, in coordinates."""
    n, y = len(p), p[-1]
    eye = np.eye(n)
    S = np.einsum("ab,c->cab", eye, eye[-1]) / y - np.einsum("b,ac->cab", eye[-1], eye) / y
    return S


def _nabla_s(p):
    n = len(p)
    G = _christoffel(p)
    S = _s_coords(p)
    out = np.zeros((n, n, n, n))  # out[a, c, d, b] = (nabla_a S)^c_db
    for a in range(n):
        e = np.zeros(n)
        e[a] = H_STEP
        out[a] = (_s_coords(p + e) - _s_coords(p - e)) / (2 * H_STEP)
    out += np.einsum("cae,edb->acdb", G, S)
    out -= np.einsum("ead,ceb->acdb", G, S)
    out -= np.einsum("eab,cde->acdb", G, S)
    return out


@pytest.mark.parametrize("point", [(0.3, -1.2, 0.7), (2.0, 0.1, 1.9), (-0.5, 0.4, 0.25)])
def test_s_dot_s_matches_finite_differences(point):
    p = np.array(point)
    n = len(p)
    y = p[-1]
    # frame E_i = y d_i: components pick up y for each slot, d_c = E_c / y
    fd = y ** 2 * _nabla_s(p)  # [x, w, y, z]
    fd = fd.transpose(0, 2, 3, 1)  # [x, y, z, w]
    T = as_float(homogeneous_tensor(built(f"n={n} r=0 ss=none")).T)
    assert np.abs(fd - s_dot_s(T)).max() < 1e-6


def test_flat_phi_has_no_canonical_curvature():
    H = built("n=5 r=0 ss=none")
    assert max_abs(canonical_curvature(H)) == 0
    assert holonomy_consistency(H) == 0


@pytest.mark.parametrize("text", [
    "n=4 r=0 ss=su2", "n=7 r=1 ss=su2 phi=random A1=random phiA=random seed=3",
    "n=4 r=1 ss=none", "n=5 hol=so_n",
])
def test_curvature_symmetries_and_value(text):
    H = built(text)
    R = riemann_curvature(H)
    assert all(v < 1e-12 for v in curvature_symmetry_residuals(R).values())
    sec = random_sectional_curvatures(R, 100, seed=1)
    assert np.abs(sec + 1).max() < 1e-12


def test_scaled_curvature():
    H = built("n=4 r=1 ss=none c=2")
    R = riemann_curvature(H)
    assert sectional_curvature(R, [1, 0, 0, 0], [0, 1, 1, 0]) == pytest.approx(-2)


def test_symmetric_curvature_exact():
    H = built("n=4 hol=so_n")
    Rb = riemann_in_basis(H)
    G = H.gram
    want = -(np.einsum("jk,il->ijkl", G, G) - np.einsum("ik,jl->ijkl", G, G))
    assert all(v == 0 for v in (Rb - want).ravel())


@pytest.mark.parametrize("text", ["n=3 r=0 ss=none", "n=7 r=1 ss=su2", "n=6 r=0 ss=su2 A1=random seed=5"])
def test_ambrose_singer_passes(text):
    rep = check_ambrose_singer(built(text))
    assert rep.passed, rep.failures()
    assert rep.curvature_constant == pytest.approx(-1)


def test_corrupted_phi_fails():
    H = built("n=4 r=0 ss=su2")
    m = H.maps
    rng = np.random.default_rng(9)
    bad = EquivariantMaps(m.n, m.h_basis, as_float(m.phi_nilp) + rng.normal(size=m.phi_nilp.shape),
                          as_float(m.phi_A), as_float(m.A1))
    Hb = assemble(H.spec, H.h, H.module_split, bad, check=False)
    rep = check_ambrose_singer(Hb)
    assert not rep.passed
    assert {"m_stability", "h_invariance_S"} <= set(rep.failures())
    # the metric still comes from a simply transitive group, so sec = -1 survives
    assert rep.residuals["constant_curvature"] < 1e-9


@pytest.mark.parametrize("text,dim", [
    ("n=5 r=0 ss=none", 5), ("n=4 r=0 ss=su2", 7), ("n=7 r=1 ss=su2", 11), ("n=4 hol=so_n", 10),
])
def test_nomizu_dimension(text, dim):
    alg = nomizu_reconstruct(built(text))
    assert alg.dim == dim
    assert alg.jacobi_residual() < 1e-12


def test_holonomy_consistency_random():
    H = built("n=7 r=1 ss=su2 phi=random A1=random phiA=random seed=3")
    assert holonomy_consistency(H) < 1e-9
