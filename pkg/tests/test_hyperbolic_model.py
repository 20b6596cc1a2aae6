import numpy as np
import pytest

from rhh.hyperbolic_model import (
    build_so_n1,
    compact_basis,
    generator_A,
    iwasawa,
    lorentz_form,
    nilp_basis,
    nilp_element,
    p_basis,
    so_block,
    symmetric_structure,
)
from rhh.lie_core import as_float, bracket, exact, subspace_distance, orthonormalize, trace_form


@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_so_n1_dimension_and_form(n):
    g = build_so_n1(n)
    assert g.dim == n * (n + 1) // 2
    Q = lorentz_form(n)
    for X in g.basis:
        assert all(v == 0 for v in (X.T @ Q + Q @ X).ravel())
    assert g.jacobi_residual() == 0


def test_rejects_small_n():
    with pytest.raises(ValueError):
        build_so_n1(1)


@pytest.mark.parametrize("n", [3, 5])
def test_A_acts_by_one_on_nilp(n):
    A = generator_A(n)
    for N in nilp_basis(n):
        assert all(v == 0 for v in (bracket(A, N) - N).ravel())


def test_nilp_abelian_and_so_block_action():
    n = 5
    rng = np.random.default_rng(0)
    v = rng.normal(size=n - 1)
    w = rng.normal(size=n - 1)
    assert np.abs(bracket(nilp_element(v), nilp_element(w))).max() < 1e-12
    B = rng.normal(size=(n - 1, n - 1))
    B = B - B.T
    assert np.allclose(bracket(so_block(B, n), nilp_element(v)), nilp_element(B @ v))


@pytest.mark.parametrize("n", [3, 4])
def test_iwasawa_pieces_span(n):
    iw = iwasawa(n)
    assert (iw.so_n.dim, iw.a.dim, iw.nilp.dim) == (n * (n - 1) // 2, 1, n - 1)
    total = orthonormalize(list(iw.so_n.basis) + list(iw.a.basis) + list(iw.nilp.basis),
                           ambient_dim=(n + 1) ** 2)
    full = orthonormalize(list(iw.algebra.basis), ambient_dim=(n + 1) ** 2)
    assert subspace_distance(total.to_float(), full.to_float()) < 1e-12


def test_cartan_complement_orthogonal_to_compact():
    n = 4
    for P in p_basis(n):
        for K in compact_basis(n):
            assert trace_form(P, K) == 0


def test_symmetric_structure_is_symmetric_pair():
    H = symmetric_structure(3)
    assert H.p == 3 and H.n == 3
    # [p, p] lands in so(n)
    assert all(v == 0 for v in H.mm_m.ravel())
    assert H.exact


def test_float_mode():
    g = build_so_n1(4, exact_mode=False)
    assert g.basis.dtype == float
    assert g.jacobi_residual() < 1e-12
    assert np.allclose(as_float(exact(g.basis)), g.basis)
