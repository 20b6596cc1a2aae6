import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhh.catalog import factor, so_basis, su2_basis
from rhh.errors import DecompositionError, DimensionError, ReductiveError
from rhh.lie_core import (
    Coordinates,
    LieAlgebraData,
    Rational,
    bracket,
    exact,
    is_exact,
    nullspace,
    orthonormalize,
    project,
    rank,
    reductive_split,
    rref,
    span_closure,
    subspace_distance,
)

small = st.integers(min_value=-5, max_value=5)


def test_bracket_of_rotations_matches_matrix_product():
    L1, L2, L3 = exact(su2_basis())
    expected = L1 @ L2 - L2 @ L1
    got = bracket(L1, L2)
    assert is_exact(got)
    assert (got == expected).all()
    # with E_ij conventions this is -L3
    assert (got == -L3).all()


def test_bracket_zero_and_shape_errors():
    X = exact(np.eye(3, dtype=int))
    assert all(v == 0 for v in bracket(X, X).ravel())
    with pytest.raises(DimensionError):
        bracket(np.eye(3), np.eye(4))


@given(st.lists(small, min_size=9, max_size=9), st.lists(small, min_size=9, max_size=9))
@settings(max_examples=30, deadline=None)
def test_bracket_antisymmetric(a, b):
    X = exact(np.array(a).reshape(3, 3))
    Y = exact(np.array(b).reshape(3, 3))
    assert all(v == 0 for v in (bracket(X, Y) + bracket(Y, X)).ravel())


def test_rref_and_rank_exact():
    M = exact(np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]]))
    R, piv = rref(M)
    assert piv == [0, 1]
    assert rank(M) == 2
    assert rank(M.astype(float)) == 2


def test_nullspace_exact_and_float():
    M = np.array([[1, 1, 0], [0, 0, 1]])
    K = nullspace(exact(M))
    assert K.shape == (1, 3)
    assert all(v == 0 for v in (exact(M) @ K[0]).ravel())
    Kf = nullspace(M.astype(float))
    assert np.abs(M @ Kf.T).max() < 1e-12


def test_span_closure_su2():
    L1, L2, _ = exact(su2_basis())
    sub = span_closure([L1, L2])
    assert sub.dim == 3
    assert sub.exact


def test_span_closure_single_element_is_line():
    L1 = su2_basis()[0].astype(float)
    assert span_closure([L1]).dim == 1


def test_span_closure_tol_controls_noise():
    L1, L2, _ = su2_basis().astype(float)
    noise = np.zeros((3, 3))
    noise[0, 1] = 1e-14
    sub = span_closure([L1, L1 + noise], tol=1e-9)
    assert sub.dim == 1


def test_reductive_split_u2_like():
    # so(2) + so(3) realized block diagonally in so(5)
    B = so_basis(5)
    rot = B[0]  # E01 - E10
    blocks = [b for b in B if not b[:2].any() and not b[:, :2].any()]
    k = LieAlgebraData.from_basis(exact(np.array([rot] + blocks)))
    center, derived = reductive_split(k)
    assert (center.dim, derived.dim) == (1, 3)


def test_reductive_split_rejects_solvable():
    # the 2-dim non-Abelian algebra [x, y] = y
    c = np.zeros((2, 2, 2))
    c[0, 1, 1], c[1, 0, 1] = 1, -1
    with pytest.raises(ReductiveError):
        reductive_split(LieAlgebraData(exact(c)))


def test_jacobi_of_so5():
    k = LieAlgebraData.from_basis(exact(so_basis(5)))
    assert k.jacobi_residual() == 0
    assert k.antisymmetry_residual() == 0
    assert k.closure_residual() == 0


def test_adjoint_matrices_skew():
    for name in ("su2", "so5", "su3"):
        ad = factor(name).adjoint()
        assert np.abs(np.asarray(ad, dtype=float) + np.asarray(ad, dtype=float).transpose(0, 2, 1)).max() < 1e-12


def test_project_along_complement():
    sub = orthonormalize([np.array([1.0, 0.0])])
    comp = orthonormalize([np.array([1.0, 1.0])])
    v = np.array([2.0, 1.0])
    # v = 1*(1,0) + 1*(1,1)
    assert np.allclose(project(sub, v, comp), [1.0, 0.0])
    assert np.allclose(project(sub, v), [2.0, 0.0])


def test_coordinates_reject_outside_span():
    C = Coordinates(exact(np.array([[1, 0, 0], [0, 1, 0]])))
    assert list(C.solve(exact(np.array([2, 3, 0])))) == [2, 3]
    with pytest.raises(DecompositionError):
        C.solve(exact(np.array([0, 0, 1])))
    with pytest.raises(DecompositionError):
        Coordinates(np.array([[1.0, 0.0], [2.0, 0.0]]))


def test_subspace_distance_principal_angle():
    e1 = orthonormalize([np.array([1.0, 0.0, 0.0])])
    tilted = orthonormalize([np.array([np.cos(0.3), np.sin(0.3), 0.0])])
    assert subspace_distance(e1, tilted) == pytest.approx(0.3)
    assert subspace_distance(e1, orthonormalize([np.array([2.0, 0.0, 0.0])])) < 1e-12
    plane = orthonormalize([np.eye(3)[0], np.eye(3)[1]])
    assert subspace_distance(e1, plane) == pytest.approx(np.pi / 2)


def test_exact_mode_stays_rational():
    x = exact(np.array([0.5, 1 / 3]))
    assert x[0] == Rational(1, 2)
    assert x[1] != Rational(1, 3)  # floats convert bit-exactly
