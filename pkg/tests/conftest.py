import functools

import numpy as np
import pytest

from rhh.hyperbolic_model import lorentz_form
from rhh.lie_core import as_float
from rhh.structure_builder import build_structure

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def built(text: str):
    return build_structure(text)


@pytest.fixture
def structure():
    return built


def hyperboloid_oracle(H):
    """Metric and S of H read off the hyperboloid model at the base point.

    The metric is Q(Xo, Yo) / c; S_X Y = tan(Y X o) + [X, Y]_m o, where tan is
    the Q-orthogonal projection onto T_o and Y X o is the ambient derivative
    of the Killing field Y* along X*.
    """
    n = H.n
    Q = as_float(lorentz_form(n)) / H.spec.curvature
    o = np.zeros(n + 1)
    if H.maps is None:
        o[n - 1], o[n] = 1 / np.sqrt(2), -1 / np.sqrt(2)
    else:
        o[n - 1], o[n] = 0.5, -1.0
    F = as_float(H.frame)
    vecs = np.array([X @ o for X in F])
    gram = vecs @ Q @ vecs.T
    M = as_float(H.frame_matrix)
    mm = as_float(H.mm_m)
    B = as_float(H.m_basis)
    T = np.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            w = F[j] @ F[i] @ o
            w = w + (w @ Q @ o) * o
            br_m = np.einsum("p,q,pqk,kab->ab", M[i], M[j], mm, B)
            w = w + br_m @ o
            T[i, j] = vecs @ Q @ w
    return gram, T


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
