from itertools import product

import numpy as np
import pytest

from conftest import built
from rhh.catalog import CATALOG
from rhh.errors import NotApplicableError
from rhh.holonomy import (
    check_admissible,
    enumerate_admissible,
    enumeration_json,
    holonomy_from_brackets,
    isotropy_module_report,
    predicted_holonomy,
    transversal_margin,
)
from rhh.lie_core import subspace_distance


def brute_force(n):
    """All (r, sorted factor multiset) with 3r + sum dims <= n - 1, by exhaustive search."""
    names = sorted(CATALOG)
    found = set()
    for r in range(n):
        ranges = [range(n // CATALOG[s].dim + 1) for s in names]
        for counts in product(*ranges):
            combo = tuple(sorted(s for s, c in zip(names, counts) for _ in range(c)))
            if 3 * r + sum(CATALOG[s].dim for s in combo) <= n - 1:
                found.add((r, combo))
    return found


@pytest.mark.parametrize("n", [2, 3, 4, 7, 9, 12])
def test_enumeration_is_exhaustive(n):
    entries = enumerate_admissible(n)
    assert entries[-1].so_n and entries[-1].dim == n * (n - 1) // 2
    got = {(e.r, tuple(sorted(e.ss))) for e in entries[:-1]}
    assert got == brute_force(n)
    assert len(got) == len(entries) - 1
    dims = [e.dim for e in entries[:-1]]
    assert dims == sorted(dims)


def test_enumerate_rh3():
    entries = enumerate_admissible(3)
    assert [(e.r, e.ss, e.so_n) for e in entries] == [(0, (), False), (0, (), True)]
    doc = enumeration_json(3)
    assert doc["entries"][0] == {"r": 0, "ss": [], "dim": 0, "constraint": 0, "bound": 2}


def test_check_admissible():
    assert check_admissible(4, 1, [])
    assert not check_admissible(3, 1, [])
    assert check_admissible(7, 0, [3, 3])
    assert not check_admissible(7, 1, [3, 3])
    with pytest.raises(ValueError):
        check_admissible(5, 0, [2])
    with pytest.raises(ValueError):
        enumerate_admissible(1)


@pytest.mark.parametrize("text,dims", [
    ("n=3 r=0 ss=none", (0, 0, 0)),
    ("n=4 r=1 ss=none", (1, 1, 0)),
    ("n=4 r=0 ss=su2", (3, 0, 3)),
    ("n=7 r=1 ss=su2", (4, 1, 3)),
    ("n=7 r=0 ss=su2,su2", (6, 0, 6)),
    ("n=7 r=2 ss=none phi=random seed=4", (2, 2, 0)),
])
def test_holonomy_dims(text, dims):
    res = holonomy_from_brackets(built(text))
    assert (res.dim, res.center_dim, res.ss_dim) == dims
    assert res.matched_prediction


def test_symmetric_holonomy_is_so_n():
    H = built("n=4 hol=so_n")
    res = holonomy_from_brackets(H)
    assert res.dim == 6 and res.center_dim == 0
    assert subspace_distance(res.hol, predicted_holonomy(H)) < 1e-12


def test_module_report():
    rep = isotropy_module_report(built("n=7 r=1 ss=su2"))
    assert [(m.module, m.dim, m.kind) for m in rep] == [
        ("V_hol", 4, "adjoint"), ("V_1", 2, "center-effective"),
        ("a_r", 1, "trivial"), ("R^m", 0, "trivial")]
    rep = isotropy_module_report(built("n=6 r=0 ss=su2"))
    assert rep[-1] == ("R^m", 2, "trivial")
    assert isotropy_module_report(built("n=3 r=0 ss=none")) == [("m", 3, "trivial")]
    with pytest.raises(NotApplicableError):
        isotropy_module_report(built("n=3 hol=so_n"))


def test_transversal_margin_positive():
    assert transversal_margin(built("n=3 r=0 ss=none")) == pytest.approx(1.0)
    m = transversal_margin(built("n=7 r=1 ss=su2 phi=random A1=random phiA=random seed=3"))
    assert np.isfinite(m) and m > 0
