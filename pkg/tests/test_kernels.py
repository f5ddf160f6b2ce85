"""The compiled and pure-Python kernels must agree bit for bit."""
import copy

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyconn import kernels

needs_ext = pytest.mark.skipif(kernels.compiled is None, reason="compiled kernels not built")

entries = st.dictionaries(
    st.tuples(st.integers(0, 6), st.integers(0, 6)), st.integers(-4, 4).filter(bool), max_size=30
)


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@needs_ext
@given(entries)
def test_smith_agrees(e):
    assert kernels.pure.smith_invariants(dict(e), 7, 7) == kernels.compiled.smith_invariants(dict(e), 7, 7)


@needs_ext
@given(st.lists(st.lists(st.integers(-20, 20), min_size=5, max_size=5), min_size=1, max_size=6))
def test_gauss_jordan_agrees(rows):
    a = kernels.pure.gauss_jordan(copy.deepcopy(rows), 5)
    b = kernels.compiled.gauss_jordan(copy.deepcopy(rows), 5)
    assert [list(r) for r in a[0]] == [list(r) for r in b[0]] and list(a[1]) == list(b[1])
    assert kernels.pure.integer_rank(copy.deepcopy(rows), 5) == kernels.compiled.integer_rank(copy.deepcopy(rows), 5)


@needs_ext
def test_simplex_agrees():
    m, k = 6, 4
    T = []
    for i in range(m):
        row = [((i * 5 + j * 3) % 7) + 1 for j in range(k)] + [0] * m + [0, 10 + i]
        row[k + i] = 1
        T.append(row)
    T.append([-1] * k + [0] * m + [1, 0])
    basis = [k + i for i in range(m)]
    T1, T2 = copy.deepcopy(T), copy.deepcopy(T)
    b1, b2 = list(basis), list(basis)
    s1 = kernels.pure.simplex_iterate(T1, b1, k + m)
    s2 = kernels.compiled.simplex_iterate(T2, b2, k + m)
    assert s1 == s2 == kernels.OPTIMAL
    assert [list(r) for r in T1] == [list(r) for r in T2] and list(b1) == list(b2)
