import pytest
from hypothesis import given
from hypothesis import strategies as st

from polyconn.complex import point_label
from polyconn.generator import InstanceSpec, random_instance
from polyconn.plfun import ConvexPLFunction, bend_locus, cell_of_label, evaluate_with_argmax
from polyconn.polyhedra import dimension, relative_interior_point


def test_evaluate_examples(line):
    assert evaluate_with_argmax(line, (2, 1)) == (2, frozenset({0}))
    assert evaluate_with_argmax(line, (0, 0)) == (0, frozenset({0, 1, 2}))
    assert evaluate_with_argmax(line, (1, 1)) == (1, frozenset({0, 1}))
    with pytest.raises(ValueError):
        evaluate_with_argmax(line, (1, 1, 1))


def test_cell_of_label_examples(line):
    ray = cell_of_label(line, {0, 1})
    assert dimension(ray) == 1 and ray.contains((3, 3)) and not ray.contains((-1, -1))
    origin = cell_of_label(line, {0, 1, 2})
    assert dimension(origin) == 0 and origin.contains((0, 0))
    region = cell_of_label(line, {0})
    assert dimension(region) == 2 and region.contains((2, 1)) and not region.contains((1, 2))


def test_bend_locus_examples(line):
    assert len(bend_locus(ConvexPLFunction.from_coefficients([((1, 2), 3)])).cells) == 0
    C = bend_locus(ConvexPLFunction.from_coefficients([((1,), 0), ((0,), 0)]))
    assert [c.dim for c in C.cells] == [0] and C.cells[0].point == (0,)
    C = bend_locus(line)
    assert C.count_by_dim() == [1, 3]
    assert [c.bounded for c in C.cells] == [True, False, False, False]


def test_convex_pl_function_validation():
    with pytest.raises(ValueError):
        ConvexPLFunction(())
    with pytest.raises(ValueError):
        ConvexPLFunction.from_coefficients([((1, 0), 0), ((1,), 0)])


rat = st.fractions(min_value=-50, max_value=50, max_denominator=16)
seeds = st.integers(0, 10_000)


@given(seeds, st.sampled_from([(2, 3), (3, 4), (2, 5)]))
def test_label_consistency(seed, dr):
    d, r = dr
    f = random_instance(InstanceSpec(d, 1, r, seed))[0]
    for c in bend_locus(f).cells:
        assert evaluate_with_argmax(f, relative_interior_point(c.geometry))[1] == c.label.argmax[0]


@given(seeds, st.lists(rat, min_size=3, max_size=3))
def test_disjoint_covering(seed, x):
    f = random_instance(InstanceSpec(3, 1, 4, seed))[0]
    _, S = evaluate_with_argmax(f, x)
    assert cell_of_label(f, S).contains(x)
    assert point_label([f], x).argmax[0] == S


@given(seeds, st.lists(rat, min_size=4, max_size=4))
def test_convexity(seed, xy):
    f = random_instance(InstanceSpec(2, 1, 4, seed))[0]
    x, y = xy[:2], xy[2:]
    mid = [(a + b) / 2 for a, b in zip(x, y)]
    assert f(mid) <= (f(x) + f(y)) / 2
