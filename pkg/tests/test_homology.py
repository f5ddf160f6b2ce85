import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyconn.complex import ChainComplex, complete_intersection, cone_off, full_subdivision, truncate_to_box
from polyconn.generator import InstanceSpec, generic_instance, random_simplex
from polyconn.homology import (
    EMPTY_LEVEL,
    INFINITE,
    HomologyResult,
    NotSubcomplex,
    PreconditionFailed,
    cellular_homology,
    connectivity_level,
    homology_groups,
    pi1_trivial_heuristic,
    relative_homology,
)
from polyconn.morse import morse_setup
from polyconn.plfun import ConvexPLFunction


@pytest.fixture
def truncated_line(line):
    return truncate_to_box(complete_intersection([line]), 5)


def test_point_and_tree(truncated_line):
    pt = ChainComplex({0: [0]}, {})
    assert homology_groups(pt) == HomologyResult((1,), ((),))
    h = cellular_homology(truncated_line)
    assert h.betti == (1, 0) and h.torsion == ((), ())
    assert connectivity_level(h, nonempty=True) == INFINITE


def test_cone_off_line(truncated_line):
    h = cellular_homology(cone_off(truncated_line))
    assert h.betti == (1, 2)
    assert connectivity_level(h, nonempty=True) == 0


def test_torsion_is_reported():
    # one vertex, one loop, one disc glued along twice the loop
    cc = ChainComplex({0: [0], 1: [1], 2: [2]}, {2: {(0, 0): 2}})
    h = homology_groups(cc)
    assert h.betti == (1, 0, 0) and h.torsion == ((), (2,), ())
    assert connectivity_level(h, nonempty=True) == 0
    assert h.as_json() == {"betti": [1, 0, 0], "torsion": [[], [2], []]}


def test_relative_examples(truncated_line):
    T = truncated_line
    assert relative_homology(T, ()) == cellular_homology(T)
    assert all(b == 0 for b in relative_homology(T, range(len(T.cells))).betti)
    rel = relative_homology(T, T.boundary_ids())
    assert rel.betti == (0, 2)
    edge = T.cells_of_dim(1)[0].id
    with pytest.raises(NotSubcomplex):
        relative_homology(T, {edge})


def test_levels():
    assert connectivity_level(HomologyResult((), ()), nonempty=False) == EMPTY_LEVEL
    assert connectivity_level(HomologyResult((2, 0), ((), ())), nonempty=True) == -1
    assert connectivity_level(HomologyResult((1, 0, 1), ((), (), ())), nonempty=True) == 1
    assert connectivity_level(HomologyResult((0, 2), ((), ())), nonempty=True, reduced=False) == 0
    assert connectivity_level(HomologyResult((1, 2), ((), ())), nonempty=True, reduced=False) == -1
    assert connectivity_level(HomologyResult((0, 0, 3), ((), (), ())), nonempty=True, reduced=False) == 1


def test_pi1_examples(truncated_line):
    assert pi1_trivial_heuristic(truncated_line) == "Trivial"
    square = truncate_to_box(full_subdivision(ConvexPLFunction.from_coefficients([((0, 0), 0)])), 1)
    assert pi1_trivial_heuristic(square) == "Trivial"
    split = truncate_to_box(
        full_subdivision(ConvexPLFunction.from_coefficients([((0, 0), 0), ((1, 1), -1), ((-2, 1), 0)])), 3)
    assert pi1_trivial_heuristic(split) == "Trivial"
    with pytest.raises(PreconditionFailed):
        pi1_trivial_heuristic(cone_off(truncated_line))
    with pytest.raises(PreconditionFailed):
        pi1_trivial_heuristic(square.subcomplex([c.id for c in square.cells if c.dim < 2]))


def test_pi1_triangle_with_disc():
    # a triangle region: cut the plane by three lines and keep the bounded 2-cell
    f = ConvexPLFunction.from_coefficients([((0, 0), 0), ((1, 0), -1), ((0, 1), -1), ((-1, -1), -1)])
    T = truncate_to_box(full_subdivision(f), 4)
    tri = next(c for c in T.cells if c.dim == 2 and c.label.argmax == (frozenset({0}),) and len(T.facets_of(c.id)) == 3)
    closure = {tri.id} | set(T.facets_of(tri.id)) | {v for e in T.facets_of(tri.id) for v in T.facets_of(e)}
    S = T.subcomplex(closure)
    assert cellular_homology(S).betti == (1, 0, 0)
    assert pi1_trivial_heuristic(S) == "Trivial"


seeds = st.integers(0, 5000)


@settings(max_examples=12)
@given(seeds, st.sampled_from([(2, 1, 3), (3, 1, 3), (3, 2, 3)]))
def test_euler_additivity_for_pairs(seed, cfg):
    d, n, r = cfg
    fs, X, _, _ = generic_instance(InstanceSpec(d, n, r, seed))
    anchor = sorted(c.point for c in X.cells if not X.facets_of(c.id))[0]
    P = random_simplex(d, anchor, 2, seed)
    XP = morse_setup(X, P).XP
    A = XP.boundary_ids()
    chi_A = XP.subcomplex(A).euler_characteristic()
    chi_rel = relative_homology(XP, A).euler_characteristic()
    assert XP.euler_characteristic() == chi_A + chi_rel


@settings(max_examples=10)
@given(seeds)
def test_pi1_never_crashes_in_range(seed):
    fs, X, _, _ = generic_instance(InstanceSpec(3, 1, 4, seed))
    T = truncate_to_box(X, seed=seed)
    for C in (T, cone_off(T)):
        h = cellular_homology(C)
        if h.betti[0] == 1 and h.is_zero(1):
            assert pi1_trivial_heuristic(C, h1=h) in ("Trivial", "Inconclusive")
