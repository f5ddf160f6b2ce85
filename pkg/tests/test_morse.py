import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import generic_triangle
from polyconn.complex import anchor_points, complete_intersection, vertex_bound
from polyconn.generator import InstanceSpec, generic_instance, random_simplex
from polyconn.homology import connectivity_level, relative_homology
from polyconn.morse import (
    FACE_INTERIOR,
    VERTEX,
    BoundaryCriticalPoint,
    CriticalPoint,
    DegenerateGradient,
    critical_points,
    distinct_critical_values,
    link_complex,
    link_level,
    minimal_hyperplanes,
    morse_report,
    morse_setup,
    verify_links,
)
from polyconn.plfun import ConvexPLFunction
from polyconn.polyhedra import AffineForm, Polyhedron


def triangle(*forms):
    return Polyhedron(2, (), tuple(AffineForm(b, a) for b, a in forms))


SYMMETRIC = triangle(((1, 0), 3), ((0, 1), 3), ((-1, -1), 4))
CENTERED = triangle(((1, 0), 1), ((0, 1), 1), ((-1, -1), 1))  # analytic centre at the origin


def test_symmetric_line_critical_points(line):
    s = morse_setup(complete_intersection([line]), SYMMETRIC)
    pts = critical_points(s)
    v = next(p for p in pts if p.kind == VERTEX)
    assert v.location == (0.0, 0.0) and v.host_dim == 0
    assert v.value == pytest.approx(3 * 3 * 4 / math.sqrt(2), rel=1e-12)
    interior = [p for p in pts if p.kind == FACE_INTERIOR]
    # on the diagonal ray (t+3)^2 (4-2t) peaks at t = 1/3; the other two rays peak outside
    assert len(interior) == 1
    assert interior[0].location == pytest.approx((1 / 3, 1 / 3), abs=1e-9)
    assert interior[0].residual <= 1e-9
    hosts = [p.host_cell for p in pts]
    assert len(hosts) == len(set(hosts))


def test_distinct_values():
    mk = lambda t: CriticalPoint((0.0,), t, 0, 0, VERTEX)
    assert distinct_critical_values([mk(0.5)])
    assert not distinct_critical_values([mk(0.3), mk(0.3)])
    fs, X, _, _ = generic_instance(InstanceSpec(2, 1, 3, 42))
    P = random_simplex(2, anchor_points(X)[0], vertex_bound(X), 42)
    assert distinct_critical_values(critical_points(morse_setup(X, P)))


def test_line_vertex_link(line):
    s = morse_setup(complete_intersection([line]), generic_triangle())
    pts = critical_points(s)
    v = next(p for p in pts if p.kind == VERTEX)
    L = link_complex(s, v)
    assert L.expected_connectivity == -1 and L.dim == 1
    # the level hyperplane meets one or two of the three rays (they positively span the plane)
    assert 1 <= len(L.complex.cells) <= 2
    assert link_level(L) >= -1
    for p in pts:
        if p.kind == FACE_INTERIOR:
            assert link_complex(s, p).expected_connectivity == -2
    assert verify_links(s)["overall"]


def test_tropical_plane_vertex_link():
    f = ConvexPLFunction.from_coefficients([((1, 0, 0), 0), ((0, 1, 0), 0), ((0, 0, 1), 0), ((0, 0, 0), 0)])
    X = complete_intersection([f])
    P = random_simplex(3, (0, 0, 0), 1, seed=3)
    s = morse_setup(X, P)
    v = next(p for p in critical_points(s) if p.kind == VERTEX)
    L = link_complex(s, v)
    assert L.expected_connectivity == 0 and L.complex.ambient_dim == 2 and L.complex.top_dim == 1
    assert link_level(L) >= 0


def test_degenerate_gradient(line):
    s = morse_setup(complete_intersection([line]), CENTERED)
    # every ray's restricted maximum is the origin itself, so the face search rejects too
    with pytest.raises(BoundaryCriticalPoint):
        critical_points(s)
    vid = next(c.id for c in s.XP.cells if c.dim == 0 and not c.label.cut)
    v = CriticalPoint((0.0, 0.0), s.value((0.0, 0.0)), vid, 0, VERTEX)
    with pytest.raises(DegenerateGradient):
        link_complex(s, v)


def test_setup_validation(line):
    X = complete_intersection([line])
    with pytest.raises(ValueError):
        morse_setup(X, Polyhedron(2, (), (AffineForm((1, 0), 1),)))
    redundant = SYMMETRIC.with_constraints(inequalities=(AffineForm((1, 0), 10), AffineForm((2, 0), 6)))
    assert minimal_hyperplanes(redundant) == SYMMETRIC.inequalities


def _lemma_setup(cfg, seed):
    d, n, r = cfg
    fs, X, _, _ = generic_instance(InstanceSpec(d, n, r, seed))
    P = random_simplex(d, sorted(anchor_points(X))[0], vertex_bound(X), seed)
    return morse_setup(X, P)


@settings(max_examples=10)
@given(st.sampled_from([(2, 1, 3), (3, 1, 3), (3, 2, 3)]), st.integers(0, 5000))
def test_morse_invariants(cfg, seed):
    s = _lemma_setup(cfg, seed)
    pts = critical_points(s)
    XP = s.XP
    interior_vertices = {c.id for c in XP.cells if c.dim == 0 and not c.label.cut}
    assert {p.host_cell for p in pts if p.kind == VERTEX} == interior_vertices
    assert len({p.host_cell for p in pts}) == len(pts)
    assert all(p.value > 0 for p in pts)
    assert all((p.kind == VERTEX) == (p.host_dim == 0) for p in pts)
    for c in XP.cells:
        assert (s.exact_value(c.point) == 0) == bool(c.label.cut)
    rep = morse_report(s)
    if rep["overall"]:
        d, n, _ = cfg
        rel = relative_homology(XP, XP.boundary_ids())
        assert connectivity_level(rel, nonempty=True, reduced=False) >= d - n - 1
