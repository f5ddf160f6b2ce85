from fractions import Fraction

import pytest
from hypothesis import settings

from polyconn.plfun import ConvexPLFunction
from polyconn.polyhedra import AffineForm, Polyhedron

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def tropical_line():
    """max(x, y, 0)"""
    return ConvexPLFunction.from_coefficients([((1, 0), 0), ((0, 1), 0), ((0, 0), 0)])


def box(d, lo=0, hi=1):
    ineqs = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        ineqs.append(AffineForm(tuple(e), -lo))
        ineqs.append(AffineForm(tuple(-v for v in e), hi))
    return Polyhedron(d, (), tuple(ineqs))


def generic_triangle():
    """A triangle around the origin with no edge parallel to a bend of max(x, y, 0)."""
    return Polyhedron(2, (), (
        AffineForm((Fraction(2), Fraction(-1)), 7),
        AffineForm((Fraction(-1), Fraction(3)), 6),
        AffineForm((Fraction(-3), Fraction(-2)), 8),
    ))


@pytest.fixture
def line():
    return tropical_line()
