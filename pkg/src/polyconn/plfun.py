"""Convex piecewise-linear functions ``max_i <x, b_i> + a_i`` and their bend loci.

Piece indices are 0-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import vector
from .polyhedra import AffineForm, Polyhedron

ArgmaxLabel = frozenset


@dataclass(frozen=True)
class ConvexPLFunction:
    forms: tuple

    def __post_init__(self):
        forms = tuple(self.forms)
        if not forms:
            raise ValueError("a convex PL function needs at least one affine piece")
        d = forms[0].dim
        if any(f.dim != d for f in forms):
            raise ValueError("affine pieces of different dimensions")
        object.__setattr__(self, "forms", forms)

    @classmethod
    def from_coefficients(cls, pieces) -> "ConvexPLFunction":
        """Build from ``[(b, a), ...]`` pairs."""
        return cls(tuple(AffineForm(vector(b), a) for b, a in pieces))

    @property
    def d(self) -> int:
        return self.forms[0].dim

    @property
    def r(self) -> int:
        return len(self.forms)

    def __call__(self, x) -> Fraction:
        return max(f(x) for f in self.forms)


def evaluate_with_argmax(f: ConvexPLFunction, x) -> tuple[Fraction, ArgmaxLabel]:
    """Exact value of ``f`` at ``x`` together with every index attaining it."""
    if len(x) != f.d:
        raise ValueError("point dimension does not match the function")
    values = [form(x) for form in f.forms]
    top = max(values)
    return top, frozenset(i for i, v in enumerate(values) if v == top)


def label_constraints(f: ConvexPLFunction, S) -> tuple[list, list]:
    """Equalities and inequalities (``>= 0``) cutting out the cell of label ``S``."""
    S = sorted(S)
    if not S:
        raise ValueError("empty argmax label")
    lead = f.forms[S[0]]
    eqs = [lead - f.forms[j] for j in S[1:]]
    ineqs = [lead - f.forms[k] for k in range(f.r) if k not in set(S)]
    return eqs, ineqs


def cell_of_label(f: ConvexPLFunction, S) -> Polyhedron:
    eqs, ineqs = label_constraints(f, S)
    return Polyhedron(f.d, eqs, ineqs)


def bend_locus(f: ConvexPLFunction):
    """The polyhedral hypersurface of ``f``: every cell whose label has two or more pieces."""
    from .complex import build_complex

    return build_complex([f], min_size=2, n=1)
