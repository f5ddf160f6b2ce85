"""H-represented polyhedra over the rationals and an exact simplex solver."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import kernels
from .linalg import dot, integer_row, rank, rational, vector

OPTIMAL = "Optimal"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"


class EmptyPolyhedron(ValueError):
    pass


@dataclass(frozen=True)
class AffineForm:
    """The affine function ``x -> <x, b> + a``."""

    b: tuple
    a: Fraction

    def __post_init__(self):
        object.__setattr__(self, "b", vector(self.b))
        object.__setattr__(self, "a", rational(self.a))

    @property
    def dim(self) -> int:
        return len(self.b)

    def __call__(self, x) -> Fraction:
        return dot(self.b, x) + self.a

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(tuple(u - v for u, v in zip(self.b, other.b)), self.a - other.a)

    def __neg__(self) -> "AffineForm":
        return AffineForm(tuple(-u for u in self.b), -self.a)

    def is_constant(self) -> bool:
        return not any(self.b)


@dataclass(frozen=True)
class Hyperplane:
    """``{x : form(x) = 0}``."""

    form: AffineForm

    def __post_init__(self):
        if self.form.is_constant():
            raise ValueError("hyperplane needs a nonzero normal")


@dataclass(frozen=True)
class Polyhedron:
    ambient_dim: int
    equalities: tuple = ()
    inequalities: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "equalities", tuple(self.equalities))
        object.__setattr__(self, "inequalities", tuple(self.inequalities))
        for f in self.equalities + self.inequalities:
            if f.dim != self.ambient_dim:
                raise ValueError(f"form of dimension {f.dim} in a polyhedron of dimension {self.ambient_dim}")

    def contains(self, x, strict: bool = False) -> bool:
        if any(f(x) != 0 for f in self.equalities):
            return False
        if strict:
            return all(f(x) > 0 for f in self.inequalities)
        return all(f(x) >= 0 for f in self.inequalities)

    def with_constraints(self, equalities=(), inequalities=()) -> "Polyhedron":
        return Polyhedron(
            self.ambient_dim,
            self.equalities + tuple(equalities),
            self.inequalities + tuple(inequalities),
        )


@dataclass(frozen=True)
class LPOutcome:
    status: str
    value: Optional[Fraction] = None
    witness: Optional[tuple] = None


# ---------------------------------------------------------------- simplex core


def _price_out(T, basis):
    obj = T[-1]
    for i, bcol in enumerate(basis):
        c = obj[bcol]
        if c:
            row = T[i]
            piv = row[bcol]
            for j in range(len(obj)):
                obj[j] = piv * obj[j] - c * row[j]
            kernels.normalize_row(obj)


def solve_lp(c, eq_rows=(), eq_rhs=(), le_rows=(), le_rhs=(), n_free=0, n_nonneg=0):
    """Maximise ``c . z`` for ``z = (x, y)``, ``x`` free and ``y >= 0``.

    Subject to ``eq_rows z = eq_rhs`` and ``le_rows z <= le_rhs``.  Returns
    ``(status, value, z)`` with exact Fractions.
    """
    nv = n_free + n_nonneg
    n_le = len(le_rows)
    raw = []  # (coefficients over [x+, x-, y, slacks], rhs, needs_artificial)
    for k, (row, b) in enumerate(zip(le_rows, le_rhs)):
        coeffs = list(row[:n_free]) + [-v for v in row[:n_free]] + list(row[n_free:nv])
        slack = [0] * n_le
        slack[k] = 1
        b = rational(b)
        if b < 0:
            raw.append(([-v for v in coeffs] + [-s for s in slack], -b, True))
        else:
            raw.append((coeffs + slack, b, False))
    for row, b in zip(eq_rows, eq_rhs):
        coeffs = list(row[:n_free]) + [-v for v in row[:n_free]] + list(row[n_free:nv]) + [0] * n_le
        b = rational(b)
        if b < 0:
            raw.append(([-v for v in coeffs], -b, True))
        else:
            raw.append((coeffs, b, True))
    n_struct = 2 * n_free + n_nonneg + n_le
    n_art = sum(1 for r in raw if r[2])
    width = n_struct + n_art + 2  # + z column + rhs
    zc = n_struct + n_art
    T = []
    basis = []
    art = 0
    for k, (coeffs, b, needs) in enumerate(raw):
        ext = list(coeffs) + [0] * n_art
        if needs:
            ext[n_struct + art] = 1
            basis.append(n_struct + art)
            art += 1
        else:
            basis.append(2 * n_free + n_nonneg + k)
        row = integer_row(ext + [0, b])
        T.append(row)
    if n_art:
        obj = [0] * width
        for j in range(n_struct, n_struct + n_art):
            obj[j] = 1
        obj[zc] = 1
        T.append(obj)
        _price_out(T, basis)
        kernels.simplex_iterate(T, basis, n_struct + n_art)
        obj = T[-1]
        if obj[-1] < 0:
            return INFEASIBLE, None, None
        T.pop()
        keep = []
        for i in range(len(T)):
            if basis[i] >= n_struct:
                row = T[i]
                col = next((j for j in range(n_struct) if row[j]), None)
                if col is None:
                    continue
                if row[col] < 0:
                    T[i] = [-v for v in row]
                kernels.pivot(T, i, col)
                basis[i] = col
            keep.append(i)
        T = [T[i] for i in keep]
        basis = [basis[i] for i in keep]
    cz = list(c[:n_free]) + [-v for v in c[:n_free]] + list(c[n_free:nv]) + [0] * (n_struct - 2 * n_free - n_nonneg)
    obj = integer_row([-rational(v) for v in cz] + [0] * n_art + [1, 0])
    T.append(obj)
    _price_out(T, basis)
    status = kernels.simplex_iterate(T, basis, n_struct)
    if status == kernels.UNBOUNDED:
        return UNBOUNDED, None, None
    sol = [Fraction(0)] * (n_struct + n_art)
    for i, bcol in enumerate(basis):
        sol[bcol] = Fraction(T[i][-1], T[i][bcol])
    z = tuple(sol[j] - sol[n_free + j] for j in range(n_free)) + tuple(
        sol[2 * n_free + j] for j in range(n_nonneg)
    )
    value = dot([rational(v) for v in c], z)
    return OPTIMAL, value, z


# ---------------------------------------------------------------- public LP api


def lp_optimize(objective, p: Polyhedron, sense: str = "max") -> LPOutcome:
    """Exact optimum of a linear objective over ``p``."""
    objective = vector(objective)
    if len(objective) != p.ambient_dim:
        raise ValueError("objective dimension does not match the polyhedron")
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    c = objective if sense == "max" else tuple(-v for v in objective)
    status, value, z = solve_lp(
        c,
        eq_rows=[f.b for f in p.equalities],
        eq_rhs=[-f.a for f in p.equalities],
        le_rows=[tuple(-v for v in f.b) for f in p.inequalities],
        le_rhs=[f.a for f in p.inequalities],
        n_free=p.ambient_dim,
    )
    if status != OPTIMAL:
        return LPOutcome(status)
    if not p.contains(z):
        raise AssertionError("LP witness violates its constraints")
    return LPOutcome(OPTIMAL, value if sense == "max" else -value, z)


def _slack_round(p: Polyhedron, open_idx: Sequence[int]):
    """Maximise the summed (capped) slack of the still-undecided inequalities."""
    d = p.ambient_dim
    k = len(open_idx)
    pos = {i: t for t, i in enumerate(open_idx)}
    le_rows, le_rhs = [], []
    for i, f in enumerate(p.inequalities):
        row = [-v for v in f.b] + [0] * k
        if i in pos:
            row[d + pos[i]] = 1
        le_rows.append(row)
        le_rhs.append(f.a)
    for t in range(k):
        row = [0] * (d + k)
        row[d + t] = 1
        le_rows.append(row)
        le_rhs.append(1)
    eq_rows = [list(f.b) + [0] * k for f in p.equalities]
    eq_rhs = [-f.a for f in p.equalities]
    c = [0] * d + [1] * k
    return solve_lp(c, eq_rows, eq_rhs, le_rows, le_rhs, n_free=d, n_nonneg=k)


def interior_analysis(p: Polyhedron):
    """Return ``(point, implied)`` or ``None`` when ``p`` is empty.

    ``implied`` lists the inequality indices that hold with equality on all
    of ``p``; ``point`` lies in the relative interior.
    """
    open_idx = list(range(len(p.inequalities)))
    points = []
    implied = []
    first = True
    while True:
        status, value, z = _slack_round(p, open_idx)
        if status == INFEASIBLE:
            assert first
            return None
        first = False
        x = z[: p.ambient_dim]
        if not open_idx or value == 0:
            implied.extend(open_idx)
            if not points:
                points.append(x)
            break
        slacks = z[p.ambient_dim:]
        strict = [i for i, s in zip(open_idx, slacks) if s > 0]
        open_idx = [i for i in open_idx if i not in set(strict)]
        points.append(x)
        if not open_idx:
            break
    n = len(points)
    point = tuple(sum(col, Fraction(0)) / n for col in zip(*points))
    return point, sorted(implied)


def relative_interior_point(p: Polyhedron) -> tuple:
    res = interior_analysis(p)
    if res is None:
        raise EmptyPolyhedron("polyhedron is empty")
    return res[0]


def affine_hull_rank(p: Polyhedron, implied) -> int:
    grads = [f.b for f in p.equalities] + [p.inequalities[i].b for i in implied]
    return rank(grads) if grads else 0


def dimension(p: Polyhedron) -> int:
    """Affine dimension of ``p``; -1 when empty."""
    res = interior_analysis(p)
    if res is None:
        return -1
    return p.ambient_dim - affine_hull_rank(p, res[1])


def recession_cone(p: Polyhedron) -> Polyhedron:
    if interior_analysis(p) is None:
        raise EmptyPolyhedron("recession cone of an empty polyhedron")
    return Polyhedron(
        p.ambient_dim,
        [AffineForm(f.b, 0) for f in p.equalities],
        [AffineForm(f.b, 0) for f in p.inequalities],
    )


def is_bounded(p: Polyhedron) -> bool:
    return dimension(recession_cone(p)) == 0


def strictly_feasible_point(p: Polyhedron):
    """A point with every inequality strict, or ``None`` if there is none."""
    d = p.ambient_dim
    le_rows = [[-v for v in f.b] + [1] for f in p.inequalities]
    le_rhs = [f.a for f in p.inequalities]
    le_rows.append([0] * d + [1])
    le_rhs.append(1)
    status, value, z = solve_lp(
        [0] * d + [1],
        [list(f.b) + [0] for f in p.equalities],
        [-f.a for f in p.equalities],
        le_rows,
        le_rhs,
        n_free=d,
        n_nonneg=1,
    )
    if status != OPTIMAL or value <= 0:
        return None
    return z[:d]
