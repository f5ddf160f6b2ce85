"""Exact rational linear algebra and integer normal forms.

Scalars are :class:`fractions.Fraction`; vectors are tuples of Fractions and
matrices are sequences of such rows.  Integer matrices are plain lists of
lists of ints.  Nothing in this module touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from . import kernels

Q = Fraction
RatVector = tuple
RatMatrix = Sequence[Sequence[Fraction]]
IntMatrix = list


def rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals")
    return Fraction(x)


def rat_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vector(xs) -> tuple:
    return tuple(rational(x) for x in xs)


def dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def integer_row(row) -> list[int]:
    """Scale a rational row by the lcm of its denominators."""
    den = 1
    for v in row:
        den = lcm(den, Fraction(v).denominator)
    return [int(Fraction(v) * den) for v in row]


def primitive(vec) -> tuple:
    """Scale a rational vector to coprime integers (as Fractions), sign kept."""
    ints = integer_row(vec)
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(Fraction(v) for v in ints)


def rank(m: RatMatrix) -> int:
    """Rank over the rationals by fraction-free elimination."""
    rows = [integer_row(r) for r in m]
    if not rows:
        return 0
    return kernels.integer_rank(rows, len(rows[0]))


def kernel_basis(m: RatMatrix, ncols: int | None = None) -> list[tuple]:
    """Basis of the right null space, one primitive integer vector per free column."""
    rows = [integer_row(r) for r in m]
    if ncols is None:
        if not rows:
            raise ValueError("ncols required for a matrix with no rows")
        ncols = len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == j)) for i in range(ncols)) for j in range(ncols)]
    red, pivots = kernels.gauss_jordan(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for row, c in zip(red, pivots):
            vec[c] = Fraction(-row[f], row[c])
        basis.append(primitive(vec))
    return basis


def row_space_basis(m: RatMatrix) -> list[tuple]:
    rows = [integer_row(r) for r in m]
    if not rows:
        return []
    red, _ = kernels.gauss_jordan(rows, len(rows[0]))
    return [tuple(Fraction(v) for v in r) for r in red]


def solve(A: RatMatrix, b) -> tuple | None:
    """Unique solution of a square or overdetermined consistent system, else None."""
    if not A:
        return None
    n = len(A[0])
    aug = [integer_row(list(r) + [rational(bi)]) for r, bi in zip(A, b)]
    red, pivots = kernels.gauss_jordan(aug, n + 1)
    if n in pivots or len(pivots) < n:
        return None
    x = [Fraction(0)] * n
    for row, c in zip(red, pivots):
        x[c] = Fraction(row[n], row[c])
    return tuple(x)


def det(m: RatMatrix) -> Fraction:
    """Determinant by Bareiss elimination on the integerised rows."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    scale = 1
    A = []
    for r in m:
        den = 1
        for v in r:
            den = lcm(den, Fraction(v).denominator)
        scale *= den
        A.append([int(Fraction(v) * den) for v in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return Fraction(sign * A[n - 1][n - 1], scale)


def mat_mul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m: IntMatrix):
    """Smith normal form with unimodular transforms.

    Returns ``(factors, L, R)`` with ``L @ m @ R`` diagonal, its nonzero
    diagonal equal to ``factors`` and each factor dividing the next.
    Pivots are chosen as the nonzero entry of least absolute value.
    """
    nr = len(m)
    nc = len(m[0]) if nr else 0
    A = [list(map(int, r)) for r in m]
    L = identity(nr)
    R = identity(nc)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        A[dst] = [a - k * b for a, b in zip(A[dst], A[src])]
        L[dst] = [a - k * b for a, b in zip(L[dst], L[src])]

    def add_col(dst, src, k):
        for row in A:
            row[dst] -= k * row[src]
        for row in R:
            row[dst] -= k * row[src]

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            for i in range(t + 1, nr):
                if A[i][t]:
                    add_row(i, t, A[i][t] // A[t][t])
            for j in range(t + 1, nc):
                if A[t][j]:
                    add_col(j, t, A[t][j] // A[t][t])
            small = None
            for i in range(t + 1, nr):
                if A[i][t]:
                    small = ("r", i)
                    break
            if small is None:
                for j in range(t + 1, nc):
                    if A[t][j]:
                        small = ("c", j)
                        break
            if small is not None:
                done = False
                if small[0] == "r":
                    cand = min((i for i in range(t + 1, nr) if A[i][t]), key=lambda i: abs(A[i][t]))
                    swap_rows(t, cand)
                else:
                    cand = min((j for j in range(t + 1, nc) if A[t][j]), key=lambda j: abs(A[t][j]))
                    swap_cols(t, cand)
                continue
            # row and column clear: enforce divisibility of the remaining block
            bad = None
            for i in range(t + 1, nr):
                for j in range(t + 1, nc):
                    if A[i][j] % A[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                add_row(t, bad, -1)
                done = False
                continue
            if done:
                break
        if A[t][t] < 0:
            A[t] = [-v for v in A[t]]
            L[t] = [-v for v in L[t]]
        t += 1
    factors = [A[i][i] for i in range(min(nr, nc)) if A[i][i]]
    return factors, L, R


def smith_invariants(m: IntMatrix) -> list[int]:
    """Invariant factors only, via the sparse kernel."""
    entries = {}
    for i, row in enumerate(m):
        for j, v in enumerate(row):
            if v:
                entries[(i, j)] = int(v)
    ncols = len(m[0]) if m else 0
    return kernels.smith_invariants(entries, len(m), ncols)
