"""Pure-Python integer kernels.

Every routine here works on lists of Python ints and never allocates a
Fraction in its inner loop.  The Cython module ``_ckernels`` mirrors these
signatures one to one; ``polyconn.kernels`` picks whichever is importable.
"""
from math import gcd

OPTIMAL = 0
UNBOUNDED = 1


def normalize_row(row):
    """Divide ``row`` in place by the positive gcd of its entries."""
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        for j in range(len(row)):
            row[j] //= g
    return row


def pivot(T, p, q):
    """Fraction-free pivot of tableau ``T`` on the positive entry ``T[p][q]``."""
    rp = T[p]
    piv = rp[q]
    width = len(rp)
    for i in range(len(T)):
        if i == p:
            continue
        ri = T[i]
        a = ri[q]
        if a == 0:
            continue
        for j in range(width):
            ri[j] = piv * ri[j] - a * rp[j]
        normalize_row(ri)
    normalize_row(rp)


def simplex_iterate(T, basis, ncols, max_iter=100000):
    """Run Bland's-rule primal simplex on an integer tableau.

    ``T`` holds the constraint rows followed by one objective row.  Each
    row is an equation scaled by an arbitrary positive integer; the last
    entry is the right-hand side.  The objective row reads
    ``s*z + sum(d_j x_j) = R`` where ``s`` sits in column ``ncols`` and is
    kept positive.  Only columns ``< ncols`` may enter the basis.
    """
    m = len(T) - 1
    obj = T[m]
    rhs = len(obj) - 1
    for _ in range(max_iter):
        q = -1
        for j in range(ncols):
            if obj[j] < 0:
                q = j
                break
        if q < 0:
            return OPTIMAL
        p = -1
        best_num = 0
        best_den = 1
        for i in range(m):
            a = T[i][q]
            if a > 0:
                b = T[i][rhs]
                if p < 0:
                    p, best_num, best_den = i, b, a
                    continue
                lhs = b * best_den
                rhs_ = best_num * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[p]):
                    p, best_num, best_den = i, b, a
        if p < 0:
            return UNBOUNDED
        pivot(T, p, q)
        basis[p] = q
    raise RuntimeError("simplex iteration limit reached")


def gauss_jordan(rows, ncols):
    """Fraction-free reduced echelon form of an integer matrix.

    Returns ``(reduced_rows, pivot_columns)``; row ``i`` of the result has
    its pivot at ``pivot_columns[i]`` and zeros in every other pivot column.
    """
    A = [list(r) for r in rows if any(r)]
    pivots = []
    top = 0
    for c in range(ncols):
        if top >= len(A):
            break
        best = -1
        for i in range(top, len(A)):
            v = A[i][c]
            if v and (best < 0 or abs(v) < abs(A[best][c])):
                best = i
        if best < 0:
            continue
        A[top], A[best] = A[best], A[top]
        rp = A[top]
        if rp[c] < 0:
            for j in range(ncols):
                rp[j] = -rp[j]
        piv = rp[c]
        for i in range(len(A)):
            if i == top:
                continue
            ri = A[i]
            a = ri[c]
            if a:
                for j in range(ncols):
                    ri[j] = piv * ri[j] - a * rp[j]
                normalize_row(ri)
        normalize_row(rp)
        pivots.append(c)
        top += 1
    return A[:top], pivots


def integer_rank(rows, ncols):
    return len(gauss_jordan(rows, ncols)[1])


def _dense_diagonal(A):
    """Reduce a dense integer matrix to some diagonal form by unimodular ops."""
    diag = []
    A = [list(r) for r in A]
    while A and A[0]:
        nr = len(A)
        nc = len(A[0])
        pr = pc = -1
        for i in range(nr):
            for j in range(nc):
                v = A[i][j]
                if v and (pr < 0 or abs(v) < abs(A[pr][pc])):
                    pr, pc = i, j
        if pr < 0:
            break
        while True:
            piv = A[pr][pc]
            changed = False
            for i in range(nr):
                if i != pr and A[i][pc]:
                    k = A[i][pc] // piv
                    if k:
                        ri, rp = A[i], A[pr]
                        for j in range(nc):
                            ri[j] -= k * rp[j]
                    if A[i][pc]:
                        changed = True
            for j in range(nc):
                if j != pc and A[pr][j]:
                    k = A[pr][j] // piv
                    if k:
                        for i in range(nr):
                            A[i][j] -= k * A[i][pc]
                    if A[pr][j]:
                        changed = True
            if not changed:
                break
            # remainder survived: move the pivot to the smallest nonzero entry
            # of the pivot row/column and repeat
            for i in range(nr):
                if A[i][pc] and abs(A[i][pc]) < abs(A[pr][pc]):
                    pr = i
            for j in range(nc):
                if A[pr][j] and abs(A[pr][j]) < abs(A[pr][pc]):
                    pc = j
        diag.append(abs(A[pr][pc]))
        A = [
            [A[i][j] for j in range(nc) if j != pc]
            for i in range(nr)
            if i != pr
        ]
    return diag


def _fix_divisibility(diag):
    d = sorted(v for v in diag if v)
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                a, b = d[i], d[j]
                if b % a:
                    g = gcd(a, b)
                    d[i], d[j] = g, a // g * b
                    changed = True
        d.sort()
    return d


def smith_invariants(entries, nrows, ncols):
    """Nonzero invariant factors of a sparse integer matrix.

    ``entries`` maps ``(row, col)`` to a nonzero int.  Unit pivots are
    eliminated first on the sparse structure; whatever survives goes through
    dense minimal-pivot diagonalisation.
    """
    rows = {}
    cols = {}
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
    ones = 0
    while True:
        pick = None
        best = None
        for i, r in rows.items():
            for j, v in r.items():
                if v == 1 or v == -1:
                    cost = (len(r) - 1) * (len(cols[j]) - 1)
                    if best is None or cost < best:
                        best = cost
                        pick = (i, j)
                        if cost == 0:
                            break
            if best == 0:
                break
        if pick is None:
            break
        p, q = pick
        rp = rows.pop(p)
        u = rp[q]
        for i in list(cols[q]):
            if i == p:
                continue
            ri = rows[i]
            k = ri[q] * u
            for j, v in rp.items():
                nv = ri.get(j, 0) - k * v
                if nv:
                    if j not in ri:
                        cols[j].add(i)
                    ri[j] = nv
                elif j in ri:
                    del ri[j]
                    cols[j].discard(i)
            if not ri:
                del rows[i]
        for j in rp:
            cols[j].discard(p)
        del cols[q]
        ones += 1
    live_rows = sorted(i for i, r in rows.items() if r)
    live_cols = sorted({j for r in rows.values() for j in r})
    rest = []
    if live_rows:
        cidx = {j: k for k, j in enumerate(live_cols)}
        for i in live_rows:
            row = [0] * len(live_cols)
            for j, v in rows[i].items():
                row[cidx[j]] = v
            rest.append(row)
    return [1] * ones + _fix_divisibility(_dense_diagonal(rest))
