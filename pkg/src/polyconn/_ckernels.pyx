# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twin of ``polyconn._kernels``.

Entries stay arbitrary-precision Python ints; the gain comes from typed
indices and list access without interpreter dispatch.
"""
from math import gcd

DEF OPTIMAL = 0
DEF UNBOUNDED = 1


cpdef list normalize_row(list row):
    cdef Py_ssize_t j, n = len(row)
    cdef object g = 0, v
    for j in range(n):
        v = row[j]
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        for j in range(n):
            row[j] = row[j] // g
    return row


cpdef void pivot(list T, Py_ssize_t p, Py_ssize_t q):
    cdef list rp = <list>T[p]
    cdef list ri
    cdef object piv = rp[q], a
    cdef Py_ssize_t i, j, width = len(rp), m = len(T)
    for i in range(m):
        if i == p:
            continue
        ri = <list>T[i]
        a = ri[q]
        if a == 0:
            continue
        for j in range(width):
            ri[j] = piv * ri[j] - a * rp[j]
        normalize_row(ri)
    normalize_row(rp)


cpdef int simplex_iterate(list T, list basis, Py_ssize_t ncols, Py_ssize_t max_iter=100000) except -1:
    cdef Py_ssize_t m = len(T) - 1
    cdef list obj = <list>T[m]
    cdef Py_ssize_t rhs = len(obj) - 1
    cdef Py_ssize_t it, i, j, p, q
    cdef object a, b, best_num, best_den, lhs, rr
    for it in range(max_iter):
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
            a = (<list>T[i])[q]
            if a > 0:
                b = (<list>T[i])[rhs]
                if p < 0:
                    p = i
                    best_num = b
                    best_den = a
                    continue
                lhs = b * best_den
                rr = best_num * a
                if lhs < rr or (lhs == rr and basis[i] < basis[p]):
                    p = i
                    best_num = b
                    best_den = a
        if p < 0:
            return UNBOUNDED
        pivot(T, p, q)
        basis[p] = q
    raise RuntimeError("simplex iteration limit reached")


def gauss_jordan(rows, Py_ssize_t ncols):
    cdef list A = [list(r) for r in rows if any(r)]
    cdef list pivots = []
    cdef list rp, ri
    cdef Py_ssize_t top = 0, c, i, j, best, nrows = len(A)
    cdef object v, piv, a
    for c in range(ncols):
        if top >= nrows:
            break
        best = -1
        for i in range(top, nrows):
            v = (<list>A[i])[c]
            if v and (best < 0 or abs(v) < abs((<list>A[best])[c])):
                best = i
        if best < 0:
            continue
        A[top], A[best] = A[best], A[top]
        rp = <list>A[top]
        if rp[c] < 0:
            for j in range(ncols):
                rp[j] = -rp[j]
        piv = rp[c]
        for i in range(nrows):
            if i == top:
                continue
            ri = <list>A[i]
            a = ri[c]
            if a:
                for j in range(ncols):
                    ri[j] = piv * ri[j] - a * rp[j]
                normalize_row(ri)
        normalize_row(rp)
        pivots.append(c)
        top += 1
    return A[:top], pivots


def integer_rank(rows, Py_ssize_t ncols):
    return len(gauss_jordan(rows, ncols)[1])


cdef list _dense_diagonal(list A0):
    cdef list diag = []
    cdef list A = [list(r) for r in A0]
    cdef Py_ssize_t nr, nc, i, j, pr, pc
    cdef object v, piv, k
    cdef bint changed
    while A and A[0]:
        nr = len(A)
        nc = len(<list>A[0])
        pr = -1
        pc = -1
        for i in range(nr):
            for j in range(nc):
                v = (<list>A[i])[j]
                if v and (pr < 0 or abs(v) < abs((<list>A[pr])[pc])):
                    pr = i
                    pc = j
        if pr < 0:
            break
        while True:
            piv = (<list>A[pr])[pc]
            changed = False
            for i in range(nr):
                if i != pr and (<list>A[i])[pc]:
                    k = (<list>A[i])[pc] // piv
                    if k:
                        for j in range(nc):
                            (<list>A[i])[j] = (<list>A[i])[j] - k * (<list>A[pr])[j]
                    if (<list>A[i])[pc]:
                        changed = True
            for j in range(nc):
                if j != pc and (<list>A[pr])[j]:
                    k = (<list>A[pr])[j] // piv
                    if k:
                        for i in range(nr):
                            (<list>A[i])[j] = (<list>A[i])[j] - k * (<list>A[i])[pc]
                    if (<list>A[pr])[j]:
                        changed = True
            if not changed:
                break
            for i in range(nr):
                if (<list>A[i])[pc] and abs((<list>A[i])[pc]) < abs((<list>A[pr])[pc]):
                    pr = i
            for j in range(nc):
                if (<list>A[pr])[j] and abs((<list>A[pr])[j]) < abs((<list>A[pr])[pc]):
                    pc = j
        diag.append(abs((<list>A[pr])[pc]))
        A = [
            [(<list>A[i])[j] for j in range(nc) if j != pc]
            for i in range(nr)
            if i != pr
        ]
    return diag


cdef list _fix_divisibility(list diag):
    cdef list d = sorted([v for v in diag if v])
    cdef bint changed = True
    cdef Py_ssize_t i, j
    cdef object a, b, g
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                a = d[i]
                b = d[j]
                if b % a:
                    g = gcd(a, b)
                    d[i] = g
                    d[j] = a // g * b
                    changed = True
        d.sort()
    return d


def smith_invariants(dict entries, Py_ssize_t nrows, Py_ssize_t ncols):
    cdef dict rows = {}
    cdef dict cols = {}
    cdef dict rp, ri, r
    cdef Py_ssize_t ones = 0, cost, best
    cdef object pick, p, q, u, k, i, j, v, nv
    for (i, j), v in entries.items():
        if v:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
    while True:
        pick = None
        best = -1
        for i, r in rows.items():
            for j, v in r.items():
                if v == 1 or v == -1:
                    cost = (len(r) - 1) * (len(<set>cols[j]) - 1)
                    if best < 0 or cost < best:
                        best = cost
                        pick = (i, j)
                        if cost == 0:
                            break
            if best == 0:
                break
        if pick is None:
            break
        p, q = pick
        rp = <dict>rows.pop(p)
        u = rp[q]
        for i in list(cols[q]):
            if i == p:
                continue
            ri = <dict>rows[i]
            k = ri[q] * u
            for j, v in rp.items():
                nv = ri.get(j, 0) - k * v
                if nv:
                    if j not in ri:
                        (<set>cols[j]).add(i)
                    ri[j] = nv
                elif j in ri:
                    del ri[j]
                    (<set>cols[j]).discard(i)
            if not ri:
                del rows[i]
        for j in rp:
            (<set>cols[j]).discard(p)
        del cols[q]
        ones += 1
    live_rows = sorted([i for i, r in rows.items() if r])
    live_cols = sorted({j for r in rows.values() for j in r})
    rest = []
    if live_rows:
        cidx = {j: n for n, j in enumerate(live_cols)}
        for i in live_rows:
            row = [0] * len(live_cols)
            for j, v in (<dict>rows[i]).items():
                row[cidx[j]] = v
            rest.append(row)
    return [1] * ones + _fix_divisibility(_dense_diagonal(rest))
