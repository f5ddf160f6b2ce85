"""Compare the pure-Python and compiled integer kernels on representative inputs.

    python benchmarks/bench_kernels.py [--repeat 5]

Inputs are the boundary matrices and LP tableaux produced by actual runs,
so the numbers reflect the workloads the verification commands see.
"""
import argparse
import copy
import time

from polyconn import kernels
from polyconn.complex import boundary_matrices, cone_off, truncate_to_box
from polyconn.generator import InstanceSpec, generic_instance
from polyconn.linalg import integer_row


def boundary_inputs():
    out = []
    for d, n, r in [(3, 1, 4), (3, 2, 4), (4, 2, 3)]:
        _, X, _, _ = generic_instance(InstanceSpec(d, n, r, seed=1))
        cc = boundary_matrices(cone_off(truncate_to_box(X)))
        for k, bd in sorted(cc.boundaries.items()):
            out.append((f"snf d{k} ({d},{n},{r})", dict(bd), cc.size(k - 1), cc.size(k)))
    return out


def elimination_inputs():
    _, X, _, _ = generic_instance(InstanceSpec(4, 1, 6, seed=2))
    rows = []
    for c in X.cells:
        for f in c.geometry.equalities + c.geometry.inequalities:
            rows.append(integer_row(tuple(f.b) + (f.a,)))
    return [("gauss_jordan", rows[: min(len(rows), 400)], len(rows[0]))]


def lp_input():
    # max sum x_i  s.t.  A x <= b,  x >= 0; columns are x | slacks | z | rhs
    m, k = 30, 20
    T = []
    for i in range(m):
        row = [((i * 7 + j * 13) % 17) + 1 for j in range(k)] + [0] * m + [0, 100 + i]
        row[k + i] = 1
        T.append(row)
    T.append([-1] * k + [0] * m + [1, 0])
    basis = [k + i for i in range(m)]
    return ("simplex", T, basis, k + m)


def timed(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    impls = [("python", kernels.pure)]
    if kernels.compiled is not None:
        impls.append(("cython", kernels.compiled))
    else:
        print("compiled kernels not built; showing the pure-Python backend only")

    cases = []
    for name, entries, nr, nc in boundary_inputs():
        cases.append((name, lambda m, e=entries, a=nr, b=nc: m.smith_invariants(e, a, b)))
    for name, rows, nc in elimination_inputs():
        cases.append((name, lambda m, r=rows, c=nc: m.gauss_jordan([list(x) for x in r], c)))
    name, T, basis, ncols = lp_input()
    cases.append((name, lambda m: m.simplex_iterate(copy.deepcopy(T), list(basis), ncols)))

    header = f"{'case':<28}" + "".join(f"{n:>12}" for n, _ in impls) + ("     speedup" if len(impls) == 2 else "")
    print(header)
    for name, fn in cases:
        times = [timed(lambda: fn(mod), args.repeat) for _, mod in impls]
        line = f"{name:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if len(times) == 2:
            line += f"{times[0] / times[1]:>11.2f}x"
        print(line)


if __name__ == "__main__":
    main()
