"""End-to-end verification runs over seeded random instances.

Each ``*_record`` function handles one seed and returns a JSON-ready dict.
The ``verify_*`` drivers fan seeds out over a process pool and assemble the
report in seed order, so output does not depend on the worker count.
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial

from . import __version__
from .complex import (
    anchor_points,
    compact_subcomplex,
    cone_off,
    default_box_size,
    full_subdivision,
    truncate_to_box,
    vertex_bound,
)
from .generator import MAX_REDRAWS, InstanceSpec, check_genericity, generic_instance, random_simplex
from .homology import (
    PreconditionFailed,
    cellular_homology,
    connectivity_level,
    level_json,
    pi1_trivial_heuristic,
    relative_homology,
)
from .linalg import rank
from .morse import (
    VERTEX,
    BoundaryCriticalPoint,
    DegenerateGradient,
    NewtonDivergence,
    critical_points,
    distinct_critical_values,
    morse_setup,
    verify_links,
)
from .serialize import polyhedron_json

WORKERS_ENV = "POLYCONN_WORKERS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.marks = {}
        self._t = time.perf_counter()

    def lap(self, name: str):
        now = time.perf_counter()
        self.marks[name] = round(now - self._t, 4)
        self._t = now

    def attach(self, record: dict) -> dict:
        if self.enabled:
            record["timings"] = self.marks
        return record


def _box(X, seed: int, box_scale) -> Fraction:
    return default_box_size(X, seed) * Fraction(str(box_scale))


def _level(C):
    h = cellular_homology(C)
    return h, connectivity_level(h, nonempty=len(C.cells) > 0)


def _pi1(C, h) -> str:
    try:
        return pi1_trivial_heuristic(C, h1=h)
    except PreconditionFailed:
        return "PreconditionFailed"


# ---------------------------------------------------------------- per-instance records


def theorem_record(d, n, r, seed, box_scale=1, timings=False) -> dict:
    clock = _Clock(timings)
    spec = InstanceSpec(d, n, r, seed)
    fs, X, report, attempt = generic_instance(spec)
    clock.lap("generate")
    T = truncate_to_box(X, _box(X, seed, box_scale))
    hX, lX = _level(T)
    clock.lap("homology_X")
    K = cone_off(T)
    hK, lK = _level(K)
    clock.lap("homology_cone")
    required = d - n - 1
    rec = {
        "seed": seed,
        "attempt": attempt,
        "genericity": report.as_json(),
        "box_violations": len(T.violations),
        "cells_X": T.count_by_dim(),
        "homology_X": hX.as_json(),
        "homology_cone": hK.as_json(),
        "level_X": level_json(lX),
        "level_cone": level_json(lK),
        "required": required,
        "pass": bool(len(T.cells) > 0 and lX >= required and lK >= required),
    }
    if required >= 1:
        rec["pi1_X"] = _pi1(T, hX)
        rec["pi1_cone"] = _pi1(K, hK)
        clock.lap("pi1")
    return clock.attach(rec)


def _has_lineality(f) -> bool:
    b0 = f.forms[0].b
    diffs = [tuple(u - v for u, v in zip(g.b, b0)) for g in f.forms[1:]]
    return rank(diffs) < f.d if diffs else True


def base_record(d, n, r, seed, box_scale=1, timings=False) -> dict:
    if n != 1:
        raise ValueError("the base case is about a single hypersurface (n = 1)")
    clock = _Clock(timings)
    spec = InstanceSpec(d, 1, r, seed)
    fs, X, report, attempt = generic_instance(spec)
    f = fs[0]
    clock.lap("generate")
    required = d - 2
    T = truncate_to_box(X, _box(X, seed, box_scale))
    hK, lK = _level(cone_off(T))
    clock.lap("homology_cone")
    Xc = compact_subcomplex(X)
    if Xc.cells:
        hC, lC = _level(Xc)
        compact = {"homology": hC.as_json(), "level": level_json(lC), "pass": bool(lC >= required)}
    else:
        compact = {"homology": None, "level": level_json(-2), "pass": True, "note": "empty"}
    clock.lap("homology_compact")
    lineality = _has_lineality(f)
    S = compact_subcomplex(full_subdivision(f))
    if S.cells:
        hS, lS = _level(S)
        point = {"homology": hS.as_json(), "pass": bool(hS.betti[:1] == (1,) and lS == float("inf"))}
    elif lineality:
        point = {"homology": None, "pass": True, "note": "lineality space, no compact cells"}
    else:
        point = {"homology": None, "pass": False, "note": "no compact cells"}
    clock.lap("homology_subdivision")
    rec = {
        "seed": seed,
        "attempt": attempt,
        "genericity": report.as_json(),
        "cone": {"homology": hK.as_json(), "level": level_json(lK), "pass": bool(lK >= required)},
        "compact_part": compact,
        "compact_closure": point,
        "required": required,
    }
    rec["pass"] = rec["cone"]["pass"] and compact["pass"] and point["pass"]
    return clock.attach(rec)


def _lemma_attempt(fs, X, seed, attempt, center, radius):
    P = random_simplex(X.ambient_dim, center, radius, seed, attempt)
    report = check_genericity(fs, P=P, X=X)
    if not report.ok:
        return None, f"genericity: {report.details[:3]}"
    try:
        setup = morse_setup(X, P)
        pts = critical_points(setup)
        if not distinct_critical_values(pts):
            return None, "critical values collide"
        links = verify_links(setup, pts)
    except (DegenerateGradient, BoundaryCriticalPoint, NewtonDivergence) as e:
        return None, f"{type(e).__name__}: {e}"
    return (P, setup, pts, links), None


def lemma_record(d, n, r, seed, box_scale=1, timings=False) -> dict:
    clock = _Clock(timings)
    spec = InstanceSpec(d, n, r, seed)
    fs, X, report, attempt = generic_instance(spec)
    clock.lap("generate")
    anchors = sorted(anchor_points(X))
    center = anchors[seed % len(anchors)]
    radius = Fraction(vertex_bound(X)) * Fraction(str(box_scale))
    rejections = []
    found = None
    for p_attempt in range(MAX_REDRAWS):
        found, why = _lemma_attempt(fs, X, seed, p_attempt, center, radius)
        if found is not None:
            break
        rejections.append(why)
    required = d - n - 1
    if found is None:
        return {"seed": seed, "pass": False, "error": "RejectionLimitExceeded", "rejections": rejections[:5]}
    P, setup, pts, links = found
    clock.lap("morse")
    XP = setup.XP
    rel = relative_homology(XP, XP.boundary_ids())
    level = connectivity_level(rel, nonempty=True, reduced=False)
    clock.lap("relative_homology")
    interior_vertices = sum(1 for c in XP.cells if c.dim == 0 and not c.label.cut)
    hosts = [p.host_cell for p in pts]
    morse = {
        "critical_points": [p.as_json() for p in pts],
        "vertices_in_interior": interior_vertices,
        "vertex_points": sum(1 for p in pts if p.kind == VERTEX),
        "one_per_face": len(hosts) == len(set(hosts)),
        "distinct_values": True,
        "links": links["links"],
    }
    morse["overall"] = bool(
        morse["vertices_in_interior"] == morse["vertex_points"] and morse["one_per_face"] and links["overall"]
    )
    rel_ok = bool(level >= required)
    rec = {
        "seed": seed,
        "attempt": attempt,
        "P_attempts": len(rejections) + 1,
        "P": polyhedron_json(P),
        "genericity": report.as_json(),
        "relative_homology": rel.as_json(),
        "relative_level": level_json(level),
        "required": required,
        "morse": morse,
        "consistent": bool(rel_ok or not morse["overall"]),
        "pass": bool(rel_ok and morse["overall"]),
    }
    return clock.attach(rec)


# ---------------------------------------------------------------- batch drivers


def _safe(fn, seed):
    try:
        return fn(seed)
    except Exception as e:  # per-instance failures are data, not crashes
        return {"seed": seed, "pass": False, "error": f"{type(e).__name__}: {e}"}


def run_batch(record_fn, seeds, workers: int = 1) -> list:
    job = partial(_safe, record_fn)
    if workers <= 1 or len(seeds) <= 1:
        out = [job(s) for s in seeds]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            out = list(ex.map(job, seeds))
    return sorted(out, key=lambda rec: rec["seed"])


def _report(command, record_fn, d, n, r, count, seed, box_scale, workers, timings):
    fn = partial(record_fn, d, n, r, box_scale=box_scale, timings=timings)
    records = run_batch(fn, list(range(seed, seed + count)), workers)
    passed = sum(1 for rec in records if rec.get("pass"))
    out = {
        "command": command,
        "version": __version__,
        "spec": {"d": d, "n": n, "r": r, "count": count, "seed": seed, "box_scale": str(box_scale)},
        "records": records,
        "passed": passed,
        "total": len(records),
        "pass_rate": passed / len(records) if records else 1.0,
    }
    pi1 = [rec[k] for rec in records for k in ("pi1_X", "pi1_cone") if k in rec]
    if pi1:
        out["pi1_outcomes"] = {k: pi1.count(k) for k in sorted(set(pi1))}
    out["ok"] = passed == len(records)
    return out


def verify_theorem(d, n, r, count, seed=0, box_scale=1, workers=1, timings=False) -> dict:
    return _report("verify-theorem", theorem_record, d, n, r, count, seed, box_scale, workers, timings)


def verify_base(d, r, count, seed=0, box_scale=1, workers=1, timings=False) -> dict:
    return _report("verify-base", base_record, d, 1, r, count, seed, box_scale, workers, timings)


def verify_lemma(d, n, r, count, seed=0, box_scale=1, workers=1, timings=False) -> dict:
    return _report("verify-lemma", lemma_record, d, n, r, count, seed, box_scale, workers, timings)
