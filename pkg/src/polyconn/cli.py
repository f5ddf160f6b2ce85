"""Command-line entry point: ``polyconn <command> [flags]``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .complex import cone_off, complete_intersection, default_box_size, truncate_to_box
from .generator import InstanceSpec, check_genericity, generic_instance
from .homology import cellular_homology, connectivity_level
from .morse import critical_points, morse_setup
from .serialize import dumps, homology_json, instance_from_json, instance_json, polyhedron_from_json
from .svg import polygon_vertices, render_svg
from .verify import default_workers, lemma_record, verify_base, verify_lemma, verify_theorem


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_instances(path) -> list:
    with open(path) as fh:
        obj = json.load(fh)
    items = obj["instances"] if "instances" in obj else [obj]
    return [(item, instance_from_json(item)) for item in items]


def _generated(args) -> list:
    out = []
    for seed in range(args.seed, args.seed + args.count):
        spec = InstanceSpec(args.d, args.n, _r(args), seed)
        fs, _, report, attempt = generic_instance(spec)
        out.append((instance_json(fs, spec, attempt=attempt, genericity=report.as_json()), fs))
    return out


def _r(args, fallback=3) -> int:
    return args.r if args.r is not None else fallback


def cmd_gen(args) -> int:
    items = [item for item, _ in _generated(args)]
    _emit(dumps({"version": __version__, "instances": items}), args.out)
    return 0


def _verify(args, fn, **kw) -> int:
    report = fn(count=args.count, seed=args.seed, box_scale=args.box_scale, workers=args.workers,
                timings=args.timings, **kw)
    _emit(dumps(report), args.out)
    return 0 if report["ok"] else 1


def cmd_verify_theorem(args) -> int:
    return _verify(args, verify_theorem, d=args.d, n=args.n, r=_r(args))


def cmd_verify_base(args) -> int:
    if args.n != 1:
        print("verify-base needs --n 1", file=sys.stderr)
        return 2
    return _verify(args, verify_base, d=args.d, r=_r(args, args.d + 2))


def cmd_verify_lemma(args) -> int:
    return _verify(args, verify_lemma, d=args.d, n=args.n, r=_r(args))


def cmd_morse_report(args) -> int:
    reports = []
    for seed in range(args.seed, args.seed + args.count):
        rec = lemma_record(args.d, args.n, _r(args), seed, box_scale=args.box_scale)
        body = dict(rec.get("morse", {}))
        body.update({"seed": seed, "P": rec.get("P"), "spec": {"d": args.d, "n": args.n, "r": _r(args)}})
        if "error" in rec:
            body["error"] = rec["error"]
        body["overall"] = bool(rec.get("morse", {}).get("overall"))
        reports.append(body)
    _emit(dumps({"version": __version__, "reports": reports}), args.out)
    return 0 if all(r["overall"] for r in reports) else 1


def _homology_of(fs, seed, box_scale) -> dict:
    X = complete_intersection(fs)
    d, n = X.ambient_dim, len(fs)
    T = truncate_to_box(X, default_box_size(X, seed) * Fraction(str(box_scale)))
    h = cellular_homology(T)
    hk = cellular_homology(cone_off(T))
    return {
        "genericity": check_genericity(fs, X=X).as_json(),
        "cells": T.count_by_dim(),
        "X": homology_json(h, connectivity_level(h, nonempty=bool(T.cells))),
        "cone": homology_json(hk, connectivity_level(hk, nonempty=True)),
        "required": d - n - 1,
    }


def cmd_homology(args) -> int:
    items = _load_instances(args.instance) if args.instance else _generated(args)
    results = []
    for item, fs in items:
        seed = item.get("spec", {}).get("seed", args.seed)
        res = _homology_of(fs, seed, args.box_scale)
        res["spec"] = item.get("spec")
        results.append(res)
    _emit(dumps({"version": __version__, "results": results}), args.out)
    return 0


def cmd_render_svg(args) -> int:
    if args.instance:
        item, fs = _load_instances(args.instance)[0]
        seed = item.get("spec", {}).get("seed", args.seed)
    else:
        spec = InstanceSpec(args.d, args.n, _r(args), args.seed)
        fs, _, _, _ = generic_instance(spec)
        seed = args.seed
    X = complete_intersection(fs)
    loci = [complete_intersection([f]) for f in fs]
    M = max(default_box_size(C, seed) for C in loci + [X]) * Fraction(str(args.box_scale))
    P, pts = None, ()
    if args.morse:
        if args.instance:
            print("--morse needs a generated instance", file=sys.stderr)
            return 2
        rec = lemma_record(fs[0].d, len(fs), _r(args), seed)
        if "P" in rec:
            P = polyhedron_from_json(rec["P"])
            pts = critical_points(morse_setup(X, P))
            M = max(M, max(abs(v) for p in polygon_vertices(P) for v in p) + 1)
    text = render_svg(fs, M, P=P, critical_points=pts)
    _emit(text, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, default=2, help="ambient dimension")
    common.add_argument("--n", type=int, default=1, help="number of hypersurfaces")
    common.add_argument("--r", type=int, default=None, help="affine pieces per hypersurface")
    common.add_argument("--count", type=int, default=25, help="number of seeded instances")
    common.add_argument("--seed", type=int, default=0, help="first seed")
    common.add_argument("--box-scale", type=float, default=1.0, help="multiplier on the default box size")
    common.add_argument("--workers", type=int, default=default_workers(),
                        help="worker processes (default from POLYCONN_WORKERS, else 1)")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--timings", action="store_true", help="include per-stage timings in reports")

    p = argparse.ArgumentParser(prog="polyconn", description="Connectivity checks for polyhedral complete intersections.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("gen", parents=[common], help="generate seeded generic instances").set_defaults(fn=cmd_gen)
    sub.add_parser("verify-theorem", parents=[common], help="connectivity of X and its cone-off").set_defaults(
        fn=cmd_verify_theorem)
    sub.add_parser("verify-base", parents=[common], help="single-hypersurface checks").set_defaults(fn=cmd_verify_base)
    sub.add_parser("verify-lemma", parents=[common], help="relative connectivity inside a random simplex").set_defaults(
        fn=cmd_verify_lemma)
    sub.add_parser("morse-report", parents=[common], help="critical points and link checks").set_defaults(
        fn=cmd_morse_report)
    sp = sub.add_parser("render-svg", parents=[common], help="SVG figure of a planar instance")
    sp.add_argument("--instance", default=None, help="instance JSON (from gen)")
    sp.add_argument("--morse", action="store_true", help="overlay a random simplex and its critical points")
    sp.set_defaults(fn=cmd_render_svg)
    hp = sub.add_parser("homology", parents=[common], help="homology of X and of its cone-off")
    hp.add_argument("--instance", default=None, help="instance JSON (from gen)")
    hp.set_defaults(fn=cmd_homology)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
