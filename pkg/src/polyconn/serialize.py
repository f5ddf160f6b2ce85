"""JSON encodings.  Rationals are written as ``"p/q"`` strings (``q`` dropped when 1)."""
from __future__ import annotations

import json

from .complex import PolyComplex
from .homology import HomologyResult, level_json
from .linalg import rat_str, rational
from .plfun import ConvexPLFunction
from .polyhedra import AffineForm, Polyhedron


def form_json(f: AffineForm) -> list:
    return [[rat_str(v) for v in f.b], rat_str(f.a)]


def form_from_json(obj) -> AffineForm:
    b, a = obj
    return AffineForm(tuple(rational(v) for v in b), rational(a))


def polyhedron_json(P: Polyhedron) -> dict:
    return {
        "ambient_dim": P.ambient_dim,
        "equalities": [form_json(f) for f in P.equalities],
        "inequalities": [form_json(f) for f in P.inequalities],
    }


def polyhedron_from_json(obj) -> Polyhedron:
    return Polyhedron(
        obj["ambient_dim"],
        tuple(form_from_json(f) for f in obj.get("equalities", ())),
        tuple(form_from_json(f) for f in obj.get("inequalities", ())),
    )


def plfun_json(f: ConvexPLFunction) -> dict:
    return {"d": f.d, "forms": [{"b": [rat_str(v) for v in p.b], "a": rat_str(p.a)} for p in f.forms]}


def plfun_from_json(obj) -> ConvexPLFunction:
    f = ConvexPLFunction.from_coefficients([(p["b"], p["a"]) for p in obj["forms"]])
    if f.d != obj.get("d", f.d):
        raise ValueError("declared dimension does not match the forms")
    return f


def instance_json(functions, spec=None, **extra) -> dict:
    out = {"functions": [plfun_json(f) for f in functions]}
    if spec is not None:
        out["spec"] = spec.as_json()
    out.update(extra)
    return out


def instance_from_json(obj) -> list:
    return [plfun_from_json(f) for f in obj["functions"]]


def complex_json(C: PolyComplex) -> dict:
    cells = []
    for c in C.cells:
        cells.append({
            "id": c.id,
            "dim": c.dim,
            "kind": c.kind,
            "label": c.label.as_json() if c.label is not None else None,
            "geometry": polyhedron_json(c.geometry) if c.geometry is not None else None,
            "bounded": c.bounded,
            "boundary_marker": c.boundary_marker,
        })
    return {
        "ambient_dim": C.ambient_dim,
        "n": C.n,
        "cells": cells,
        "face_pairs": sorted([a, b] for a, b in C.face_pairs),
    }


def homology_json(h: HomologyResult, level=None) -> dict:
    out = h.as_json()
    if level is not None:
        out["connectivity_level"] = level_json(level)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
