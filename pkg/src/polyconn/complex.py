"""Argmax-labelled polyhedral cell complexes.

A cell is indexed by one argmax label per PL function plus the set of
truncation facets (box or polytope) it lies on.  Unbounded complexes are
enumerated with exact LPs; truncated complexes are assembled from their
0-cells, which are obtained by solving small linear systems.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import ceil
from typing import Iterable, Optional

import numpy as np

from .linalg import det, dot, kernel_basis, rank, solve
from .plfun import ConvexPLFunction, label_constraints
from .polyhedra import AffineForm, Polyhedron, is_bounded, lp_optimize, strictly_feasible_point


class DimensionMismatch(ValueError):
    pass


class UnboundedCell(ValueError):
    pass


class BoxTooSmall(ValueError):
    pass


class NotTruncated(ValueError):
    pass


@dataclass(frozen=True, order=True)
class CellLabel:
    argmax: tuple
    cut: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "argmax", tuple(frozenset(s) for s in self.argmax))
        object.__setattr__(self, "cut", frozenset(self.cut))

    def contains(self, other: "CellLabel") -> bool:
        return self.cut >= other.cut and all(a >= b for a, b in zip(self.argmax, other.argmax))

    def key(self):
        return (tuple(tuple(sorted(s)) for s in self.argmax), tuple(sorted(self.cut)))

    def codim(self) -> int:
        return sum(len(s) - 1 for s in self.argmax) + len(self.cut)

    def as_json(self):
        return {"argmax": [sorted(s) for s in self.argmax], "cut": sorted(self.cut)}


@dataclass
class Cell:
    id: int
    label: Optional[CellLabel]
    dim: int
    bounded: bool
    geometry: Optional[Polyhedron] = None
    point: Optional[tuple] = None
    basis: tuple = ()
    boundary_marker: bool = False
    kind: str = "geometric"  # geometric | apex | cone | simplex
    base: Optional[int] = None
    vertices: Optional[tuple] = None


@dataclass
class PolyComplex:
    ambient_dim: int
    n: int
    cells: list
    face_pairs: set = field(default_factory=set)
    functions: tuple = ()
    cut_forms: tuple = ()
    cut_kind: Optional[str] = None
    box_size: Optional[Fraction] = None
    violations: list = field(default_factory=list)

    def __post_init__(self):
        self._facets = None
        self._index = None

    # -- queries
    def __len__(self):
        return len(self.cells)

    @property
    def top_dim(self) -> int:
        return max((c.dim for c in self.cells), default=-1)

    def cells_of_dim(self, k: int) -> list:
        return [c for c in self.cells if c.dim == k]

    def count_by_dim(self) -> list:
        return [len(self.cells_of_dim(k)) for k in range(self.top_dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** c.dim for c in self.cells)

    def facets_of(self, cid: int) -> list:
        if self._facets is None:
            fac = {c.id: [] for c in self.cells}
            for c, f in sorted(self.face_pairs):
                fac[c].append(f)
            self._facets = fac
        return self._facets[cid]

    def by_label(self, label: CellLabel):
        if self._index is None:
            self._index = {c.label: c for c in self.cells if c.label is not None}
        return self._index.get(label)

    def vertex_sets(self) -> dict:
        """0-cells in the closure of every cell, via the face lattice."""
        out = {}
        for c in sorted(self.cells, key=lambda c: c.dim):
            if c.dim == 0:
                out[c.id] = frozenset([c.id])
            else:
                s = set()
                for f in self.facets_of(c.id):
                    s |= out[f]
                out[c.id] = frozenset(s)
        return out

    def is_bounded(self) -> bool:
        return all(c.bounded for c in self.cells)

    def boundary_ids(self) -> set:
        return {c.id for c in self.cells if c.boundary_marker}

    def subcomplex(self, ids: Iterable[int]) -> "PolyComplex":
        ids = sorted(set(ids))
        remap = {old: new for new, old in enumerate(ids)}
        cells = []
        for old in ids:
            c = self.cells[old]
            base = remap.get(c.base) if c.base is not None else None
            cells.append(replace(c, id=remap[old], base=base))
        pairs = {(remap[a], remap[b]) for a, b in self.face_pairs if a in remap and b in remap}
        return PolyComplex(
            self.ambient_dim, self.n, cells, pairs, self.functions, self.cut_forms,
            self.cut_kind, self.box_size, list(self.violations),
        )

    def is_face_closed(self, ids) -> bool:
        ids = set(ids)
        return all(f in ids for c, f in self.face_pairs if c in ids)


# ---------------------------------------------------------------- labels and geometry


def label_geometry(functions, label: CellLabel, cut_forms=(), d: int | None = None) -> Polyhedron:
    if d is None:
        d = functions[0].d
    eqs, ineqs = [], []
    for f, S in zip(functions, label.argmax):
        e, i = label_constraints(f, S)
        eqs += e
        ineqs += i
    for j, h in enumerate(cut_forms):
        (eqs if j in label.cut else ineqs).append(h)
    return Polyhedron(d, eqs, ineqs)


def point_label(functions, x, cut_forms=()) -> CellLabel:
    parts = []
    for f in functions:
        vals = [form(x) for form in f.forms]
        top = max(vals)
        parts.append(frozenset(i for i, v in enumerate(vals) if v == top))
    cut = frozenset(j for j, h in enumerate(cut_forms) if h(x) == 0)
    return CellLabel(tuple(parts), cut)


def _direction_basis(geom: Polyhedron) -> tuple:
    if not geom.equalities:
        return tuple(kernel_basis([], geom.ambient_dim))
    return tuple(kernel_basis([f.b for f in geom.equalities], geom.ambient_dim))


def _expected_dim(d: int, label: CellLabel) -> int:
    return d - label.codim()


# ---------------------------------------------------------------- unbounded complexes (LP)


def _seed_labels(functions, min_size: int):
    per = [list(itertools.combinations(range(f.r), min_size)) for f in functions]
    for combo in itertools.product(*per):
        yield CellLabel(tuple(frozenset(s) for s in combo))


def _all_labels(functions, min_size: int, d: int):
    per = []
    for f in functions:
        opts = []
        for k in range(min_size, min(f.r, d + 1) + 1):
            opts += list(itertools.combinations(range(f.r), k))
        per.append(opts)
    for combo in itertools.product(*per):
        yield CellLabel(tuple(frozenset(s) for s in combo))


def build_complex(functions, min_size: int = 2, n: int | None = None, strategy: str = "bfs") -> PolyComplex:
    """All nonempty cells whose labels have at least ``min_size`` pieces per function.

    ``strategy="bfs"`` starts from every minimal label and closes under
    single-index additions; ``"exhaustive"`` tests every label tuple.
    """
    functions = tuple(functions)
    if not functions:
        raise DimensionMismatch("need at least one PL function")
    d = functions[0].d
    if any(f.d != d for f in functions):
        raise DimensionMismatch("PL functions live in different dimensions")
    if n is None:
        n = len(functions)
    found = {}
    tested = set()
    if strategy == "exhaustive":
        queue = list(_all_labels(functions, min_size, d))
    elif strategy == "bfs":
        queue = list(_seed_labels(functions, min_size))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    while queue:
        label = queue.pop()
        if label in tested:
            continue
        tested.add(label)
        geom = label_geometry(functions, label, (), d)
        pt = strictly_feasible_point(geom)
        if pt is None:
            continue
        found[label] = (geom, pt)
        if strategy == "bfs":
            for k, (f, S) in enumerate(zip(functions, label.argmax)):
                if len(S) > d:
                    continue
                for i in range(f.r):
                    if i not in S:
                        parts = list(label.argmax)
                        parts[k] = S | {i}
                        child = CellLabel(tuple(parts))
                        if child not in tested:
                            queue.append(child)
    cells = []
    violations = []
    for label in sorted(found, key=lambda L: (-_expected_dim(d, L), L.key())):
        geom, pt = found[label]
        grads = [f.b for f in geom.equalities]
        r = rank(grads) if grads else 0
        dim = d - r
        if point_label(functions, pt) != label:
            violations.append(("label", label.key()))
        if r != len(grads):
            violations.append(("transversality", label.key()))
        if dim != _expected_dim(d, label):
            violations.append(("dimension", label.key(), dim))
        cells.append(Cell(len(cells), label, dim, is_bounded(geom), geom, pt, _direction_basis(geom)))
    cells.sort(key=lambda c: (c.dim, c.label.key()))
    for i, c in enumerate(cells):
        c.id = i
    C = PolyComplex(d, n, cells, set(), functions, violations=violations)
    C.face_pairs = face_lattice(C)
    return C


def complete_intersection(functions, strategy: str = "bfs") -> PolyComplex:
    """Cells where every function attains its max at least twice.

    ``n`` may equal ``d`` (generically a finite set of points), which link
    computations and planar figures rely on; random instances keep ``n < d``.
    """
    functions = tuple(functions)
    if not functions:
        raise DimensionMismatch("need at least one PL function")
    d = functions[0].d
    if any(f.d != d for f in functions):
        raise DimensionMismatch("PL functions live in different dimensions")
    if len(functions) > d:
        raise DimensionMismatch(f"{len(functions)} hypersurfaces in R^{d}")
    return build_complex(functions, min_size=2, strategy=strategy)


def full_subdivision(f: ConvexPLFunction, strategy: str = "bfs") -> PolyComplex:
    """The subdivision of R^d induced by ``f`` (labels with one or more pieces)."""
    return build_complex([f], min_size=1, n=0, strategy=strategy)


# ---------------------------------------------------------------- face lattice


def _coface_candidates(label: CellLabel, min_size: int):
    for k, S in enumerate(label.argmax):
        if len(S) > min_size:
            for i in S:
                parts = list(label.argmax)
                parts[k] = S - {i}
                yield CellLabel(tuple(parts), label.cut)
    for j in label.cut:
        yield CellLabel(label.argmax, label.cut - {j})


def _closure_contains(c: Cell, f: Cell, C: PolyComplex, verify: str) -> bool:
    geom = c.geometry
    closed = Polyhedron(geom.ambient_dim, geom.equalities, geom.inequalities)
    if not closed.contains(f.point):
        return False
    if verify == "lp":
        for form in geom.equalities:
            for sense in ("max", "min"):
                out = lp_optimize(form.b, f.geometry, sense)
                if out.status != "Optimal" or out.value + form.a != 0:
                    return False
        for form in geom.inequalities:
            out = lp_optimize(form.b, f.geometry, "min")
            if out.status != "Optimal" or out.value + form.a < 0:
                return False
    return True


def face_lattice(C: PolyComplex, verify: str = "point") -> set:
    """``(cell, facet)`` incidences from label containment plus an inclusion test.

    ``verify="point"`` checks the facet's interior point against the cell's
    closed constraints (label containment already implies the inclusion);
    ``verify="lp"`` additionally bounds every constraint over the facet by LP.
    """
    geometric = [c for c in C.cells if c.kind == "geometric"]
    index = {c.label: c for c in geometric}
    min_size = 2 if C.n > 0 else 1
    pairs = set()
    generic = not C.violations
    for f in geometric:
        if generic:
            cands = [index.get(L) for L in _coface_candidates(f.label, min_size)]
        else:
            cands = [c for c in geometric if c.dim == f.dim + 1 and f.label.contains(c.label)]
        for c in cands:
            if c is None or c.dim != f.dim + 1:
                continue
            if _closure_contains(c, f, C, verify):
                pairs.add((c.id, f.id))
    return pairs


# ---------------------------------------------------------------- truncation


def box_forms(d: int, M) -> tuple:
    """Facets of ``[-M, M]^d``: index ``2i`` is ``x_i >= -M``, ``2i+1`` is ``x_i <= M``."""
    M = Fraction(M)
    out = []
    for i in range(d):
        e = [0] * d
        e[i] = 1
        out.append(AffineForm(tuple(e), M))
        out.append(AffineForm(tuple(-v for v in e), M))
    return tuple(out)


def anchor_points(C: PolyComplex) -> list:
    """Interior points of the minimal cells (cells without facets)."""
    return [c.point for c in C.cells if c.kind == "geometric" and not C.facets_of(c.id)]


def vertex_bound(C: PolyComplex) -> int:
    pts = anchor_points(C)
    if not pts:
        return 1
    return max(1, ceil(max(abs(v) for p in pts for v in p)))


def default_box_size(C: PolyComplex, seed: int = 0) -> Fraction:
    """Random rational in ``[2V+1, 3V+1]`` with ``V`` bounding the anchor coordinates."""
    V = vertex_bound(C)
    rng = np.random.Generator(np.random.Philox(key=seed))
    k = int(rng.integers(0, 1024 * V + 1))
    return Fraction(2 * V + 1) + Fraction(k, 1024)


def _sub_labels(label: CellLabel, min_size: int):
    per = []
    for S in label.argmax:
        opts = []
        for k in range(min_size, len(S) + 1):
            opts += [frozenset(c) for c in itertools.combinations(sorted(S), k)]
        per.append(opts)
    cut = sorted(label.cut)
    cuts = [frozenset(c) for k in range(len(cut) + 1) for c in itertools.combinations(cut, k)]
    for combo in itertools.product(*per):
        for B in cuts:
            yield CellLabel(combo, B)


def truncate(C: PolyComplex, cut_forms, kind: str = "polyhedron", box_size=None) -> PolyComplex:
    """Intersect every cell of ``C`` with the polytope ``{h >= 0 for h in cut_forms}``.

    New cells lying on the polytope boundary carry the touched facets in
    their labels and a boundary marker.  All resulting cells are bounded.
    """
    cut_forms = tuple(cut_forms)
    d = C.ambient_dim
    fs = C.functions
    min_size = 2 if C.n > 0 else 1
    vertices = {}
    violations = list(C.violations)
    m = len(cut_forms)
    for c in C.cells:
        p = c.point
        k = c.dim
        if k == 0:
            vals = [h(p) for h in cut_forms]
            if all(v > 0 for v in vals):
                vertices[c.label] = p
            elif all(v >= 0 for v in vals):
                actual = point_label(fs, p, cut_forms)
                violations.append(("vertex-on-cut", actual.key()))
                vertices[actual] = p
            continue
        U = c.basis
        ineqs = c.geometry.inequalities
        for J in itertools.combinations(range(m), k):
            A = [[dot(cut_forms[j].b, u) for u in U] for j in J]
            t = solve(A, [-cut_forms[j](p) for j in J])
            if t is None:
                continue
            v = tuple(p[i] + sum(t[s] * U[s][i] for s in range(k)) for i in range(d))
            others = [cut_forms[j](v) for j in range(m) if j not in J]
            if any(val < 0 for val in others):
                continue
            cell_vals = [g(v) for g in ineqs]
            if any(val < 0 for val in cell_vals):
                continue
            if any(val == 0 for val in others) or any(val == 0 for val in cell_vals):
                # cut passes through a lower cell or several cut facets meet here
                actual = point_label(fs, v, cut_forms)
                violations.append(("degenerate-truncation-vertex", actual.key()))
                vertices[actual] = v
                continue
            vertices[CellLabel(c.label.argmax, frozenset(J))] = v
    groups = {}
    for vlabel, v in vertices.items():
        for L in _sub_labels(vlabel, min_size):
            groups.setdefault(L, []).append(vlabel)
    cells = []
    for L in sorted(groups, key=lambda L: L.key()):
        vl = groups[L]
        pts = [vertices[x] for x in vl]
        bary = tuple(sum(col, Fraction(0)) / len(pts) for col in zip(*pts))
        if point_label(fs, bary, cut_forms) != L:
            continue
        diffs = [tuple(a - b for a, b in zip(q, pts[0])) for q in pts[1:]]
        dim = rank(diffs) if diffs else 0
        geom = label_geometry(fs, L, cut_forms, d)
        grads = [f.b for f in geom.equalities]
        r = rank(grads) if grads else 0
        if r != len(grads) or r != d - dim:
            violations.append(("transversality", L.key()))
        if dim != _expected_dim(d, L):
            violations.append(("dimension", L.key(), dim))
        cells.append(Cell(0, L, dim, True, geom, bary, _direction_basis(geom), boundary_marker=bool(L.cut)))
    cells.sort(key=lambda c: (c.dim, c.label.key()))
    for i, c in enumerate(cells):
        c.id = i
    T = PolyComplex(d, C.n, cells, set(), fs, cut_forms, kind, box_size, violations)
    T.face_pairs = face_lattice(T)
    return T


def truncate_to_box(C: PolyComplex, M=None, seed: int = 0) -> PolyComplex:
    """``C`` intersected with ``[-M, M]^d``; ``M`` defaults to :func:`default_box_size`."""
    V = max((abs(v) for p in anchor_points(C) for v in p), default=Fraction(0))
    if M is None:
        M = default_box_size(C, seed)
    M = Fraction(M)
    if M <= V:
        raise BoxTooSmall(f"box half-width {M} does not exceed vertex bound {V}")
    return truncate(C, box_forms(C.ambient_dim, M), kind="box", box_size=M)


def truncate_to_polyhedron(C: PolyComplex, P: Polyhedron) -> PolyComplex:
    if P.equalities:
        raise ValueError("truncating polytope must be full-dimensional")
    return truncate(C, P.inequalities, kind="polyhedron")


# ---------------------------------------------------------------- compact part, cone-off


def compact_subcomplex(C: PolyComplex) -> PolyComplex:
    return C.subcomplex(c.id for c in C.cells if c.bounded)


def cone_off(C: PolyComplex) -> PolyComplex:
    """Add an apex and cone it over the boundary-marked subcomplex."""
    if not C.is_bounded():
        raise NotTruncated("cone-off needs a truncated (bounded) complex")
    cells = [replace(c) for c in C.cells]
    pairs = set(C.face_pairs)
    apex = Cell(len(cells), None, 0, True, kind="apex")
    cells.append(apex)
    cone_of = {}
    for c in sorted((c for c in C.cells if c.boundary_marker), key=lambda c: (c.dim, c.id)):
        cc = Cell(len(cells), None, c.dim + 1, True, kind="cone", base=c.id)
        cells.append(cc)
        cone_of[c.id] = cc.id
    for base, cid in cone_of.items():
        pairs.add((cid, base))
        if C.cells[base].dim == 0:
            pairs.add((cid, apex.id))
        for f in C.facets_of(base):
            pairs.add((cid, cone_of[f]))
    return PolyComplex(
        C.ambient_dim, C.n, cells, pairs, C.functions, C.cut_forms, C.cut_kind, C.box_size,
        list(C.violations),
    )


# ---------------------------------------------------------------- orientation and boundaries


def _geometric_sign(c: Cell, f: Cell) -> int:
    w = tuple(a - b for a, b in zip(f.point, c.point))
    frame = (w,) + tuple(f.basis)
    M = [[dot(u, b) for b in c.basis] for u in frame]
    s = det(M)
    if s == 0:
        raise ArithmeticError("degenerate orientation frame")
    return 1 if s > 0 else -1


def incidence(C: PolyComplex, cid: int, fid: int) -> int:
    c = C.cells[cid]
    f = C.cells[fid]
    if c.kind == "geometric":
        if not c.bounded:
            raise UnboundedCell(f"cell {cid} is unbounded")
        return _geometric_sign(c, f)
    if c.kind == "cone":
        if fid == c.base:
            return 1
        if f.kind == "apex":
            return -1
        return -incidence(C, c.base, f.base)
    if c.kind == "simplex":
        drop = [v for v in c.vertices if v not in f.vertices]
        return -1 if c.vertices.index(drop[0]) % 2 else 1
    raise ValueError(f"cell kind {c.kind} has no facets")


@dataclass
class ChainComplex:
    """Sparse integer boundary maps; ``boundaries[k]`` maps k-chains to (k-1)-chains."""

    cells_by_dim: dict
    boundaries: dict

    @property
    def top_dim(self) -> int:
        return max(self.cells_by_dim, default=-1)

    def size(self, k: int) -> int:
        return len(self.cells_by_dim.get(k, ()))

    def matrix(self, k: int) -> list:
        rows, cols = self.size(k - 1), self.size(k)
        M = [[0] * cols for _ in range(rows)]
        for (i, j), v in self.boundaries.get(k, {}).items():
            M[i][j] = v
        return M

    def check_dd(self) -> bool:
        for k in range(2, self.top_dim + 1):
            lo = self.boundaries.get(k - 1, {})
            hi = self.boundaries.get(k, {})
            by_row = {}
            for (i, j), v in lo.items():
                by_row.setdefault(j, []).append((i, v))
            acc = {}
            for (j, col), v in hi.items():
                for i, u in by_row.get(j, ()):
                    acc[(i, col)] = acc.get((i, col), 0) + u * v
            if any(acc.values()):
                return False
        return True

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * len(ids) for k, ids in self.cells_by_dim.items())


def boundary_matrices(C: PolyComplex, exclude=()) -> ChainComplex:
    """Cellular chain complex of ``C``; cells in ``exclude`` are quotiented out."""
    exclude = set(exclude)
    by_dim = {}
    for c in C.cells:
        if c.id in exclude:
            continue
        if c.kind == "geometric" and not c.bounded:
            raise UnboundedCell(f"cell {c.id} is unbounded; truncate first")
        by_dim.setdefault(c.dim, []).append(c.id)
    pos = {}
    for k, ids in by_dim.items():
        for i, cid in enumerate(ids):
            pos[cid] = i
    bd = {}
    for cid, fid in C.face_pairs:
        if cid in exclude or fid in exclude:
            continue
        k = C.cells[cid].dim
        bd.setdefault(k, {})[(pos[fid], pos[cid])] = incidence(C, cid, fid)
    return ChainComplex(by_dim, bd)


# ---------------------------------------------------------------- pulling triangulation


def _vertex_order(C: PolyComplex):
    def key(cid):
        c = C.cells[cid]
        if c.kind == "apex":
            return (1, ())
        return (0, tuple(c.point))

    return key


def triangulate(C: PolyComplex) -> PolyComplex:
    """Pulling triangulation: cone each cell's least vertex over its far facets."""
    if not C.is_bounded():
        raise UnboundedCell("triangulation needs a bounded complex")
    verts = C.vertex_sets()
    key = _vertex_order(C)
    memo = {}

    def tri(cid):
        if cid in memo:
            return memo[cid]
        c = C.cells[cid]
        if c.dim == 0:
            out = [(cid,)]
        else:
            v = min(verts[cid], key=key)
            out = []
            for f in C.facets_of(cid):
                if v in verts[f]:
                    continue
                out += [(v,) + s for s in tri(f)]
        memo[cid] = out
        return out

    simplices = set()
    for c in C.cells:
        for s in tri(c.id):
            for k in range(1, len(s) + 1):
                for sub in itertools.combinations(s, k):
                    simplices.add(sub)
    ordered = sorted(simplices, key=lambda s: (len(s), [key(v) for v in s]))
    cells = []
    index = {}
    for s in ordered:
        cid = len(cells)
        index[s] = cid
        base = C.cells[s[0]]
        point = None
        if len(s) == 1 and base.kind == "geometric":
            point = base.point
        cells.append(Cell(cid, None, len(s) - 1, True, point=point, kind="simplex", vertices=s))
    pairs = set()
    for s, cid in index.items():
        if len(s) > 1:
            for i in range(len(s)):
                pairs.add((cid, index[s[:i] + s[i + 1:]]))
    return PolyComplex(C.ambient_dim, C.n, cells, pairs, C.functions)
