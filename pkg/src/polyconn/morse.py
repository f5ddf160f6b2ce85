"""Distance-product Morse function on ``X ∩ P``: critical points and their links.

Critical points are algebraic, so their locations and values are floats.
Everything topological downstream (tangent fans, slices, homology) is
rebuilt exactly from a rational approximation of the gradient.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .complex import PolyComplex, complete_intersection, truncate_to_box, truncate_to_polyhedron
from .homology import EMPTY_LEVEL, cellular_homology, connectivity_level, level_json
from .linalg import dot, kernel_basis
from .plfun import ConvexPLFunction
from .polyhedra import AffineForm, Polyhedron, dimension, is_bounded

VERTEX = "Vertex"
FACE_INTERIOR = "FaceInterior"

RESIDUAL_TOL = 1e-9
MAX_NEWTON_ITER = 200


class NewtonDivergence(RuntimeError):
    pass


class DegenerateGradient(ValueError):
    pass


class BoundaryCriticalPoint(ValueError):
    """The restricted maximiser sits on the boundary of its face (non-generic)."""


@dataclass
class MorseSetup:
    X: PolyComplex
    P: Polyhedron
    hyperplanes: tuple
    XP: PolyComplex

    def value(self, x) -> float:
        return float(np.prod(self._distances(x)))

    def _distances(self, x):
        B, a, norms = self._arrays()
        return (B @ np.asarray(x, dtype=float) + a) / norms

    def _arrays(self):
        if not hasattr(self, "_cache"):
            B = np.array([[float(v) for v in h.b] for h in self.hyperplanes])
            a = np.array([float(h.a) for h in self.hyperplanes])
            self._cache = (B, a, np.linalg.norm(B, axis=1))
        return self._cache

    def log_gradient(self, x) -> np.ndarray:
        B, a, _ = self._arrays()
        ell = B @ np.asarray(x, dtype=float) + a
        return B.T @ (1.0 / ell)

    def gradient(self, x) -> np.ndarray:
        return self.value(x) * self.log_gradient(x)

    def exact_value(self, x) -> Fraction:
        """Product of the facet forms at an exact point, without the norm factors."""
        out = Fraction(1)
        for h in self.hyperplanes:
            out *= h(x)
        return out


@dataclass
class CriticalPoint:
    location: tuple
    value: float
    host_cell: int
    host_dim: int
    kind: str
    residual: float = 0.0

    def as_json(self) -> dict:
        return {
            "location": [round(v, 12) for v in self.location],
            "value": float(f"{self.value:.12g}"),
            "host_cell": self.host_cell,
            "host_dim": self.host_dim,
            "kind": self.kind,
        }


@dataclass
class LinkComplex:
    complex: Optional[PolyComplex]
    expected_connectivity: int
    dim: int
    delta: Optional[Fraction] = None
    gradient: Optional[tuple] = None
    construction: dict = field(default_factory=dict)


def minimal_hyperplanes(P: Polyhedron) -> tuple:
    """Facet-defining inequalities of a full-dimensional polytope, duplicates dropped."""
    kept = []
    for j, h in enumerate(P.inequalities):
        facet = Polyhedron(P.ambient_dim, (h,), P.inequalities[:j] + P.inequalities[j + 1:])
        if dimension(facet) != P.ambient_dim - 1:
            continue
        if any(_same_halfspace(h, g) for g in kept):
            continue
        kept.append(h)
    return tuple(kept)


def _same_halfspace(h: AffineForm, g: AffineForm) -> bool:
    i = next(k for k, v in enumerate(h.b) if v)
    if g.b[i] == 0 or (g.b[i] > 0) != (h.b[i] > 0):
        return False
    s = g.b[i] / h.b[i]
    return all(u * s == v for u, v in zip(h.b, g.b)) and h.a * s == g.a


def morse_setup(X: PolyComplex, P: Polyhedron) -> MorseSetup:
    d = X.ambient_dim
    if P.equalities or dimension(P) != d:
        raise ValueError("P must be full-dimensional")
    if not is_bounded(P):
        raise ValueError("P must be bounded")
    H = minimal_hyperplanes(P)
    XP = truncate_to_polyhedron(X, Polyhedron(d, (), H))
    return MorseSetup(X, P, H, XP)


# ---------------------------------------------------------------- critical points


def _orthonormal(basis) -> np.ndarray:
    if not basis:
        return np.zeros((0, 0))
    A = np.array([[float(v) for v in b] for b in basis]).T
    q, _ = np.linalg.qr(A)
    return q


def _newton_on_face(s: MorseSetup, p0: np.ndarray, U: np.ndarray, start: np.ndarray):
    B, a, _ = s._arrays()
    BU = B @ U
    t = np.linalg.lstsq(U, start - p0, rcond=None)[0]

    def phi(t):
        ell = B @ (p0 + U @ t) + a
        if np.any(ell <= 0):
            return -np.inf, ell
        return float(np.sum(np.log(ell))), ell

    val, ell = phi(t)
    if not np.isfinite(val):
        return None
    for _ in range(MAX_NEWTON_ITER):
        inv = 1.0 / ell
        g = BU.T @ inv
        scale = float(np.sum(np.abs(BU) * inv[:, None])) or 1.0
        res = float(np.linalg.norm(g)) / scale
        if res <= RESIDUAL_TOL:
            return p0 + U @ t, res
        Hm = (BU * (inv**2)[:, None]).T @ BU
        step = np.linalg.solve(Hm, g)
        slope = float(g @ step)
        lam = 1.0
        while lam > 1e-14:
            nv, nell = phi(t + lam * step)
            if nv >= val + 1e-4 * lam * slope:
                break
            lam *= 0.5
        else:
            return None
        t = t + lam * step
        val, ell = nv, nell
    return None


def critical_points(s: MorseSetup) -> list:
    """Vertices of ``X`` in the interior of ``P`` plus one restricted maximiser per face, when interior."""
    XP = s.XP
    verts = XP.vertex_sets()
    out = []
    for c in XP.cells:
        if c.label.cut:
            continue
        if c.dim == 0:
            x = tuple(float(v) for v in c.point)
            out.append(CriticalPoint(x, s.value(x), c.id, 0, VERTEX))
            continue
        U = _orthonormal(c.basis)
        p0 = np.array([float(v) for v in c.point])
        seeds = [p0] + [0.5 * (p0 + np.array([float(v) for v in XP.cells[v].point])) for v in sorted(verts[c.id])[:2]]
        found = None
        for seed in seeds:
            found = _newton_on_face(s, p0, U, seed)
            if found is not None:
                break
        if found is None:
            raise NewtonDivergence(f"no convergence on face {c.id}")
        x, res = found
        # inside the open face? (cut forms are positive in int P by construction)
        slack = []
        for h in c.geometry.inequalities:
            bf = np.array([float(v) for v in h.b])
            val = float(bf @ x + float(h.a))
            tol = 1e-9 * (float(np.abs(bf) @ np.abs(x)) + abs(float(h.a)) + 1.0)
            slack.append((val, tol))
        if all(v > t for v, t in slack):
            xt = tuple(float(v) for v in x)
            out.append(CriticalPoint(xt, s.value(xt), c.id, c.dim, FACE_INTERIOR, res))
        elif any(abs(v) <= t for v, t in slack) and all(v > -t for v, t in slack):
            raise BoundaryCriticalPoint(f"restricted maximiser on the boundary of face {c.id}")
    out.sort(key=lambda p: (p.host_dim, p.host_cell))
    return out


def distinct_critical_values(pts, rel_gap: float = 1e-6) -> bool:
    vals = sorted(p.value if isinstance(p, CriticalPoint) else float(p) for p in pts)
    if len(vals) < 2:
        return True
    top = max(abs(v) for v in vals)
    return all(b - a > rel_gap * top for a, b in zip(vals, vals[1:]))


# ---------------------------------------------------------------- links


def _rationalize(vec, den: int = 10**12) -> tuple:
    v = np.asarray(vec, dtype=float)
    m = float(np.max(np.abs(v)))
    if m == 0.0 or not np.isfinite(m):
        raise DegenerateGradient("gradient vanishes")
    return tuple(Fraction(float(x / m)).limit_denominator(den) for x in v)


def link_complex(s: MorseSetup, cp: CriticalPoint) -> LinkComplex:
    """Slice of the tangent fan at ``cp`` by the shifted level hyperplane.

    At a face-interior point the fan is first restricted to the normal
    space of the host face.  The slice is returned as a complete
    intersection of ``n`` PL functions in dimension ``d - k - 1``.
    """
    d = s.X.ambient_dim
    n = len(s.X.functions)
    cell = s.XP.cells[cp.host_cell]
    k = cell.dim
    expected = d - k - n - 2
    m = d - k
    lg = s.log_gradient(cp.location)
    if float(np.linalg.norm(lg)) * max(1.0, float(np.max(np.abs(cp.location)))) < 1e-9 * len(s.hyperplanes):
        raise DegenerateGradient("gradient of the distance product vanishes at the critical point")
    g = _rationalize(s.gradient(cp.location))
    if cp.kind == VERTEX:
        W = [tuple(Fraction(int(i == j)) for j in range(d)) for i in range(d)]
    else:
        W = [f.b for f in cell.geometry.equalities]
    # y = sum_i u_i W_i ; functional on u-space
    gN = tuple(dot(w, g) for w in W)
    gnorm = max(abs(v) for v in gN)
    if gnorm == 0 or float(gnorm) < 1e-9 * float(max(abs(v) for v in g)) * (0 if cp.kind == VERTEX else 1):
        raise DegenerateGradient("gradient has no component normal to the host face")
    local = []
    for f, S in zip(s.X.functions, cell.label.argmax):
        pieces = [(tuple(dot(w, f.forms[i].b) for w in W), 0) for i in sorted(S)]
        local.append(ConvexPLFunction.from_coefficients(pieces))
    construction = {"kind": cp.kind, "normal_dim": m, "slice_dim": m - 1}
    if m - 1 < n:
        return LinkComplex(None, expected, m - 1, None, g, construction)
    fan = complete_intersection(local)
    rays = [c.point for c in fan.cells if c.dim == 1]
    pairings = []
    for v in rays:
        vmax = max(abs(x) for x in v)
        pairings.append(dot(gN, v) / vmax)
    if any(p == 0 for p in pairings):
        raise DegenerateGradient("a fan ray lies in the level hyperplane")
    positive = [abs(p) for p in pairings]
    delta = min(positive) / 2 if positive else Fraction(1)
    V = kernel_basis([gN], m)
    gg = dot(gN, gN)
    u0 = tuple(-delta * x / gg for x in gN)
    sliced = []
    for F in local:
        pieces = []
        for form in F.forms:
            pieces.append((tuple(dot(v, form.b) for v in V), dot(form.b, u0)))
        sliced.append(ConvexPLFunction.from_coefficients(pieces))
    A = complete_intersection(sliced)
    construction.update({"fan_rays": len(rays), "delta": str(delta)})
    return LinkComplex(A, expected, m - 1, delta, g, construction)


def link_level(L: LinkComplex):
    if L.complex is None or not L.complex.cells:
        return EMPTY_LEVEL
    T = truncate_to_box(L.complex)
    h = cellular_homology(T)
    return connectivity_level(h, nonempty=True)


def verify_links(s: MorseSetup, pts=None) -> dict:
    """Check every link against its expected homological connectivity."""
    if pts is None:
        pts = critical_points(s)
    links = []
    for cp in pts:
        L = link_complex(s, cp)
        if L.expected_connectivity <= -2:
            observed = link_level(L) if L.complex is not None else EMPTY_LEVEL
            ok = True
        else:
            observed = link_level(L)
            ok = observed >= L.expected_connectivity
        links.append({
            "cell": cp.host_cell,
            "kind": cp.kind,
            "host_dim": cp.host_dim,
            "expected": L.expected_connectivity,
            "observed": level_json(observed),
            "pass": bool(ok),
            "construction": L.construction,
        })
    return {"links": links, "overall": all(x["pass"] for x in links)}


def morse_report(s: MorseSetup, rel_gap: float = 1e-6) -> dict:
    pts = critical_points(s)
    distinct = distinct_critical_values(pts, rel_gap)
    links = verify_links(s, pts)
    return {
        "critical_points": [p.as_json() for p in pts],
        "distinct_values": distinct,
        "links": links["links"],
        "overall": bool(distinct and links["overall"]),
    }
