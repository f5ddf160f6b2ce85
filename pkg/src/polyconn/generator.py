"""Seeded random instances and per-instance genericity certificates."""
from __future__ import annotations

import itertools
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .complex import PolyComplex, complete_intersection, label_geometry, truncate_to_polyhedron, CellLabel
from .plfun import ConvexPLFunction
from .polyhedra import AffineForm, Polyhedron, strictly_feasible_point

MAX_REDRAWS = 100


class RejectionLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class InstanceSpec:
    d: int
    n: int
    r: int
    seed: int = 0
    coeff_bound: int = 100
    denominator: int = 2**20

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("need d >= 2")
        if not 1 <= self.n < self.d:
            raise ValueError("need 1 <= n < d")
        if self.r < 2:
            raise ValueError("need r >= 2 affine pieces per hypersurface")

    def as_json(self) -> dict:
        return asdict(self)


@dataclass
class GenericityReport:
    transversal: bool = True
    no_parallel_faces: bool = True
    dimension_formula_ok: bool = True
    details: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.transversal and self.no_parallel_faces and self.dimension_formula_ok

    def as_json(self) -> dict:
        return {
            "transversal": self.transversal,
            "no_parallel_faces": self.no_parallel_faces,
            "dimension_formula_ok": self.dimension_formula_ok,
            "ok": self.ok,
            "details": [str(x) for x in self.details],
        }


def rng_for(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based Philox stream keyed by ``seed``; ``stream`` splits it."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(stream))
    return np.random.Generator(np.random.Philox(ss))


def draw_functions(spec: InstanceSpec, attempt: int = 0) -> list:
    rng = rng_for(spec.seed, 0, attempt)
    bound = spec.coeff_bound * spec.denominator
    raw = rng.integers(-bound, bound + 1, size=(spec.n, spec.r, spec.d + 1))
    fs = []
    for k in range(spec.n):
        pieces = []
        for i in range(spec.r):
            coeffs = [Fraction(int(v), spec.denominator) for v in raw[k, i]]
            pieces.append((coeffs[:-1], coeffs[-1]))
        fs.append(ConvexPLFunction.from_coefficients(pieces))
    return fs


def parallel(u, v) -> bool:
    """Exact test that two vectors span at most a line (all 2x2 minors vanish)."""
    for i, j in itertools.combinations(range(len(u)), 2):
        if u[i] * v[j] != u[j] * v[i]:
            return False
    return True


def facet_normals(f: ConvexPLFunction) -> list:
    """``(i, j, b_i - b_j)`` for every pair of pieces meeting along a facet of the bend locus."""
    out = []
    for i, j in itertools.combinations(range(f.r), 2):
        geom = label_geometry([f], CellLabel((frozenset((i, j)),)))
        if strictly_feasible_point(geom) is not None:
            out.append((i, j, tuple(a - b for a, b in zip(f.forms[i].b, f.forms[j].b))))
    return out


def _classify(report: GenericityReport, violations, where: str):
    for v in violations:
        kind = v[0]
        if kind == "dimension":
            report.dimension_formula_ok = False
        else:
            report.transversal = False
        report.details.append((where,) + tuple(v))


def check_genericity(fs, P: Optional[Polyhedron] = None, X: Optional[PolyComplex] = None) -> GenericityReport:
    """Certify transversality, absence of parallel faces and the dimension formula."""
    report = GenericityReport()
    normals = [facet_normals(f) for f in fs]
    for (k1, n1), (k2, n2) in itertools.combinations(enumerate(normals), 2):
        for i, j, u in n1:
            for p, q, v in n2:
                if parallel(u, v):
                    report.no_parallel_faces = False
                    report.details.append(("parallel", (k1, i, j), (k2, p, q)))
    if P is not None:
        for t, h in enumerate(P.inequalities):
            for k, nk in enumerate(normals):
                for i, j, u in nk:
                    if parallel(u, h.b):
                        report.no_parallel_faces = False
                        report.details.append(("parallel-to-P", (k, i, j), t))
    if X is None:
        X = complete_intersection(fs)
    _classify(report, X.violations, "X")
    if P is not None:
        XP = truncate_to_polyhedron(X, P)
        _classify(report, [v for v in XP.violations if v not in X.violations], "X∩P")
    return report


def generic_instance(spec: InstanceSpec):
    """``(functions, X, report, attempts)`` for the first draw that passes every check."""
    for attempt in range(MAX_REDRAWS):
        fs = draw_functions(spec, attempt)
        X = complete_intersection(fs)
        report = check_genericity(fs, X=X)
        if report.ok:
            return fs, X, report, attempt
    raise RejectionLimitExceeded(f"no generic draw for {spec} after {MAX_REDRAWS} attempts")


def random_instance(spec: InstanceSpec) -> list:
    return generic_instance(spec)[0]


def random_simplex(d: int, center, radius: Fraction, seed: int, attempt: int = 0) -> Polyhedron:
    """A random full-dimensional simplex containing the ball of ``radius`` around ``center``.

    Normals are jittered copies of ``e_1, ..., e_d, -(1, ..., 1)``; offsets use
    the 1-norm so the inscribed ball is certified exactly.
    """
    rng = rng_for(seed, 1, attempt)
    den = 1 << 12
    normals = []
    for t in range(d + 1):
        base = [0] * d
        if t < d:
            base[t] = 1
        else:
            base = [-1] * d
        jitter = rng.integers(-den // 4, den // 4 + 1, size=d)
        normals.append([Fraction(b) + Fraction(int(j), den) for b, j in zip(base, jitter)])
    forms = []
    for u in normals:
        stretch = 1 + Fraction(int(rng.integers(0, den)), den)
        norm1 = sum(abs(x) for x in u)
        offset = radius * norm1 * stretch
        # h(x) = offset - <u, x - center> >= 0
        b = tuple(-x for x in u)
        a = offset + sum(x * c for x, c in zip(u, center))
        forms.append(AffineForm(b, a))
    return Polyhedron(d, (), tuple(forms))
