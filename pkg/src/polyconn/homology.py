"""Integral cellular homology and connectivity surrogates."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from . import kernels
from .complex import ChainComplex, PolyComplex, boundary_matrices

INFINITE = math.inf
EMPTY_LEVEL = -2


class NotSubcomplex(ValueError):
    pass


class PreconditionFailed(ValueError):
    pass


@dataclass(frozen=True)
class HomologyResult:
    betti: tuple
    torsion: tuple

    def is_zero(self, k: int) -> bool:
        b = self.betti[k] if k < len(self.betti) else 0
        t = self.torsion[k] if k < len(self.torsion) else ()
        return b == 0 and not t

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, b in enumerate(self.betti))

    def as_json(self) -> dict:
        return {"betti": list(self.betti), "torsion": [list(t) for t in self.torsion]}


def _invariants(cc: ChainComplex, k: int) -> list:
    bd = cc.boundaries.get(k)
    if not bd:
        return []
    return kernels.smith_invariants(dict(bd), cc.size(k - 1), cc.size(k))


def homology_groups(cc: ChainComplex) -> HomologyResult:
    top = cc.top_dim
    if top < 0:
        return HomologyResult((), ())
    inv = {k: _invariants(cc, k) for k in range(1, top + 2)}
    betti, torsion = [], []
    for k in range(top + 1):
        rk = len(inv.get(k, ())) if k >= 1 else 0
        rk_up = len(inv.get(k + 1, ()))
        betti.append(cc.size(k) - rk - rk_up)
        torsion.append(tuple(v for v in inv.get(k + 1, ()) if v > 1))
    return HomologyResult(tuple(betti), tuple(torsion))


def cellular_homology(C: PolyComplex) -> HomologyResult:
    return homology_groups(boundary_matrices(C))


def relative_homology(C: PolyComplex, A) -> HomologyResult:
    """Homology of the quotient chain complex ``C / A``."""
    A = set(A)
    if not C.is_face_closed(A):
        raise NotSubcomplex("selected cells are not closed under taking faces")
    return homology_groups(boundary_matrices(C, exclude=A))


def connectivity_level(h: HomologyResult, nonempty: bool, reduced: bool = True):
    """Largest ``k`` with (reduced) ``H_i = 0`` for all ``i <= k``.

    ``-2`` marks the empty space, ``-1`` a nonempty one with nontrivial
    reduced ``H_0``; :data:`INFINITE` means all (reduced) homology vanishes.
    """
    if not nonempty:
        return EMPTY_LEVEL
    for k in range(len(h.betti)):
        b = h.betti[k] - (1 if (reduced and k == 0) else 0)
        if b != 0 or h.torsion[k]:
            return k - 1
    return INFINITE


def level_json(level):
    return "inf" if level == INFINITE else int(level)


def complex_level(C: PolyComplex) -> tuple:
    h = cellular_homology(C)
    return h, connectivity_level(h, nonempty=len(C.cells) > 0)


# ---------------------------------------------------------------- fundamental group heuristic


def _edge_endpoints(C: PolyComplex, eid: int) -> tuple:
    ends = sorted(C.facets_of(eid))
    if len(ends) != 2:
        raise PreconditionFailed(f"1-cell {eid} does not have two endpoints")
    return ends[0], ends[1]


def _boundary_word(C: PolyComplex, face: int, gen_of: dict) -> list:
    edges = list(C.facets_of(face))
    ends = {e: _edge_endpoints(C, e) for e in edges}
    start = edges[0]
    a, b = ends[start]
    word = []
    if start in gen_of:
        word.append(gen_of[start])
    used = {start}
    cur = b
    while len(used) < len(edges):
        nxt = next((e for e in edges if e not in used and cur in ends[e]), None)
        if nxt is None:
            raise PreconditionFailed(f"2-cell {face} boundary is not a single cycle")
        u, w = ends[nxt]
        forward = u == cur
        if nxt in gen_of:
            g = gen_of[nxt]
            word.append(g if forward else -g)
        cur = w if forward else u
        used.add(nxt)
    if cur != a:
        raise PreconditionFailed(f"2-cell {face} boundary does not close up")
    return word


def _free_reduce(word: list) -> list:
    out = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    while len(out) >= 2 and out[0] == -out[-1]:
        out = out[1:-1]
    return out


def _substitute(word: list, gen: int, replacement: list) -> list:
    out = []
    inv = [-g for g in reversed(replacement)]
    for g in word:
        if g == gen:
            out += replacement
        elif g == -gen:
            out += inv
        else:
            out.append(g)
    return _free_reduce(out)


def pi1_trivial_heuristic(C: PolyComplex, max_steps: int = 10_000, h1=None) -> str:
    """``"Trivial"`` if a greedy Tietze pass kills the edge-path group, else ``"Inconclusive"``."""
    if h1 is None:
        h = cellular_homology(C)
    else:
        h = h1
    if not C.cells or h.betti[0] != 1:
        raise PreconditionFailed("complex must be nonempty and connected")
    if len(h.betti) > 1 and not h.is_zero(1):
        raise PreconditionFailed("H_1 is nonzero")
    verts = [c.id for c in C.cells if c.dim == 0]
    edges = [c.id for c in C.cells if c.dim == 1]
    adj = {v: [] for v in verts}
    for e in edges:
        a, b = _edge_endpoints(C, e)
        adj[a].append((e, b))
        adj[b].append((e, a))
    root = min(verts)
    seen = {root}
    tree = set()
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for e, w in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    gen_of = {}
    for e in edges:
        if e not in tree:
            gen_of[e] = len(gen_of) + 1
    rels = [_free_reduce(_boundary_word(C, c.id, gen_of)) for c in C.cells if c.dim == 2]
    gens = set(gen_of.values())
    steps = 0
    while gens and steps < max_steps:
        rels = [r for r in rels if r]
        short = next((r for r in sorted(rels, key=len) if len(r) <= 2 and len({abs(g) for g in r}) == len(r)), None)
        if short is None:
            # length-lexicographic pass: a generator occurring once in some relation
            # can be solved for and eliminated
            pick = None
            for r in sorted(rels, key=lambda r: (len(r), r)):
                counts = {}
                for g in r:
                    counts[abs(g)] = counts.get(abs(g), 0) + 1
                once = sorted(g for g, k in counts.items() if k == 1)
                if once:
                    pick = (r, once[0])
                    break
            if pick is None:
                break
            r, g = pick
        else:
            r, g = short, abs(short[0])
        i = next(k for k, x in enumerate(r) if abs(x) == g)
        # r = u g^e v = 1  =>  g^e = u^-1 v^-1, rotate so g is first: g^e w = 1 => g^e = w^-1
        rot = r[i:] + r[:i]
        e = rot[0]
        w = rot[1:]
        value = [-x for x in reversed(w)]
        if e < 0:
            value = [-x for x in reversed(value)]
        rels = [_substitute(x, g, value) for x in rels if x is not r]
        gens.discard(g)
        steps += 1
    rels = [r for r in rels if r]
    return "Trivial" if not gens else "Inconclusive"
