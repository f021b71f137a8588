"""Digraph isomorphism by colour refinement plus individualization.

Undirected graphs are handled as symmetric digraphs. The search keeps the two
colourings in a shared colour space, so a histogram mismatch at any node of
the search tree refutes that branch. Cells made entirely of twin vertices are
matched in index order without branching.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import SizeLimit
from .graphs import DiGraph, UGraph, equiv_classes, hat_sizes

MAX_VERTICES = 512


@dataclass
class IsoResult:
    isomorphic: bool
    mapping: list[int] | None = None
    invariant: str | None = None
    detail: str = ""
    nodes: int = 0

    def __bool__(self):
        return self.isomorphic


def _matrix(g) -> np.ndarray:
    return g.arcs if isinstance(g, DiGraph) else g.adj


def _underlying(g) -> UGraph:
    return g.underlying() if isinstance(g, DiGraph) else g


def vertex_invariants(g) -> dict[str, np.ndarray]:
    """Isomorphism-invariant per-vertex statistics used for pruning."""
    a = _matrix(g)
    u = _underlying(g)
    eq = equiv_classes(u)
    eq_size = np.empty(g.n, dtype=np.int64)
    for b in eq.blocks:
        eq_size[list(b)] = len(b)
    return {
        "out-degree": a.sum(axis=1).astype(np.int64),
        "in-degree": a.sum(axis=0).astype(np.int64),
        "equiv-class size": eq_size,
        "hat size": hat_sizes(u).astype(np.int64),
    }


def _multiset(v) -> list:
    return sorted(Counter(map(tuple, v) if np.ndim(v) > 1 else v.tolist()).items())


def _compress(keys1: np.ndarray, keys2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    both = np.vstack([keys1, keys2])
    _, inv = np.unique(both, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    return inv[: len(keys1)], inv[len(keys1):]


def _refine(a1, a2, c1, c2):
    """Iterate colour refinement to the coarsest stable partition."""
    ncol = int(max(c1.max(initial=-1), c2.max(initial=-1))) + 1
    while True:
        h1 = np.zeros((len(c1), ncol))
        h1[np.arange(len(c1)), c1] = 1.0
        h2 = np.zeros((len(c2), ncol))
        h2[np.arange(len(c2)), c2] = 1.0
        # float products go through BLAS; counts stay exact far below 2**53
        k1 = np.hstack([c1[:, None], a1 @ h1, a1.T @ h1]).astype(np.int64)
        k2 = np.hstack([c2[:, None], a2 @ h2, a2.T @ h2]).astype(np.int64)
        n1, n2 = _compress(k1, k2)
        new = int(max(n1.max(initial=-1), n2.max(initial=-1))) + 1
        if new == ncol:
            return n1, n2
        c1, c2, ncol = n1, n2, new


def _twin_cell(a: np.ndarray, cell: np.ndarray) -> bool:
    """True if every permutation of ``cell`` is an automorphism of ``a``."""
    if len(cell) < 2:
        return True
    rows = a[cell]
    cols = a[:, cell].T
    outside = np.ones(a.shape[0], dtype=bool)
    outside[cell] = False
    if not (rows[:, outside] == rows[0, outside]).all():
        return False
    if not (cols[:, outside] == cols[0, outside]).all():
        return False
    inner = a[np.ix_(cell, cell)]
    off = ~np.eye(len(cell), dtype=bool)
    return bool(inner[off].all() or not inner[off].any())


class _Search:
    def __init__(self, a1, a2):
        self.a1 = a1.astype(np.float64)
        self.a2 = a2.astype(np.float64)
        self.b1 = a1
        self.b2 = a2
        self.nodes = 0

    def check(self, mapping) -> bool:
        m = np.asarray(mapping)
        return bool(np.array_equal(self.b2[np.ix_(m, m)], self.b1))

    def run(self, c1, c2):
        self.nodes += 1
        c1, c2 = _refine(self.a1, self.a2, c1, c2)
        h1 = np.bincount(c1, minlength=max(c1.max(), c2.max()) + 1)
        h2 = np.bincount(c2, minlength=len(h1))
        if not np.array_equal(h1, h2):
            return None
        cells = [(np.flatnonzero(c1 == k), np.flatnonzero(c2 == k)) for k in np.flatnonzero(h1)]
        branch = None
        for x, y in cells:
            if len(x) > 1 and not (_twin_cell(self.b1, x) and _twin_cell(self.b2, y)):
                if branch is None or len(x) < len(branch[0]):
                    branch = (x, y)
        if branch is None:
            mapping = np.empty(len(c1), dtype=np.int64)
            for x, y in cells:
                mapping[x] = y
            if self.check(mapping):
                return mapping.tolist()
            # twin matching can only fail on non-equitable leftovers; fall back to branching
            branch = next(((x, y) for x, y in cells if len(x) > 1), None)
            if branch is None:
                return None
        x, y = branch
        v = x[0]
        fresh = max(c1.max(), c2.max()) + 1
        for w in y:
            d1, d2 = c1.copy(), c2.copy()
            d1[v] = fresh
            d2[w] = fresh
            found = self.run(d1, d2)
            if found is not None:
                return found
        return None


def find_isomorphism(g1, g2) -> IsoResult:
    """Search for a bijection ``m`` with ``g1`` arc ``(i, j)`` iff ``g2`` arc ``(m[i], m[j])``."""
    if type(g1) is not type(g2):
        raise TypeError("cannot compare a graph with a digraph")
    n = g1.n
    if max(n, g2.n) > MAX_VERTICES:
        raise SizeLimit(f"isomorphism search is capped at {MAX_VERTICES} vertices")
    if n != g2.n:
        return IsoResult(False, invariant="order", detail=f"{n} vs {g2.n} vertices")
    a1, a2 = _matrix(g1), _matrix(g2)
    if int(a1.sum()) != int(a2.sum()):
        return IsoResult(False, invariant="arc count", detail=f"{int(a1.sum())} vs {int(a2.sum())}")
    if n == 0:
        return IsoResult(True, mapping=[])

    inv1, inv2 = vertex_invariants(g1), vertex_invariants(g2)
    degs1 = np.stack([inv1["in-degree"], inv1["out-degree"]], axis=1)
    degs2 = np.stack([inv2["in-degree"], inv2["out-degree"]], axis=1)
    if _multiset(degs1) != _multiset(degs2):
        return IsoResult(False, invariant="degree pairs")
    for key in ("equiv-class size", "hat size"):
        if _multiset(inv1[key]) != _multiset(inv2[key]):
            return IsoResult(False, invariant=key)

    # ascending equiv-class size, then hat size
    keys1 = np.stack([inv1["equiv-class size"], inv1["hat size"], inv1["in-degree"], inv1["out-degree"]], axis=1)
    keys2 = np.stack([inv2["equiv-class size"], inv2["hat size"], inv2["in-degree"], inv2["out-degree"]], axis=1)
    c1, c2 = _compress(keys1, keys2)
    search = _Search(a1, a2)
    mapping = search.run(c1, c2)
    if mapping is None:
        return IsoResult(False, invariant="search", detail="exhaustive search found no bijection", nodes=search.nodes)
    return IsoResult(True, mapping=mapping, nodes=search.nodes)


def replay(g1, g2, mapping) -> bool:
    """Check that ``mapping`` carries g1 exactly onto g2."""
    m = np.asarray(mapping, dtype=np.int64)
    if sorted(m.tolist()) != list(range(g2.n)) or len(m) != g1.n:
        return False
    return bool(np.array_equal(_matrix(g2)[np.ix_(m, m)], _matrix(g1)))


def digraph_isomorphic(d1: DiGraph, d2: DiGraph) -> IsoResult:
    return find_isomorphism(d1, d2)
