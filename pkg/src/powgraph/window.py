"""Finite-window experiments on infinite-order components.

Membership is always decided by the model's exact arithmetic; only the vertex
sets are cut down to the window. Statements about infinite sets become counts
over a guarded zone, and anything the window cannot settle is reported as
undecided rather than guessed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import IdentityArgument, NotAlmostConnected, ThresholdUndecided, WindowTooSmall
from .graphs import DiGraph, UGraph, zpm_directed_power_graph
from .groups import ALEPH0, GroupModel

DEFAULT_TAU = 3
DEFAULT_GUARD = 5


@lru_cache(maxsize=16)
def window_digraph(g: GroupModel) -> DiGraph:
    """Directed Z±-power graph of the window, memoised per model."""
    return zpm_directed_power_graph(g)


def _vertex(g: GroupModel, x) -> int:
    i = g.index(x)
    if i == 0:
        raise IdentityArgument("the identity has no I/O/M sets")
    return i


def _mask_of(n, idx) -> np.ndarray:
    m = np.zeros(n, dtype=bool)
    m[list(idx)] = True
    return m


# --------------------------------------------------------------------------
# I, O, M
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IOMSets:
    """Predecessors, successors and their union for one vertex, excluding its inverse."""

    x: int
    I: frozenset
    O: frozenset

    @property
    def M(self) -> frozenset:
        return self.I | self.O

    def labelled(self, g: GroupModel) -> dict:
        lab = lambda s: sorted((g.label(g.elements[i]) for i in s), key=lambda t: (len(t), t))
        return {"x": g.label(g.elements[self.x]), "I": lab(self.I), "O": lab(self.O)}


def _iom_masks(g: GroupModel, i: int) -> tuple[np.ndarray, np.ndarray]:
    arcs = window_digraph(g).arcs
    inv = g.index(g.inverse(g.elements[i]))
    keep = np.ones(len(g), dtype=bool)
    keep[[i, inv]] = False
    return arcs[:, i] & keep, arcs[i] & keep


def iom_sets(g: GroupModel, x) -> IOMSets:
    i = _vertex(g, x)
    im, om = _iom_masks(g, i)
    return IOMSets(i, frozenset(np.flatnonzero(im).tolist()), frozenset(np.flatnonzero(om).tolist()))


def _complement_on(g: GroupModel, idx) -> UGraph:
    """Complement of the induced window graph; vertex order follows ``idx``."""
    idx = list(idx)
    und = window_digraph(g).underlying()
    return und.induced(idx).complement()


def complement_graphs(g: GroupModel, x) -> tuple[UGraph, UGraph]:
    """Complements of the window power graph induced on O(x) and on M(x)."""
    s = iom_sets(g, x)
    return _complement_on(g, sorted(s.O)), _complement_on(g, sorted(s.M))


# --------------------------------------------------------------------------
# Connected-component checks
# --------------------------------------------------------------------------


def _components(adj: np.ndarray) -> np.ndarray:
    if adj.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return connected_components(csr_matrix(adj), directed=False)[1]


def lemma4_check(g: GroupModel, x, guard: int = DEFAULT_GUARD) -> bool:
    """Within the guarded zone, O(x) is a whole connected component of the complement on M(x).

    The guarded zone keeps the powers ``x**n`` with ``2 <= |n| <= guard`` that
    lie in the window, plus the predecessors of x in the window.
    """
    i = _vertex(g, x)
    xe = g.elements[i]
    if g.order(xe) is not ALEPH0:
        raise ValueError("lemma4_check needs an element of infinite order")
    powers = {g.power(xe, n) for k in range(2, guard + 1) for n in (k, -k)}
    o_idx = sorted(g.index(y) for y in powers if g.in_window(y) and y in g)
    im, _ = _iom_masks(g, i)
    i_idx = np.flatnonzero(im).tolist()
    if len(o_idx) + len(i_idx) < 5:
        raise WindowTooSmall(f"guarded zone of {g.label(xe)} has {len(o_idx) + len(i_idx)} vertices")
    verts = o_idx + i_idx
    comp = _complement_on(g, verts).adj
    k = len(o_idx)
    if comp[:k, k:].any():
        return False
    if k == 0:
        return True
    labels = _components(comp[:k, :k])
    return bool((labels == labels[0]).all())


@dataclass(frozen=True)
class AlmostConnectedReport:
    isolated: frozenset
    bulk: frozenset
    verdict: bool
    guard: bool = True

    def __bool__(self):
        return self.verdict


def almost_connected(graph: UGraph) -> AlmostConnectedReport:
    """One nonempty connected piece plus exactly two isolated vertices."""
    deg = graph.adj.sum(axis=1)
    iso = np.flatnonzero(deg == 0)
    rest = np.flatnonzero(deg > 0)
    verdict = len(iso) == 2 and len(rest) > 0 and graph.induced(rest.tolist()).is_connected()
    return AlmostConnectedReport(frozenset(iso.tolist()), frozenset(rest.tolist()), verdict)


def intersection_complement(g: GroupModel, x, y) -> tuple[UGraph, list[int]]:
    """Complement of the window power graph on M(x) & M(y), with the vertex list it lives on."""
    sx, sy = iom_sets(g, x), iom_sets(g, y)
    idx = sorted(sx.M & sy.M)
    return _complement_on(g, idx), idx


def o_intersection_complement(g: GroupModel, x, y) -> tuple[UGraph, list[int]]:
    sx, sy = iom_sets(g, x), iom_sets(g, y)
    idx = sorted(sx.O & sy.O)
    return _complement_on(g, idx), idx


# --------------------------------------------------------------------------
# Direction recovery
# --------------------------------------------------------------------------


def guarded_mask(g: GroupModel, guard: int = DEFAULT_GUARD) -> np.ndarray:
    """Vertices whose ``guard``-th power is still inside the window."""
    return np.array([g.in_window(g.power(v, guard)) for v in g.elements])


@dataclass
class RecoveryReport:
    digraph: DiGraph
    guarded_edges: list[tuple[int, int]]
    undecided: list[tuple[int, int, int]] = field(default_factory=list)
    bulk: frozenset = frozenset()

    def disagreements(self, oracle: DiGraph) -> list[tuple[int, int]]:
        """Guarded ordered pairs where the recovered arc set differs from ``oracle``."""
        bad = []
        for u, v in self.guarded_edges:
            for a, b in ((u, v), (v, u)):
                if self.digraph.arcs[a, b] != oracle.arcs[a, b]:
                    bad.append((a, b))
        return bad


def recover_directions(g: GroupModel, x, y, tau: int = DEFAULT_TAU, guard: int = DEFAULT_GUARD) -> RecoveryReport:
    """Orient the window power graph using only undirected data around two non-adjacent witnesses.

    An edge {u, v} with v not the inverse of u gets u -> v when the component
    of v in the complement on M(u) meets the bulk of M(x) & M(y) in at least
    ``tau`` vertices. Counts strictly between 0 and ``tau`` are undecided;
    on guarded edges that raises ThresholdUndecided.
    """
    und = window_digraph(g).underlying()
    ix, iy = _vertex(g, x), _vertex(g, y)
    if und.adj[ix, iy]:
        raise ValueError("witnesses must be non-adjacent")
    comp, idx = intersection_complement(g, x, y)
    rep = almost_connected(comp)
    if not rep.verdict:
        raise NotAlmostConnected(f"complement on M({g.label(g.elements[ix])}) & M({g.label(g.elements[iy])}) is not almost connected")
    bulk = _mask_of(len(g), [idx[k] for k in rep.bulk])

    n = len(g)
    arcs = np.zeros((n, n), dtype=bool)
    guarded = guarded_mask(g, guard)
    guarded[0] = False
    inv = np.array([g.index(g.inverse(v)) for v in g.elements])
    undecided, gedges = [], []
    counts = np.zeros((n, n), dtype=np.int64)
    for u in range(1, n):
        im, om = _iom_masks(g, u)
        m_idx = np.flatnonzero(im | om)
        sub = und.adj[np.ix_(m_idx, m_idx)]
        labels = _components(~sub & ~np.eye(len(m_idx), dtype=bool))
        hits = np.bincount(labels, weights=bulk[m_idx].astype(float), minlength=labels.max(initial=-1) + 1)
        counts[u, m_idx] = hits[labels].astype(np.int64)
    for u, v in und.edges():
        if u == 0 or v == 0:
            continue
        if inv[u] == v:
            arcs[u, v] = arcs[v, u] = True
            continue
        is_guarded = bool(guarded[u] and guarded[v])
        if is_guarded:
            gedges.append((u, v))
        for a, b in ((u, v), (v, u)):
            c = int(counts[a, b])
            if c >= tau:
                arcs[a, b] = True
            elif c > 0:
                undecided.append((a, b, c))
                if is_guarded:
                    raise ThresholdUndecided(
                        f"edge {g.label(g.elements[a])} -> {g.label(g.elements[b])} has count {c} < tau={tau}",
                        edges=[(a, b, c)],
                    )
    return RecoveryReport(DiGraph(arcs, und.labels), gedges, undecided, frozenset(np.flatnonzero(bulk).tolist()))


# --------------------------------------------------------------------------
# Locally cyclic branch
# --------------------------------------------------------------------------


@dataclass
class LocallyCyclicReport:
    verdict: bool
    pairs_checked: int
    no_common_root: list[tuple[int, int]] = field(default_factory=list)
    trivial_intersection: list[tuple[int, int]] = field(default_factory=list)

    def __bool__(self):
        return self.verdict


def locally_cyclic_check(g: GroupModel, max_pairs: int | None = None) -> LocallyCyclicReport:
    """Every non-adjacent pair has a common root in the window and meets nontrivially.

    Non-identity vertices only. Pairs are scanned in index order; ``max_pairs``
    truncates the scan.
    """
    a = window_digraph(g).arcs.astype(np.float64)
    a[:, 0] = a[0, :] = 0
    common = (a.T @ a) > 0
    und = window_digraph(g).underlying().adj
    n = len(g)
    iu, ju = np.triu_indices(n, k=1)
    keep = (iu > 0) & ~und[iu, ju]
    pairs = list(zip(iu[keep].tolist(), ju[keep].tolist()))
    if max_pairs is not None:
        pairs = pairs[:max_pairs]
    no_root = [(i, j) for i, j in pairs if not common[i, j]]
    trivial = []
    if hasattr(g, "intersection_generator"):
        e = g.identity
        els = g.elements
        trivial = [(i, j) for i, j in pairs if g.intersection_generator(els[i], els[j]) == e]
    return LocallyCyclicReport(not no_root and not trivial, len(pairs), no_root, trivial)
