"""Power graphs, Z±-power graphs and the neighbourhood machinery on top of them.

Graphs store a dense boolean adjacency matrix over vertex indices ``0..n-1``
plus a tuple of display labels. Analysis code only ever looks at the matrix.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import EmptySet, InvalidSpec
from .groups import ALEPH0, FiniteGroup, GroupModel


def _as_bool_matrix(a) -> np.ndarray:
    a = np.array(a, dtype=bool)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("adjacency must be a square matrix")
    a.setflags(write=False)
    return a


class _Graph:
    matrix: np.ndarray
    labels: tuple

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return (
            type(self) is type(other)
            and self.labels == other.labels
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self):
        return hash((type(self).__name__, self.labels, self.matrix.tobytes()))


@dataclass(frozen=True, eq=False)
class UGraph(_Graph):
    """Simple undirected graph."""

    adj: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        adj = _as_bool_matrix(self.adj)
        if adj.diagonal().any():
            raise ValueError("simple graphs have no loops")
        if not np.array_equal(adj, adj.T):
            raise ValueError("adjacency must be symmetric")
        object.__setattr__(self, "adj", adj)
        labels = tuple(self.labels) if self.labels else tuple(str(i) for i in range(adj.shape[0]))
        if len(labels) != adj.shape[0]:
            raise ValueError("one label per vertex required")
        object.__setattr__(self, "labels", labels)

    @property
    def matrix(self):
        return self.adj

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels=()) -> "UGraph":
        a = np.zeros((n, n), dtype=bool)
        for i, j in edges:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            a[i, j] = a[j, i] = True
        return cls(a, tuple(labels))

    @cached_property
    def closed(self) -> np.ndarray:
        """Row ``x`` is the indicator of the closed neighbourhood of ``x``."""
        c = self.adj | np.eye(self.n, dtype=bool)
        c.setflags(write=False)
        return c

    def edges(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(np.triu(self.adj, 1))
        return list(zip(i.tolist(), j.tolist()))

    def degree(self) -> np.ndarray:
        return self.adj.sum(axis=1)

    def induced(self, vertices: Sequence[int]) -> "UGraph":
        idx = np.asarray(list(vertices), dtype=np.int64)
        return UGraph(self.adj[np.ix_(idx, idx)], tuple(self.labels[i] for i in idx))

    def complement(self) -> "UGraph":
        c = ~self.adj
        np.fill_diagonal(c, False)
        return UGraph(c, self.labels)

    def relabeled(self, perm: Sequence[int]) -> "UGraph":
        """Move old vertex ``i`` to position ``perm[i]``."""
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.argsort(perm)
        return UGraph(self.adj[np.ix_(inv, inv)], tuple(self.labels[i] for i in inv))

    def strip_labels(self) -> "UGraph":
        return UGraph(self.adj)

    def components(self) -> list[list[int]]:
        if self.n == 0:
            return []
        k, lab = connected_components(csr_matrix(self.adj), directed=False)
        comps: dict[int, list[int]] = {}
        for v, c in enumerate(lab.tolist()):
            comps.setdefault(c, []).append(v)
        return sorted(comps.values())

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def to_dict(self) -> dict:
        return {"directed": False, "vertices": list(self.labels), "edges": [list(e) for e in self.edges()]}


@dataclass(frozen=True, eq=False)
class DiGraph(_Graph):
    """Simple digraph: no loops, arcs may run both ways between two vertices."""

    arcs: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        arcs = _as_bool_matrix(self.arcs)
        if arcs.diagonal().any():
            raise ValueError("digraphs here have no loops")
        object.__setattr__(self, "arcs", arcs)
        labels = tuple(self.labels) if self.labels else tuple(str(i) for i in range(arcs.shape[0]))
        if len(labels) != arcs.shape[0]:
            raise ValueError("one label per vertex required")
        object.__setattr__(self, "labels", labels)

    @property
    def matrix(self):
        return self.arcs

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]], labels=()) -> "DiGraph":
        a = np.zeros((n, n), dtype=bool)
        for i, j in arcs:
            if i == j:
                raise ValueError(f"loop at vertex {i}")
            a[i, j] = True
        return cls(a, tuple(labels))

    def arc_list(self) -> list[tuple[int, int]]:
        i, j = np.nonzero(self.arcs)
        return list(zip(i.tolist(), j.tolist()))

    def num_arcs(self) -> int:
        return int(self.arcs.sum())

    def underlying(self) -> UGraph:
        return UGraph(self.arcs | self.arcs.T, self.labels)

    def induced(self, vertices: Sequence[int]) -> "DiGraph":
        idx = np.asarray(list(vertices), dtype=np.int64)
        return DiGraph(self.arcs[np.ix_(idx, idx)], tuple(self.labels[i] for i in idx))

    def relabeled(self, perm: Sequence[int]) -> "DiGraph":
        perm = np.asarray(perm, dtype=np.int64)
        inv = np.argsort(perm)
        return DiGraph(self.arcs[np.ix_(inv, inv)], tuple(self.labels[i] for i in inv))

    def strip_labels(self) -> "DiGraph":
        return DiGraph(self.arcs)

    def to_dict(self) -> dict:
        return {"directed": True, "vertices": list(self.labels), "arcs": [list(a) for a in self.arc_list()]}


# --------------------------------------------------------------------------
# File formats
# --------------------------------------------------------------------------


def dumps(graph: UGraph | DiGraph) -> str:
    """Serialize to canonical JSON text (sorted keys, pairs sorted, trailing newline)."""
    return json.dumps(graph.to_dict(), sort_keys=True) + "\n"


def loads(text: str) -> UGraph | DiGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"graph file is not valid JSON: {exc}") from exc
    return from_dict(data)


def from_dict(data: dict) -> UGraph | DiGraph:
    try:
        labels = tuple(str(v) for v in data["vertices"])
        n = len(labels)
        if data["directed"]:
            return DiGraph.from_arcs(n, (tuple(a) for a in data["arcs"]), labels)
        return UGraph.from_edges(n, (tuple(e) for e in data["edges"]), labels)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InvalidSpec(f"malformed graph data: {exc}") from exc


def to_dot(graph: UGraph | DiGraph, name: str = "G") -> str:
    directed = isinstance(graph, DiGraph)
    sep = "->" if directed else "--"
    lines = [f'{"digraph" if directed else "graph"} "{name}" {{']
    for i, lab in enumerate(graph.labels):
        lines.append(f'  {i} [label="{lab}"];')
    pairs = graph.arc_list() if directed else graph.edges()
    for i, j in pairs:
        lines.append(f"  {i} {sep} {j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Construction from group models
# --------------------------------------------------------------------------


def _membership_matrix(g: GroupModel) -> np.ndarray:
    """``m[i, j]`` iff element j lies in the cyclic subgroup of element i."""
    n = len(g)
    m = np.zeros((n, n), dtype=bool)
    if isinstance(g, FiniteGroup):
        for i in range(n):
            m[i, g.power_indices(i)] = True
        return m
    elems = g.elements
    for i, x in enumerate(elems):
        for j, y in enumerate(elems):
            if g.contains(x, y):
                m[i, j] = True
    return m


def _labels(g: GroupModel) -> tuple:
    return tuple(g.label(x) for x in g.elements)


def directed_power_graph(g: GroupModel) -> DiGraph:
    """Arc ``x -> y`` iff ``x != y`` and ``y = x**n`` for some integer n."""
    m = _membership_matrix(g)
    np.fill_diagonal(m, False)
    return DiGraph(m, _labels(g))


def zpm_directed_power_graph(g: GroupModel) -> DiGraph:
    """Arc ``x -> y`` iff ``x != y`` and ``y = x**n`` for some nonzero integer n."""
    m = _membership_matrix(g)
    np.fill_diagonal(m, False)
    if not g.finite:
        infinite = np.array([g.order(x) is ALEPH0 for x in g.elements])
        m[infinite, 0] = False
    return DiGraph(m, _labels(g))


def power_graph(g: GroupModel) -> UGraph:
    return directed_power_graph(g).underlying()


def zpm_power_graph(g: GroupModel) -> UGraph:
    return zpm_directed_power_graph(g).underlying()


# --------------------------------------------------------------------------
# Neighbourhoods and classes
# --------------------------------------------------------------------------


def _mask(n: int, vertices: Iterable[int]) -> np.ndarray:
    m = np.zeros(n, dtype=bool)
    m[list(vertices)] = True
    return m


def _to_set(mask: np.ndarray) -> frozenset:
    return frozenset(np.flatnonzero(mask).tolist())


def common_mask(graph: UGraph, mask: np.ndarray) -> np.ndarray:
    """Indicator of the common closed neighbourhood of the vertices in ``mask``."""
    if not mask.any():
        raise EmptySet("common neighbourhood of the empty set")
    return graph.closed[mask].all(axis=0)


def hat_mask(graph: UGraph, mask: np.ndarray) -> np.ndarray:
    """Indicator of the double closed neighbourhood of the vertices in ``mask``."""
    return common_mask(graph, common_mask(graph, mask))


def closed_neighborhood(graph: UGraph, x: int) -> frozenset:
    return _to_set(graph.closed[x])


def common_closed_neighborhood(graph: UGraph, vertices: Iterable[int]) -> frozenset:
    return _to_set(common_mask(graph, _mask(graph.n, vertices)))


def double_neighborhood(graph: UGraph, vertices: Iterable[int]) -> frozenset:
    return _to_set(hat_mask(graph, _mask(graph.n, vertices)))


def hat_sizes(graph: UGraph) -> np.ndarray:
    """``|N(N(x))|`` for every vertex x."""
    c = graph.closed.astype(np.int64)
    # y is in N(N(x)) iff N(x) is contained in N(y)
    overlap = c @ c.T
    contained = overlap == graph.closed.sum(axis=1)[:, None]
    return contained.sum(axis=1)


@dataclass(frozen=True)
class VertexPartition:
    blocks: tuple
    kind: str

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if seen & set(b):
                raise ValueError("partition blocks overlap")
            seen |= set(b)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    @cached_property
    def block_of(self) -> dict:
        return {v: k for k, b in enumerate(self.blocks) for v in b}

    def refines(self, other: "VertexPartition") -> bool:
        return all(len({other.block_of[v] for v in b}) == 1 for b in self.blocks)

    def as_sets(self) -> set:
        return {frozenset(b) for b in self.blocks}


def _partition(keys, kind) -> VertexPartition:
    groups: dict = {}
    for v, key in enumerate(keys):
        groups.setdefault(key, []).append(v)
    return VertexPartition(tuple(sorted(tuple(b) for b in groups.values())), kind)


def equiv_classes(graph: UGraph) -> VertexPartition:
    """Partition by equality of closed neighbourhoods."""
    return _partition((row.tobytes() for row in np.packbits(graph.closed, axis=1)), "equiv")


def approx_classes(g: GroupModel) -> VertexPartition:
    """Partition of the elements by the cyclic subgroup they generate."""
    m = _membership_matrix(g)
    same = m & m.T
    return _partition((row.tobytes() for row in np.packbits(same, axis=1)), "approx")


def split_by_order(g: GroupModel) -> tuple[frozenset, frozenset]:
    finite, infinite = [], []
    for i, x in enumerate(g.elements):
        (infinite if g.order(x) is ALEPH0 else finite).append(i)
    return frozenset(finite), frozenset(infinite)
