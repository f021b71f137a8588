"""Graph-only analysis of a finite-order component.

Everything here reads the adjacency matrix and nothing else: the center and
its five-way case split, recognition of simple and complex closed-neighbourhood
classes, and recovery of the element orders a class must contain.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import InvalidSpec, NotAnEquivClass, NotFiniteOrderComponent, ProfileInconsistent
from .graphs import UGraph, VertexPartition, equiv_classes, hat_mask
from .groups import ALEPH0
from .numtheory import prime_power_parse, totient


class CenterKind(Enum):
    TRIVIAL = "TrivialCenter"
    CYCLIC_PRIME_POWER = "CyclicPrimePower"
    CYCLIC_PQ = "CyclicPQ"
    CYCLIC_COMPOSITE = "CyclicComposite"
    P_GROUP_NONCYCLIC = "PGroupNoncyclic"
    PRUFER_LIKE = "PruferLike"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CenterCase:
    kind: CenterKind
    center_size: object
    order: object

    def __str__(self):
        return f"{self.kind.value}(|S|={self.center_size}, |V|={self.order})"


class ClassKind(Enum):
    SIMPLE = "simple"
    COMPLEX = "complex"
    INFINITELY_COMPLEX = "infinitely complex"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EquivClassInfo:
    """A closed-neighbourhood class with its recognised kind.

    ``p``, ``s`` and ``r`` are set for complex classes: the class holds the
    elements of orders ``p**s .. p**r`` of one cyclic p-subgroup. For an
    infinitely complex class ``r`` is None and ``p`` may be unknown.
    """

    vertices: tuple | None
    card: object
    kind: ClassKind
    p: int | None = None
    s: int | None = None
    r: int | None = None
    hat_size: object = None

    def __post_init__(self):
        if self.kind is ClassKind.COMPLEX:
            if not (self.r > self.s > 0):
                raise ValueError("complex classes need r > s > 0")
            if self.card != self.p**self.r - self.p ** (self.s - 1) or self.hat_size != self.p**self.r:
                raise ValueError("complex class sizes disagree with (p, s, r)")
        elif self.kind is ClassKind.SIMPLE and (self.s is not None or self.r is not None):
            raise ValueError("simple classes carry no order exponents")
        elif self.kind is ClassKind.INFINITELY_COMPLEX and self.card is not ALEPH0:
            raise ValueError("infinitely complex classes are infinite")

    def as_row(self) -> dict:
        return {
            "size": str(self.card),
            "kind": str(self.kind),
            "p": self.p,
            "s": self.s,
            "r": self.r,
            "hat": str(self.hat_size),
        }


# --------------------------------------------------------------------------
# Center
# --------------------------------------------------------------------------


def center_mask(graph: UGraph) -> np.ndarray:
    mask = graph.closed.all(axis=1)
    if not mask.any():
        raise NotFiniteOrderComponent("graph has no vertex adjacent to all others")
    return mask


def center(graph: UGraph) -> frozenset:
    """Vertices adjacent to every other vertex."""
    return frozenset(np.flatnonzero(center_mask(graph)).tolist())


def classify_center_case(graph: UGraph) -> CenterCase:
    mask = center_mask(graph)
    s, n = int(mask.sum()), graph.n
    if s == 1:
        kind = CenterKind.TRIVIAL
    elif s == n:
        kind = CenterKind.CYCLIC_PRIME_POWER
    elif graph.induced(np.flatnonzero(~mask)).is_connected():
        kind = CenterKind.CYCLIC_COMPOSITE
    elif 2 * s >= n:
        kind = CenterKind.CYCLIC_PQ
    else:
        kind = CenterKind.P_GROUP_NONCYCLIC
    return CenterCase(kind, s, n)


# --------------------------------------------------------------------------
# Class recognition
# --------------------------------------------------------------------------


def class_adjacency(graph: UGraph, partition: VertexPartition) -> np.ndarray:
    """Adjacency between distinct classes, read off one representative each."""
    reps = [b[0] for b in partition.blocks]
    q = graph.adj[np.ix_(reps, reps)].copy()
    np.fill_diagonal(q, False)
    return q


def parse_complex_sizes(hat: int, size: int) -> tuple[int, int, int] | None:
    """Solve ``hat = p**r`` and ``hat - size = p**(s-1)`` with ``r > s > 0``."""
    pr = prime_power_parse(hat)
    if pr is None:
        return None
    p, r = pr
    delta = hat - size
    if delta == 1:
        s = 1
    else:
        pd = prime_power_parse(delta)
        if pd is None or pd[0] != p:
            return None
        s = pd[1] + 1
    if not r > s > 0:
        return None
    return p, s, r


def _no_independent_small_pair(q: np.ndarray, sizes: np.ndarray, k: int) -> bool:
    near = np.flatnonzero(q[k] & (sizes <= sizes[k]))
    if len(near) < 2:
        return True
    sub = q[np.ix_(near, near)]
    off = ~np.eye(len(near), dtype=bool)
    return bool(sub[off].all())


def classify_class(
    graph: UGraph,
    vertices: Sequence[int],
    partition: VertexPartition | None = None,
) -> EquivClassInfo:
    """Decide whether a class is simple or complex, recovering ``(p, s, r)`` for complex ones.

    Only valid when the center of ``graph`` is a single vertex, and never for
    the class of that vertex.
    """
    cmask = center_mask(graph)
    if cmask.sum() != 1:
        raise ValueError("class recognition needs a graph whose center is a single vertex")
    partition = partition or equiv_classes(graph)
    block = tuple(sorted(vertices))
    if block not in partition.blocks:
        raise NotAnEquivClass(f"{block} is not a closed-neighbourhood class")
    if cmask[list(block)].any():
        raise ValueError("the center vertex has no class kind")
    k = partition.blocks.index(block)
    sizes = np.array([len(b) for b in partition.blocks])
    q = class_adjacency(graph, partition)

    mask = np.zeros(graph.n, dtype=bool)
    mask[list(block)] = True
    hat = int(hat_mask(graph, mask).sum())
    parsed = parse_complex_sizes(hat, len(block))
    if parsed is not None and _no_independent_small_pair(q, sizes, k):
        p, s, r = parsed
        return EquivClassInfo(block, len(block), ClassKind.COMPLEX, p, s, r, hat)
    return EquivClassInfo(block, len(block), ClassKind.SIMPLE, hat_size=hat)


def classify_all(graph: UGraph, partition: VertexPartition | None = None) -> list[EquivClassInfo]:
    """Classify every class except the center; requires a single-vertex center."""
    partition = partition or equiv_classes(graph)
    cmask = center_mask(graph)
    return [classify_class(graph, b, partition) for b in partition.blocks if not cmask[b[0]]]


# --------------------------------------------------------------------------
# Orders
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderChain:
    """Element orders held by a class, with the totient size of each order block.

    ``orders`` lists the orders in increasing order; for an unbounded chain it
    holds the first few terms and ``unbounded`` is set.
    """

    orders: tuple
    unbounded: bool = False
    p: int | None = None
    s: int | None = None

    @property
    def block_sizes(self) -> tuple:
        return tuple(totient(o) for o in self.orders)

    def total(self):
        return ALEPH0 if self.unbounded else sum(self.block_sizes)

    def __repr__(self):
        if self.unbounded and self.p is None:
            return "{" + f"p^{self.s}, p^{self.s + 1}, ..." + "}"
        body = ", ".join(map(str, self.orders))
        return "{" + body + (", ..." if self.unbounded else "") + "}"


def class_order_multiset(info: EquivClassInfo, order: int | None = None) -> OrderChain:
    if info.kind is ClassKind.COMPLEX:
        return OrderChain(tuple(info.p**k for k in range(info.s, info.r + 1)), p=info.p, s=info.s)
    if info.kind is ClassKind.INFINITELY_COMPLEX:
        if info.p is None:
            return OrderChain((), unbounded=True, s=info.s)
        return OrderChain(tuple(info.p**k for k in range(info.s, info.s + 3)), unbounded=True, p=info.p, s=info.s)
    if order is None:
        raise ValueError("a simple class needs its element order supplied")
    return OrderChain((order,))


# --------------------------------------------------------------------------
# Symbolic profiles
# --------------------------------------------------------------------------


@dataclass
class ClassProfile:
    """Hand-encoded class data for components that no finite graph can show.

    ``cards`` holds each class size (an int or ALEPH0), ``hat_deltas`` the
    finite size of the double neighbourhood minus the class, and
    ``adjacency`` the symmetric class adjacency relation.
    """

    cards: list
    hat_deltas: list
    adjacency: np.ndarray = field(default=None)

    def __post_init__(self):
        k = len(self.cards)
        if len(self.hat_deltas) != k:
            raise InvalidSpec("one hat delta per class required")
        adj = np.zeros((k, k), dtype=bool) if self.adjacency is None else np.asarray(self.adjacency, dtype=bool)
        if adj.shape != (k, k) or not np.array_equal(adj, adj.T):
            raise InvalidSpec("class adjacency must be a symmetric k x k matrix")
        self.adjacency = adj

    @classmethod
    def from_dict(cls, data: dict) -> "ClassProfile":
        try:
            cards = [ALEPH0 if c["card"] == "aleph0" else int(c["card"]) for c in data["classes"]]
            deltas = [int(c["hat_delta"]) for c in data["classes"]]
            return cls(cards, deltas, data.get("adjacency"))
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSpec(f"malformed class profile: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> "ClassProfile":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "classes": [
                {"card": "aleph0" if c is ALEPH0 else c, "hat_delta": d} for c, d in zip(self.cards, self.hat_deltas)
            ],
            "adjacency": self.adjacency.astype(int).tolist(),
        }


def classify_profile_class(profile: ClassProfile, i: int) -> EquivClassInfo:
    if profile.cards[i] is not ALEPH0:
        raise ValueError("only infinite classes are classified from a profile")
    delta = profile.hat_deltas[i]
    if delta == 1:
        p, s = None, 1
    else:
        pk = prime_power_parse(delta)
        if pk is None:
            raise ProfileInconsistent(f"hat delta {delta} is not a prime power")
        p, s = pk[0], pk[1] + 1
    return EquivClassInfo(None, ALEPH0, ClassKind.INFINITELY_COMPLEX, p, s, None, ALEPH0)
