"""Recover the directed Z±-power graph of a finite-order component from its undirected graph.

The input is only a graph. The case split on the center picks one of three
strategies:

* cyclic centers: the group is cyclic of order |V|; match against the
  canonical cyclic graph and pull its arcs back;
* noncyclic p-group centers: order every class by the size of its double
  neighbourhood;
* trivial center: recognise simple and complex classes and orient each
  adjacent pair with the totient size rule.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from .classes import (
    CenterCase,
    CenterKind,
    ClassKind,
    EquivClassInfo,
    center_mask,
    class_adjacency,
    classify_center_case,
    classify_class,
)
from .errors import SizeMismatch, StructureError
from .graphs import DiGraph, UGraph, equiv_classes, hat_mask, hat_sizes
from .isomorphism import find_isomorphism
from .numtheory import prime_power_parse, totient

__all__ = [
    "totient",
    "prime_power_parse",
    "canonical_cyclic_dpg",
    "tower_block_sizes",
    "synthesize_class_tower",
    "BlockDescriptor",
    "describe_block",
    "direction_predicate",
    "orient_between",
    "ClassPlan",
    "OrientationPlan",
    "plan_orientation",
    "realize",
    "reconstruct",
]


def canonical_cyclic_dpg(n: int) -> DiGraph:
    """Directed power graph of Z_n on residues: a -> b iff b is a multiple of gcd(a, n)."""
    if n < 1:
        raise ValueError("n must be positive")
    g = np.array([gcd(a, n) for a in range(n)])
    arcs = (np.arange(n)[None, :] % g[:, None]) == 0
    np.fill_diagonal(arcs, False)
    return DiGraph(arcs, tuple(str(a) for a in range(n)))


# --------------------------------------------------------------------------
# Towers
# --------------------------------------------------------------------------


def tower_block_sizes(p: int, s: int, r: int) -> list[int]:
    return [totient(p**k) for k in range(s, r + 1)]


@dataclass(frozen=True)
class TowerFragment:
    blocks: tuple[tuple[int, ...], ...]
    arcs: tuple[tuple[int, int], ...]


def _tower_params(info) -> tuple[int, int, int]:
    if isinstance(info, EquivClassInfo):
        if info.kind is not ClassKind.COMPLEX:
            raise ValueError("towers are built for complex classes only")
        return info.p, info.s, info.r
    p, s, r = info
    return p, s, r


def _split_blocks(vertices: Sequence[int], sizes: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    vs = sorted(vertices)
    if sum(sizes) != len(vs):
        raise SizeMismatch(f"blocks {list(sizes)} cannot tile {len(vs)} vertices")
    out, at = [], 0
    for k in sizes:
        out.append(tuple(vs[at:at + k]))
        at += k
    return tuple(out)


def _block_arcs(blocks) -> list[tuple[int, int]]:
    arcs = []
    for i, hi in enumerate(blocks):
        arcs += [(u, v) for u in hi for v in hi if u != v]
        for lo in blocks[:i]:
            arcs += [(u, v) for u in hi for v in lo]
    return arcs


def synthesize_class_tower(info, vertices: Sequence[int]) -> TowerFragment:
    """Lay a chain of totient-sized blocks over ``vertices``, lowest order first.

    ``info`` is a complex EquivClassInfo or a bare ``(p, s, r)``; ``s = 0`` is
    allowed so a cyclic center can start from the identity.
    """
    p, s, r = _tower_params(info)
    blocks = _split_blocks(vertices, tower_block_sizes(p, s, r))
    return TowerFragment(blocks, tuple(_block_arcs(blocks)))


# --------------------------------------------------------------------------
# Direction rule
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockDescriptor:
    """An ≈-block seen from the graph: its size, its neighbourhood and the set it lives in.

    ``nbr`` is the closed neighbourhood of a representative. ``members`` marks
    the vertices a singleton witness may not come from (the block's own
    class). Synthetic blocks inside complex classes share their class's row.
    """

    size: int
    nbr: np.ndarray
    members: np.ndarray
    identity: bool = False


def describe_block(graph: UGraph, vertices: Sequence[int], size: int | None = None, identity: bool = False) -> BlockDescriptor:
    vs = list(vertices)
    members = np.zeros(graph.n, dtype=bool)
    members[vs] = True
    return BlockDescriptor(len(vs) if size is None else size, graph.closed[vs[0]], members, identity)


def direction_predicate(graph: UGraph, a: BlockDescriptor, b: BlockDescriptor, singleton_mask: np.ndarray) -> bool:
    """True when the graph forces arcs from block ``a`` to block ``b``.

    Larger blocks point to smaller ones. On a size tie the source is the side
    adjacent to a non-universal singleton block, which only an element of
    order twice an odd number can be. The identity is handled by its flag.
    """
    if a is b:
        return True
    if b.identity:
        return True
    if a.identity:
        return False
    if b.size != a.size:
        return b.size < a.size
    witness = singleton_mask & ~center_mask(graph) & a.nbr & ~a.members & ~b.members
    return bool(witness.any())


def _bottom(graph: UGraph, info: EquivClassInfo) -> BlockDescriptor:
    if info.kind is ClassKind.COMPLEX:
        return describe_block(graph, info.vertices, size=totient(info.p**info.s))
    return describe_block(graph, info.vertices)


def orient_between(graph: UGraph, c: EquivClassInfo, d: EquivClassInfo, singleton_mask: np.ndarray) -> bool:
    """Return True for C -> D and False for D -> C."""
    if c.kind is ClassKind.INFINITELY_COMPLEX:
        return True
    if d.kind is ClassKind.INFINITELY_COMPLEX:
        return False
    if c.kind is ClassKind.COMPLEX and d.kind is ClassKind.COMPLEX:
        if d.p**d.r < c.p**c.s:
            return True
        if c.p**c.r < d.p**d.s:
            return False
        raise StructureError(f"complex classes with orders p^{c.s}..p^{c.r} and p^{d.s}..p^{d.r} overlap")
    bc, bd = _bottom(graph, c), _bottom(graph, d)
    fwd = direction_predicate(graph, bc, bd, singleton_mask)
    back = direction_predicate(graph, bd, bc, singleton_mask)
    if fwd == back:
        raise StructureError(
            f"classes {c.vertices[:3]}... and {d.vertices[:3]}... admit {'both' if fwd else 'no'} orientations"
        )
    return fwd


# --------------------------------------------------------------------------
# Plan
# --------------------------------------------------------------------------


@dataclass
class ClassPlan:
    vertices: tuple
    kind: str
    blocks: tuple
    p: int | None = None
    s: int | None = None
    r: int | None = None

    def to_dict(self) -> dict:
        return {
            "size": len(self.vertices),
            "kind": self.kind,
            "p": self.p,
            "s": self.s,
            "r": self.r,
            "blocks": [len(b) for b in self.blocks],
        }


@dataclass
class OrientationPlan:
    """Everything needed to write down the arcs.

    ``directions`` lists class index pairs ``(i, j)`` meaning every vertex of
    class i has an arc to every vertex of class j. In the cyclic cases
    ``cyclic_map`` sends residue k of Z_n to its vertex and replaces the
    class-level data for arc purposes.
    """

    case: CenterCase
    classes: list[ClassPlan] = field(default_factory=list)
    directions: list[tuple[int, int]] = field(default_factory=list)
    cyclic_map: list[int] | None = None

    def to_dict(self) -> dict:
        return {
            "case": self.case.kind.value,
            "center_size": self.case.center_size,
            "order": self.case.order,
            "classes": [c.to_dict() for c in self.classes],
            "directions": [list(d) for d in self.directions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"


def _plan_cyclic(graph: UGraph, case: CenterCase) -> OrientationPlan:
    n = graph.n
    canon = canonical_cyclic_dpg(n)
    res = find_isomorphism(canon.underlying(), graph.strip_labels())
    if not res.isomorphic:
        raise StructureError(f"center case {case.kind.value} but the graph is not the power graph of Z_{n}")
    part = equiv_classes(graph)
    classes = [ClassPlan(b, "cyclic", (b,)) for b in part.blocks]
    return OrientationPlan(case, classes, [], list(res.mapping))


def _plan_pgroup(graph: UGraph, case: CenterCase) -> OrientationPlan:
    cmask = center_mask(graph)
    pk = prime_power_parse(int(cmask.sum()))
    if pk is None:
        raise StructureError(f"center of size {int(cmask.sum())} is not a prime power")
    p, k = pk
    part = equiv_classes(graph)
    hats = hat_sizes(graph)
    cvert = tuple(np.flatnonzero(cmask).tolist())
    classes = [ClassPlan(cvert, "center", synthesize_class_tower((p, 0, k), cvert).blocks, p, 0, k)]
    class_hat = [None]
    for b in part.blocks:
        if cmask[b[0]]:
            continue
        mask = np.zeros(graph.n, dtype=bool)
        mask[list(b)] = True
        hat = hat_mask(graph, mask)
        pr = prime_power_parse(int(hat.sum()))
        if pr is None or pr[0] != p:
            raise StructureError(f"class double neighbourhood of size {int(hat.sum())} is not a power of {p}")
        r = pr[1]
        below = hat & ~mask
        low = int(hats[below].max()) if below.any() else 1
        ps = prime_power_parse(low)
        s = 1 if low == 1 else (ps[1] + 1 if ps and ps[0] == p else None)
        if s is None or not r > s - 1 or len(b) != p**r - p ** (s - 1):
            raise StructureError(f"class of size {len(b)} does not fit a {p}-power tower")
        classes.append(ClassPlan(b, "complex" if r > s else "simple", synthesize_class_tower((p, s, r), b).blocks, p, s, r))
        class_hat.append(int(hat.sum()))

    directions = [(i, 0) for i in range(1, len(classes))]
    reps = [c.vertices[0] for c in classes]
    for i in range(1, len(classes)):
        for j in range(i + 1, len(classes)):
            if not graph.adj[reps[i], reps[j]]:
                continue
            if class_hat[i] == class_hat[j]:
                raise StructureError("adjacent classes with equal double neighbourhoods")
            directions.append((i, j) if class_hat[j] < class_hat[i] else (j, i))
    return OrientationPlan(case, classes, directions)


def _plan_trivial(graph: UGraph, case: CenterCase) -> OrientationPlan:
    cmask = center_mask(graph)
    part = equiv_classes(graph)
    e = int(np.flatnonzero(cmask)[0])
    infos: list[EquivClassInfo] = []
    for b in part.blocks:
        if not cmask[b[0]]:
            infos.append(classify_class(graph, b, part))

    singleton = np.zeros(graph.n, dtype=bool)
    for info in infos:
        if info.kind is ClassKind.SIMPLE and info.card == 1:
            singleton[info.vertices[0]] = True
        elif info.kind is ClassKind.COMPLEX and info.p == 2 and info.s == 1:
            singleton[info.vertices[0]] = True

    classes = [ClassPlan((e,), "center", ((e,),))]
    for info in infos:
        if info.kind is ClassKind.COMPLEX:
            blocks = synthesize_class_tower(info, info.vertices).blocks
            classes.append(ClassPlan(info.vertices, "complex", blocks, info.p, info.s, info.r))
        else:
            classes.append(ClassPlan(info.vertices, "simple", (info.vertices,)))

    directions = [(i, 0) for i in range(1, len(classes))]
    q = class_adjacency(graph, part)
    pos = {b: i for i, b in enumerate(part.blocks)}
    idx = [pos[info.vertices] for info in infos]
    for a in range(len(infos)):
        for b in range(a + 1, len(infos)):
            if not q[idx[a], idx[b]]:
                continue
            fwd = orient_between(graph, infos[a], infos[b], singleton)
            directions.append((a + 1, b + 1) if fwd else (b + 1, a + 1))
    return OrientationPlan(case, classes, directions)


def plan_orientation(graph: UGraph) -> OrientationPlan:
    """Run the center case split and build the class-level orientation."""
    case = classify_center_case(graph)
    if case.kind in (CenterKind.CYCLIC_PRIME_POWER, CenterKind.CYCLIC_PQ, CenterKind.CYCLIC_COMPOSITE):
        return _plan_cyclic(graph, case)
    if case.kind is CenterKind.P_GROUP_NONCYCLIC:
        return _plan_pgroup(graph, case)
    return _plan_trivial(graph, case)


def realize(graph: UGraph, plan: OrientationPlan) -> DiGraph:
    n = graph.n
    arcs = np.zeros((n, n), dtype=bool)
    if plan.cyclic_map is not None:
        m = np.asarray(plan.cyclic_map)
        canon = canonical_cyclic_dpg(n).arcs
        arcs[np.ix_(m, m)] = canon
    else:
        for c in plan.classes:
            for u, v in _block_arcs(c.blocks):
                arcs[u, v] = True
        for i, j in plan.directions:
            arcs[np.ix_(plan.classes[i].vertices, plan.classes[j].vertices)] = True
    out = DiGraph(arcs, graph.labels)
    if out.underlying() != graph:
        raise StructureError("orientation does not reproduce the input graph")
    return out


def reconstruct(graph: UGraph) -> DiGraph:
    """Digraph on the vertices of ``graph`` isomorphic to its directed Z±-power graph."""
    return realize(graph, plan_orientation(graph))
