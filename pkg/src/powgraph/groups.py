"""Concrete group models with exact element arithmetic.

Two families live here:

* finite catalog groups (cyclic, dihedral, dicyclic, abelian, permutation,
  multiplication table), all reduced to a Cayley table over their elements;
* windowed infinite groups (the integers, a rank-one subgroup of the
  rationals, and the union of the two cyclic factors of ``<a, b | a^p = b^q>``).
  Window models answer order and membership questions about the whole group
  by arithmetic; only the enumerated vertex set is truncated.

Elements are plain hashable payloads (ints, tuples, Fractions). The vertex id
of an element is its position in :meth:`GroupModel.elements`.
"""
from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, prod
from typing import Any, Hashable, Sequence

import numpy as np

from .errors import InvalidSpec, TableNotGroup
from .numtheory import factorize, lcm

Element = Hashable


class _Aleph0:
    """The cardinal of a countably infinite set.

    Compares above every integer; subtracting an integer leaves it unchanged.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "aleph0"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("aleph0")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __sub__(self, other):
        if other is self:
            raise ValueError("aleph0 - aleph0 is undefined")
        return self

    def __add__(self, other):
        return self

    __radd__ = __add__


ALEPH0 = _Aleph0()
Card = "int | _Aleph0"


def is_finite_card(c) -> bool:
    return c is not ALEPH0


# --------------------------------------------------------------------------
# Specs
# --------------------------------------------------------------------------

_KIND_FIELDS = {
    "cyclic": ("n",),
    "dihedral": ("n",),
    "dicyclic": ("k",),
    "abelian": ("invariants",),
    "permutation": ("degree", "generators"),
    "table": ("order", "table"),
    "z_window": ("N",),
    "q_subgroup_window": ("caps", "N"),
    "amalgam": ("p", "q", "N"),
}


@dataclass
class GroupSpec:
    """A group description: ``kind`` plus the kind-specific fields."""

    kind: str
    params: dict[str, Any] = field(default_factory=dict)
    name: str | None = None

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        kind, p = self.kind, self.params
        if kind not in _KIND_FIELDS:
            raise InvalidSpec(f"unknown group kind {kind!r}")
        missing = [f for f in _KIND_FIELDS[kind] if f not in p]
        if missing:
            raise InvalidSpec(f"{kind} spec is missing {', '.join(missing)}")
        extra = set(p) - set(_KIND_FIELDS[kind])
        if extra:
            raise InvalidSpec(f"{kind} spec has unknown fields {sorted(extra)}")

        def pos_int(key, lo=1):
            v = p[key]
            if not isinstance(v, int) or isinstance(v, bool) or v < lo:
                raise InvalidSpec(f"{kind}.{key} must be an integer >= {lo}, got {v!r}")

        if kind in ("cyclic", "dihedral"):
            pos_int("n")
        elif kind == "dicyclic":
            pos_int("k")
        elif kind == "abelian":
            inv = p["invariants"]
            if not isinstance(inv, list) or not all(isinstance(v, int) and v >= 1 for v in inv):
                raise InvalidSpec("abelian.invariants must be a list of integers >= 1")
        elif kind == "permutation":
            pos_int("degree")
            d = p["degree"]
            gens = p["generators"]
            if not isinstance(gens, list):
                raise InvalidSpec("permutation.generators must be a list")
            for g in gens:
                if not isinstance(g, list) or sorted(g) != list(range(d)):
                    raise InvalidSpec(f"generator {g!r} is not a bijection on 0..{d - 1}")
        elif kind == "table":
            pos_int("order")
            n, t = p["order"], p["table"]
            if not isinstance(t, list) or len(t) != n or any(
                not isinstance(row, list) or len(row) != n for row in t
            ):
                raise InvalidSpec(f"table must be an {n}x{n} list of lists")
        elif kind == "z_window":
            pos_int("N")
        elif kind == "q_subgroup_window":
            pos_int("N")
            caps = p["caps"]
            if not isinstance(caps, dict):
                raise InvalidSpec("q_subgroup_window.caps must map primes to exponents")
            for key, e in caps.items():
                q = int(key)
                if q < 2 or factorize(q) != {q: 1}:
                    raise InvalidSpec(f"cap key {key!r} is not a prime")
                if not isinstance(e, int) or e < 0:
                    raise InvalidSpec(f"cap exponent for {key} must be >= 0")
        elif kind == "amalgam":
            pos_int("p", 2)
            pos_int("q", 2)
            pos_int("N")

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        p = self.params
        if self.kind == "abelian":
            return "abelian(" + ",".join(map(str, p["invariants"])) + ")"
        if self.kind == "permutation":
            return f"perm(deg={p['degree']},gens={len(p['generators'])})"
        if self.kind == "table":
            return f"table({p['order']})"
        if self.kind == "q_subgroup_window":
            caps = ",".join(f"{k}:{v}" for k, v in sorted(p["caps"].items(), key=lambda kv: int(kv[0])))
            return f"q_subgroup_window({{{caps}}},N={p['N']})"
        args = ",".join(f"{k}={v}" if k == "N" else str(v) for k, v in p.items())
        return f"{self.kind}({args})"

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"kind": self.kind}
        for key in _KIND_FIELDS[self.kind]:
            value = self.params[key]
            if key == "caps":
                value = {str(k): v for k, v in value.items()}
            d[key] = value
        if self.name:
            d["name"] = self.name
        return d

    def to_json(self) -> str:
        """Byte-stable serialization: sorted keys, no insignificant whitespace."""
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: dict) -> "GroupSpec":
        if not isinstance(d, dict) or "kind" not in d:
            raise InvalidSpec("group spec must be an object with a 'kind' field")
        d = dict(d)
        kind = d.pop("kind")
        name = d.pop("name", None)
        return cls(kind, d, name)

    @classmethod
    def from_json(cls, text: str) -> "GroupSpec":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"group spec is not valid JSON: {exc}") from exc
        return cls.from_dict(data)


def cyclic(n: int) -> GroupSpec:
    return GroupSpec("cyclic", {"n": n})


def dihedral(n: int) -> GroupSpec:
    """Dihedral group with a rotation of order ``n`` (so ``2n`` elements)."""
    return GroupSpec("dihedral", {"n": n})


def dicyclic(k: int) -> GroupSpec:
    """Dicyclic group of order ``4k``; ``dicyclic(2)`` is the quaternion group."""
    return GroupSpec("dicyclic", {"k": k})


def abelian(invariants: Sequence[int]) -> GroupSpec:
    return GroupSpec("abelian", {"invariants": list(invariants)})


def permutation(degree: int, generators: Sequence[Sequence[int]], name: str | None = None) -> GroupSpec:
    return GroupSpec("permutation", {"degree": degree, "generators": [list(g) for g in generators]}, name)


def table(rows: Sequence[Sequence[int]], name: str | None = None) -> GroupSpec:
    rows = [list(map(int, r)) for r in rows]
    return GroupSpec("table", {"order": len(rows), "table": rows}, name)


def z_window(N: int) -> GroupSpec:
    return GroupSpec("z_window", {"N": N})


def q_subgroup_window(caps: dict, N: int) -> GroupSpec:
    return GroupSpec("q_subgroup_window", {"caps": {str(k): v for k, v in caps.items()}, "N": N})


def amalgam(p: int, q: int, N: int) -> GroupSpec:
    return GroupSpec("amalgam", {"p": p, "q": q, "N": N})


def _cycle_perm(degree, *cycles):
    perm = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return perm


def symmetric_group(n: int) -> GroupSpec:
    if n == 1:
        return permutation(1, [[0]], name="S1")
    gens = [_cycle_perm(n, (0, 1))]
    if n > 2:
        gens.append(_cycle_perm(n, tuple(range(n))))
    return permutation(n, gens, name=f"S{n}")


def alternating_group(n: int) -> GroupSpec:
    if n < 3:
        return permutation(max(n, 1), [list(range(max(n, 1)))], name=f"A{n}")
    gens = [_cycle_perm(n, (0, 1, i)) for i in range(2, n)]
    return permutation(n, gens, name=f"A{n}")


def dihedral_perm(n: int) -> GroupSpec:
    """Symmetries of an n-gon acting on its vertices (order 2n)."""
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return permutation(n, [rot, ref], name=f"D{n}")


def quaternion_perm() -> GroupSpec:
    """The quaternion group as its regular permutation representation on 8 points."""
    # 0..7 = 1, -1, i, -i, j, -j, k, -k; left multiplication by i and by j
    left_i = [2, 3, 1, 0, 6, 7, 5, 4]
    left_j = [4, 5, 7, 6, 1, 0, 2, 3]
    return permutation(8, [left_i, left_j], name="Q8")


# --------------------------------------------------------------------------
# Models
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CyclicSubgroup:
    elements: frozenset
    truncated: bool = False

    def __contains__(self, x):
        return x in self.elements

    def __len__(self):
        return len(self.elements)


class GroupModel:
    """Common interface of all group models. Instances are immutable after construction."""

    finite: bool = True
    spec: GroupSpec

    @property
    def elements(self) -> tuple:
        return self._elements

    @property
    def identity(self) -> Element:
        return self._elements[0]

    @cached_property
    def _index(self) -> dict:
        return {x: i for i, x in enumerate(self._elements)}

    def __len__(self):
        return len(self._elements)

    def __contains__(self, x):
        return x in self._index

    def index(self, x: Element) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise KeyError(f"{x!r} is not an element of {self.name}") from None

    @property
    def name(self) -> str:
        return self.spec.label

    def label(self, x: Element) -> str:
        return str(x)

    @cached_property
    def _label_index(self) -> dict:
        return {self.label(x): x for x in self._elements}

    def parse(self, text: str) -> Element:
        """Look an element up by its label."""
        try:
            return self._label_index[text.strip()]
        except KeyError:
            raise KeyError(f"no element labelled {text!r} in {self.name}") from None

    def order(self, x: Element):
        raise NotImplementedError

    def contains(self, x: Element, y: Element) -> bool:
        """True iff ``y`` lies in the cyclic subgroup generated by ``x``."""
        raise NotImplementedError

    def is_nonzero_power(self, x: Element, y: Element) -> bool:
        """True iff ``y == x**n`` for some nonzero integer n."""
        if not self.contains(x, y):
            return False
        return y != self.identity or self.order(x) is not ALEPH0

    def inverse(self, x: Element) -> Element:
        raise NotImplementedError

    def power(self, x: Element, n: int) -> Element:
        raise NotImplementedError

    def cyclic_subgroup(self, x: Element) -> CyclicSubgroup:
        raise NotImplementedError


class FiniteGroup(GroupModel):
    """A finite group given by its elements and a Cayley table over them."""

    finite = True

    def __init__(self, spec: GroupSpec, elements: Sequence, table: np.ndarray, labels=None):
        self.spec = spec
        self._elements = tuple(elements)
        self.table = np.asarray(table, dtype=np.int64)
        self.table.setflags(write=False)
        self._labels = tuple(labels) if labels is not None else None

    def label(self, x):
        if self._labels is not None:
            return self._labels[self.index(x)]
        return super().label(x)

    def mul(self, x, y):
        return self._elements[self.table[self.index(x), self.index(y)]]

    @cached_property
    def _inverse_idx(self) -> np.ndarray:
        rows, cols = np.nonzero(self.table == 0)
        inv = np.empty(len(self), dtype=np.int64)
        inv[rows] = cols
        return inv

    def inverse(self, x):
        return self._elements[self._inverse_idx[self.index(x)]]

    @cached_property
    def _power_lists(self) -> list[list[int]]:
        out = []
        for i in range(len(self)):
            seq = [0]
            cur = i
            while cur != 0:
                seq.append(cur)
                cur = int(self.table[cur, i])
            out.append(seq)
        return out

    @cached_property
    def _power_sets(self) -> list[frozenset]:
        return [frozenset(s) for s in self._power_lists]

    def order(self, x) -> int:
        return len(self._power_lists[self.index(x)])

    def power(self, x, n: int):
        seq = self._power_lists[self.index(x)]
        return self._elements[seq[n % len(seq)]]

    def contains(self, x, y) -> bool:
        return self.index(y) in self._power_sets[self.index(x)]

    def cyclic_subgroup(self, x) -> CyclicSubgroup:
        return CyclicSubgroup(frozenset(self._elements[i] for i in self._power_lists[self.index(x)]))

    def power_indices(self, i: int) -> list[int]:
        """Indices of ``x**0, x**1, ..., x**(o(x)-1)`` for the element with index ``i``."""
        return self._power_lists[i]


def _finite_from_mul(spec, elements, mul, label=str) -> FiniteGroup:
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    t = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            t[i, j] = index[mul(x, y)]
    return FiniteGroup(spec, elements, t, [label(x) for x in elements])


def _pow_label(sym, k):
    if k == 0:
        return ""
    return sym if k == 1 else f"{sym}^{k}"


def _build_cyclic(spec):
    n = spec.params["n"]
    return _finite_from_mul(spec, list(range(n)), lambda a, b: (a + b) % n)


def _build_dihedral(spec):
    n = spec.params["n"]
    # (s, k) stands for r^k f^s
    elements = [(0, k) for k in range(n)] + [(1, k) for k in range(n)]

    def mul(x, y):
        s1, k1 = x
        s2, k2 = y
        return ((s1 + s2) % 2, (k1 + (k2 if s1 == 0 else -k2)) % n)

    def label(x):
        s, k = x
        text = " ".join(t for t in (_pow_label("r", k), "s" if s else "") if t)
        return text or "e"

    return _finite_from_mul(spec, elements, mul, label)


def _build_dicyclic(spec):
    k = spec.params["k"]
    m = 2 * k
    # (i, j) stands for a^i x^j with a^(2k) = 1, x^2 = a^k, x a x^-1 = a^-1
    elements = [(i, 0) for i in range(m)] + [(i, 1) for i in range(m)]

    def mul(u, v):
        i1, j1 = u
        i2, j2 = v
        if j1 == 0:
            return ((i1 + i2) % m, j2)
        if j2 == 0:
            return ((i1 - i2) % m, 1)
        return ((i1 - i2 + k) % m, 0)

    def label(x):
        i, j = x
        text = " ".join(t for t in (_pow_label("a", i), "x" if j else "") if t)
        return text or "e"

    return _finite_from_mul(spec, elements, mul, label)


def _build_abelian(spec):
    inv = spec.params["invariants"]
    elements = list(itertools.product(*(range(n) for n in inv)))

    def mul(x, y):
        return tuple((a + b) % n for a, b, n in zip(x, y, inv))

    return _finite_from_mul(spec, elements, mul, lambda x: "(" + ",".join(map(str, x)) + ")")


MAX_PERMUTATION_GROUP = 5040


def _build_permutation(spec):
    d = spec.params["degree"]
    gens = [tuple(g) for g in spec.params["generators"]]
    ident = tuple(range(d))

    def compose(p, q):  # (p*q)(i) = p(q(i))
        return tuple(p[i] for i in q)

    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > MAX_PERMUTATION_GROUP:
                        raise InvalidSpec(f"permutation group exceeds {MAX_PERMUTATION_GROUP} elements")
        frontier = nxt
    elements = sorted(seen)  # identity is lexicographically least
    return _finite_from_mul(spec, elements, compose, lambda x: "[" + " ".join(map(str, x)) + "]")


def check_table(rows) -> tuple[np.ndarray, int]:
    """Validate a Cayley table; return it as an array together with the identity index.

    Associativity is checked on every triple up to order 256 and on 1000 random
    triples (fixed seed) above that.
    """
    t = np.asarray(rows, dtype=np.int64)
    n = t.shape[0]
    if t.shape != (n, n):
        raise TableNotGroup("table is not square")
    target = np.arange(n)
    if (np.sort(t, axis=1) != target).any() or (np.sort(t, axis=0) != target[:, None]).any():
        raise TableNotGroup("table is not a Latin square over 0..n-1")
    ident = [e for e in range(n) if (t[e] == target).all() and (t[:, e] == target).all()]
    if not ident:
        raise TableNotGroup("table has no identity row/column")
    if n <= 256:
        for a in range(n):
            if (t[t[a]] != t[a][t]).any():
                raise TableNotGroup("table is not associative")
    else:
        rng = random.Random(0)
        for _ in range(1000):
            a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
            if t[t[a, b], c] != t[a, t[b, c]]:
                raise TableNotGroup(f"table is not associative at ({a}, {b}, {c})")
    return t, ident[0]


def _build_table(spec):
    t, e = check_table(spec.params["table"])
    n = t.shape[0]
    elements = [e] + [i for i in range(n) if i != e]
    pos = np.empty(n, dtype=np.int64)
    pos[elements] = np.arange(n)
    relabeled = pos[t[np.ix_(elements, elements)]]
    return FiniteGroup(spec, elements, relabeled, [str(x) for x in elements])


class ZWindow(GroupModel):
    """The integers under addition, enumerated on ``[-N, N]``."""

    finite = False

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        N = spec.params["N"]
        self.N = N
        self._elements = (0,) + tuple(v for k in range(1, N + 1) for v in (k, -k))

    def order(self, x):
        return 1 if x == 0 else ALEPH0

    def contains(self, x, y):
        if x == 0:
            return y == 0
        return y % x == 0

    def inverse(self, x):
        return -x

    def power(self, x, n):
        return n * x

    def in_window(self, x) -> bool:
        return abs(x) <= self.N

    def cyclic_subgroup(self, x):
        if x == 0:
            return CyclicSubgroup(frozenset({0}))
        members = frozenset(k * x for k in range(-(self.N // abs(x)), self.N // abs(x) + 1))
        return CyclicSubgroup(members, truncated=True)

    def intersection_generator(self, x, y):
        """Generator of ``<x> & <y>``."""
        return lcm(x, y)


class QWindow(GroupModel):
    """Rationals whose reduced denominator divides ``prod p**cap``; numerators within ``N``."""

    finite = False

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        caps = {int(k): v for k, v in spec.params["caps"].items()}
        self.caps = caps
        self.N = spec.params["N"]
        self.D = prod(p**e for p, e in caps.items())
        divisors = [d for d in range(1, self.D + 1) if self.D % d == 0]
        elems = {Fraction(0)}
        for d in divisors:
            for m in range(1, self.N + 1):
                if gcd(m, d) == 1:
                    elems.add(Fraction(m, d))
                    elems.add(Fraction(-m, d))
        self._elements = tuple(sorted(elems, key=lambda x: (abs(x), x < 0)))

    def order(self, x):
        return 1 if x == 0 else ALEPH0

    def contains(self, x, y):
        if x == 0:
            return y == 0
        return (y / x).denominator == 1

    def inverse(self, x):
        return -x

    def power(self, x, n):
        return n * x

    def in_window(self, x) -> bool:
        x = Fraction(x)
        return self.D % x.denominator == 0 and abs(x.numerator) <= self.N

    def cyclic_subgroup(self, x):
        if x == 0:
            return CyclicSubgroup(frozenset({Fraction(0)}))
        return CyclicSubgroup(frozenset(y for y in self._elements if self.contains(x, y)), truncated=True)

    def intersection_generator(self, x, y):
        x, y = Fraction(x), Fraction(y)
        return Fraction(lcm(x.numerator, y.numerator), gcd(x.denominator, y.denominator))


class AmalgamWindow(GroupModel):
    """The subset ``<a> | <b>`` of ``<a, b | a^p = b^q>`` with exponents up to ``N``.

    Payloads are ``("a", i)`` or ``("b", j)``; a power ``b^j`` with ``q | j`` is
    stored on the ``a`` branch as ``a^(p*j/q)``.
    """

    finite = False

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        self.p, self.q, self.N = spec.params["p"], spec.params["q"], spec.params["N"]
        elems = {("a", i) for i in range(-self.N, self.N + 1)}
        elems |= {self.canon("b", j) for j in range(-self.N, self.N + 1)}
        self._elements = tuple(sorted(elems, key=lambda x: (x != ("a", 0), x[0], abs(x[1]), x[1] < 0)))

    def canon(self, branch: str, k: int):
        if branch == "b" and k % self.q == 0:
            return ("a", self.p * k // self.q)
        return (branch, k)

    def label(self, x):
        branch, k = x
        if k == 0:
            return "e"
        return branch if k == 1 else f"{branch}^{k}"

    def order(self, x):
        return 1 if x[1] == 0 else ALEPH0

    def _as_b_exponent(self, y):
        branch, k = y
        if branch == "b":
            return k
        if k % self.p == 0:
            return self.q * k // self.p
        return None

    def contains(self, x, y):
        bx, i = x
        if i == 0:
            return y[1] == 0
        if bx == "a":
            return y[0] == "a" and y[1] % i == 0
        l = self._as_b_exponent(y)
        return l is not None and l % i == 0

    def inverse(self, x):
        return (x[0], -x[1])

    def power(self, x, n):
        return self.canon(x[0], x[1] * n)

    def in_window(self, x) -> bool:
        return x in self

    def cyclic_subgroup(self, x):
        if x[1] == 0:
            return CyclicSubgroup(frozenset({self.identity}))
        return CyclicSubgroup(frozenset(y for y in self._elements if self.contains(x, y)), truncated=True)

    def intersection_generator(self, x, y):
        """Generator of ``<x> & <y>`` (identity when the intersection is trivial)."""
        (bx, i), (by, j) = x, y
        if i == 0 or j == 0:
            return self.identity
        if bx == by:
            return self.canon(bx, lcm(i, j))
        if bx == "b":
            i, j = j, i
        # a^m with i | m, p | m and (j / gcd(j, q)) | (m / p)
        t = lcm(i // gcd(i, self.p), j // gcd(j, self.q))
        return ("a", self.p * t)


_BUILDERS = {
    "cyclic": _build_cyclic,
    "dihedral": _build_dihedral,
    "dicyclic": _build_dicyclic,
    "abelian": _build_abelian,
    "permutation": _build_permutation,
    "table": _build_table,
    "z_window": ZWindow,
    "q_subgroup_window": QWindow,
    "amalgam": AmalgamWindow,
}


def build_group(spec: GroupSpec | dict) -> GroupModel:
    if isinstance(spec, dict):
        spec = GroupSpec.from_dict(spec)
    return _BUILDERS[spec.kind](spec)


# Thin functional aliases over the model methods.


def enumerate_elements(g: GroupModel) -> list:
    return list(g.elements)


def element_order(g: GroupModel, x):
    return g.order(x)


def cyclic_subgroup(g: GroupModel, x) -> CyclicSubgroup:
    return g.cyclic_subgroup(x)


def is_power_member(g: GroupModel, x, y) -> bool:
    return g.contains(x, y)
