"""The default verification corpus and manifest files."""
from __future__ import annotations

import json

import numpy as np

from .errors import InvalidSpec
from .graphs import UGraph
from .groups import (
    GroupSpec,
    abelian,
    alternating_group,
    build_group,
    cyclic,
    dicyclic,
    dihedral,
    dihedral_perm,
    permutation,
    quaternion_perm,
    symmetric_group,
    table,
)

SAMPLE_SEED = 0
SAMPLE_COUNT = 10
SAMPLE_MIN_ORDER = 6
SAMPLE_MAX_ORDER = 64


def invariant_factor_lists(max_order: int) -> list[list[int]]:
    """Noncyclic abelian groups as invariant factor lists ``d1 | d2 | ...`` with product <= max_order."""
    out = []

    def extend(prefix, prod):
        if len(prefix) >= 2:
            out.append(list(prefix))
        last = prefix[-1]
        m = last
        while prod * m <= max_order:
            extend(prefix + [m], prod * m)
            m += last

    for d in range(2, max_order + 1):
        extend([d], d)
    return sorted(out, key=lambda v: (int(np.prod(v)), v))


def _closure_size(gens, limit: int) -> int:
    """Order of the generated permutation group, or ``limit + 1`` once it is exceeded."""
    ident = tuple(range(len(gens[0])))
    seen, frontier = {ident}, [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tuple(g[i] for i in x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > limit:
                        return limit + 1
        frontier = nxt
    return len(seen)


def random_table_samples(count: int = SAMPLE_COUNT, seed: int = SAMPLE_SEED, max_order: int = SAMPLE_MAX_ORDER) -> list[GroupSpec]:
    """Subgroups of S4..S7 from one or two random generators, exported as bare Cayley tables.

    Orders are kept distinct so the samples do not collapse onto a few tiny
    groups.
    """
    rng = np.random.default_rng(seed)
    specs, seen = [], set()
    for _ in range(10_000):
        if len(specs) == count:
            break
        degree = int(rng.integers(4, 8))
        ngens = int(rng.integers(1, 3))
        gens = [rng.permutation(degree).tolist() for _ in range(ngens)]
        order = _closure_size(gens, max_order)
        if not SAMPLE_MIN_ORDER <= order <= max_order or order in seen:
            continue
        seen.add(order)
        g = build_group(permutation(degree, gens))
        specs.append(table(g.table.tolist(), name=f"sample{len(specs)}(|G|={len(g)})"))
    else:
        raise RuntimeError("random sampling did not find enough distinct subgroups")
    return specs


def heisenberg_27() -> GroupSpec:
    """Unitriangular 3x3 matrices over F_3, the nonabelian group of order 27 and exponent 3."""
    els = [(a, b, c) for a in range(3) for b in range(3) for c in range(3)]
    index = {x: i for i, x in enumerate(els)}

    def mul(x, y):
        return ((x[0] + y[0]) % 3, (x[1] + y[1]) % 3, (x[2] + y[2] + x[0] * y[1]) % 3)

    rows = [[index[mul(x, y)] for y in els] for x in els]
    return table(rows, name="Heis(3)")


def default_corpus() -> list[GroupSpec]:
    specs = [cyclic(n) for n in range(1, 101)]
    specs += [dihedral(n) for n in range(2, 51)]
    specs += [dicyclic(k) for k in range(2, 26)]
    specs += [abelian(v) for v in invariant_factor_lists(64)]
    specs += [symmetric_group(3), symmetric_group(4), alternating_group(4), alternating_group(5), dihedral_perm(4), quaternion_perm()]
    specs += random_table_samples()
    return specs


def graph_entry(graph: UGraph, name: str, expect_error: str | None = None) -> dict:
    d = {"kind": "graph", "name": name, "graph": graph.to_dict()}
    if expect_error:
        d["expect_error"] = expect_error
    return d


def cycle_graph(n: int) -> UGraph:
    return UGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def petersen_graph() -> UGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return UGraph.from_edges(10, outer + spokes + inner)


def dump_manifest(entries) -> str:
    """One JSON object per line; group specs in their canonical form."""
    lines = []
    for e in entries:
        lines.append(e.to_json() if isinstance(e, GroupSpec) else json.dumps(e, sort_keys=True, separators=(",", ":")))
    return "".join(line + "\n" for line in lines)


def load_manifest(text: str) -> list:
    """Accept JSON lines or a single JSON array of entries."""
    text = text.strip()
    if not text:
        return []
    try:
        if text.startswith("["):
            raw = json.loads(text)
        else:
            raw = [json.loads(line) for line in text.splitlines() if line.strip()]
    except json.JSONDecodeError as exc:
        raise InvalidSpec(f"manifest is not valid JSON: {exc}") from exc
    out = []
    for d in raw:
        if not isinstance(d, dict):
            raise InvalidSpec("manifest entries must be objects")
        out.append(d if d.get("kind") == "graph" else GroupSpec.from_dict(d))
    return out
