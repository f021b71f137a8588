"""Brute-force oracle and the end-to-end reconstruction harness."""
from __future__ import annotations

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import PowGraphError
from .graphs import DiGraph, UGraph, from_dict as graph_from_dict, zpm_power_graph
from .groups import FiniteGroup, GroupModel, GroupSpec, build_group
from .isomorphism import find_isomorphism, replay
from .reconstruct import plan_orientation, realize


def oracle_digraph(g: GroupModel) -> DiGraph:
    """Directed Z±-power graph by multiplying out every element's powers."""
    if not isinstance(g, FiniteGroup):
        raise TypeError("the oracle needs a finite group")
    els = g.elements
    e = g.identity
    n = len(els)
    arcs = np.zeros((n, n), dtype=bool)
    for i, x in enumerate(els):
        y = x
        while True:
            arcs[i, g.index(y)] = True
            if y == e:
                break
            y = g.mul(y, x)
    np.fill_diagonal(arcs, False)
    return DiGraph(arcs, tuple(g.label(x) for x in els))


def relabel_permutation(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).permutation(n)


@dataclass
class VerifyReport:
    group: str
    order: int
    case: str | None = None
    classes: list = field(default_factory=list)
    isomorphic: bool = False
    witness: list | None = None
    failure: str | None = None
    error: str | None = None
    expect_error: str | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        if self.expect_error is not None:
            return self.error is not None and self.error.split(":")[0] in _error_names(self.expect_error)
        return self.isomorphic

    def to_dict(self) -> dict:
        return {
            "group": self.group,
            "order": self.order,
            "case": self.case,
            "classes": self.classes,
            "isomorphic": self.isomorphic,
            "passed": self.passed,
            "witness": self.witness,
            "failure": self.failure,
            "error": self.error,
            "seconds": round(self.seconds, 4),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


def _error_names(name: str) -> set:
    # an expected StructureError is also met by any of its subclasses
    from . import errors

    base = getattr(errors, name, None)
    if base is None:
        return {name}
    return {c.__name__ for c in vars(errors).values() if isinstance(c, type) and issubclass(c, base)}


def _describe(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def verify_graph(phi: UGraph, oracle: DiGraph | None, name: str, expect_error: str | None = None) -> VerifyReport:
    """Reconstruct ``phi`` from structure alone and compare with ``oracle`` if given."""
    t0 = time.perf_counter()
    rep = VerifyReport(name, phi.n, expect_error=expect_error)
    try:
        plan = plan_orientation(phi.strip_labels())
        rep.case = plan.case.kind.value
        rep.classes = [c.to_dict() for c in plan.classes]
        out = realize(phi.strip_labels(), plan)
        if oracle is not None:
            res = find_isomorphism(out, oracle.strip_labels())
            if res.isomorphic and replay(out, oracle.strip_labels(), res.mapping):
                rep.isomorphic, rep.witness = True, res.mapping
            else:
                rep.failure = f"{res.invariant}: {res.detail}".rstrip(": ")
        else:
            rep.failure = "no oracle"
    except PowGraphError as exc:
        rep.error = _describe(exc)
    rep.seconds = time.perf_counter() - t0
    return rep


def verify_group(spec: GroupSpec | dict, relabel_seed: int | None = None) -> VerifyReport:
    """Build G, hand only its unlabeled Z±-power graph to reconstruction, check against the oracle."""
    if isinstance(spec, dict):
        spec = GroupSpec.from_dict(spec)
    t0 = time.perf_counter()
    g = build_group(spec)
    oracle = oracle_digraph(g)
    phi = zpm_power_graph(g).strip_labels()
    if relabel_seed is not None:
        perm = relabel_permutation(phi.n, relabel_seed)
        phi = phi.relabeled(perm)
        oracle = oracle.strip_labels().relabeled(perm)
    rep = verify_graph(phi, oracle, spec.label)
    rep.seconds = time.perf_counter() - t0
    return rep


def _run_entry(entry) -> VerifyReport:
    try:
        if isinstance(entry, UGraph):
            return verify_graph(entry, None, "graph")
        if isinstance(entry, dict) and entry.get("kind") == "graph":
            graph = graph_from_dict(entry["graph"])
            return verify_graph(graph, None, entry.get("name", "graph"), entry.get("expect_error"))
        spec = entry if isinstance(entry, GroupSpec) else GroupSpec.from_dict(entry)
        return verify_group(spec)
    except PowGraphError as exc:
        name = getattr(entry, "label", None) or (entry.get("name") if isinstance(entry, dict) else None) or "?"
        return VerifyReport(str(name), 0, error=_describe(exc))


def corpus_threads() -> int:
    try:
        return max(1, int(os.environ.get("POWGRAPH_THREADS", "1")))
    except ValueError:
        return 1


def run_corpus(manifest, threads: int | None = None) -> list[VerifyReport]:
    """Verify every manifest entry; errors are recorded per entry and results keep manifest order."""
    entries = list(manifest)
    threads = threads or corpus_threads()
    if threads == 1:
        return [_run_entry(e) for e in entries]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(_run_entry, entries))


def write_reports(reports, path=None) -> str:
    text = "".join(r.to_json() + "\n" for r in reports)
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text
