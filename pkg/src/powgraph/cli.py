"""Command line entry point: ``powgraph <subcommand> ...``.

Exit codes: 0 success, 1 a check failed or the graph is not a power graph,
2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import window as win
from .errors import IdentityArgument, InvalidSpec, PowGraphError, WindowTooSmall
from .graphs import DiGraph, UGraph, dumps, loads, to_dot, zpm_directed_power_graph, zpm_power_graph
from .groups import GroupSpec, build_group
from .reconstruct import plan_orientation, realize
from .verify import corpus_threads, run_corpus, verify_group, write_reports

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

WINDOW_CHECKS = ("iom", "complement", "component", "almost", "directions", "locally-cyclic")


class InputError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _read_spec(arg: str) -> GroupSpec:
    text = arg if arg.lstrip().startswith("{") else _read_text(arg)
    return GroupSpec.from_json(text)


def _read_graph(path: str) -> UGraph:
    g = loads(_read_text(path))
    if isinstance(g, DiGraph):
        raise InputError("expected an undirected graph file")
    return g.strip_labels()


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dot_path(out: str | None) -> str:
    if out is None or out == "-":
        raise InputError("--dot needs an output path")
    return str(Path(out).with_suffix(".dot"))


# --------------------------------------------------------------------------
# Subcommands
# --------------------------------------------------------------------------


def cmd_gen(args) -> int:
    spec = _read_spec(args.spec)
    g = build_group(spec)
    graph = zpm_directed_power_graph(g) if args.directed else zpm_power_graph(g)
    _emit(dumps(graph), args.out)
    if args.dot:
        Path(_dot_path(args.out)).write_text(to_dot(graph, spec.label))
    return EXIT_OK


def _class_table(plan) -> str:
    rows = [f"center case: {plan.case}"]
    rows.append(f"{'class':>5} {'size':>5}  {'kind':<8} {'p':>3} {'s':>3} {'r':>3}  blocks")
    for i, c in enumerate(plan.classes):
        d = c.to_dict()
        cell = lambda v: "-" if v is None else str(v)
        rows.append(
            f"{i:>5} {d['size']:>5}  {d['kind']:<8} {cell(d['p']):>3} {cell(d['s']):>3} {cell(d['r']):>3}  {d['blocks']}"
        )
    return "\n".join(rows) + "\n"


def cmd_analyze(args) -> int:
    plan = plan_orientation(_read_graph(args.graph))
    sys.stdout.write(_class_table(plan))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    phi = _read_graph(args.graph)
    plan = plan_orientation(phi)
    out = realize(phi, plan)
    _emit(dumps(out), args.out)
    if args.plan:
        Path(args.plan).write_text(plan.to_json())
    if args.dot:
        Path(_dot_path(args.out)).write_text(to_dot(out, "reconstructed"))
    return EXIT_OK


def cmd_verify(args) -> int:
    rep = verify_group(_read_spec(args.spec), relabel_seed=args.seed)
    line = rep.to_json() + "\n"
    if args.report:
        Path(args.report).write_text(line)
    status = "PASS" if rep.passed else "FAIL"
    detail = rep.error or rep.failure or f"{rep.case}, {len(rep.classes)} classes"
    print(f"{status} {rep.group} |V|={rep.order} ({detail})")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_corpus(args) -> int:
    entries = corpus_mod.load_manifest(_read_text(args.manifest)) if args.manifest else corpus_mod.default_corpus()
    reports = run_corpus(entries, threads=args.threads or corpus_threads())
    text = write_reports(reports, args.report)
    if not args.report:
        sys.stdout.write(text)
    failed = [r for r in reports if not r.passed]
    print(f"{len(reports) - len(failed)}/{len(reports)} passed", file=sys.stderr)
    return EXIT_OK if not failed else EXIT_FAIL


def _element(g, text):
    if text is None:
        raise InputError("this check needs --x (and --y for pair checks)")
    try:
        return g.parse(text)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from exc


def _labels(g, idx) -> list[str]:
    return [g.label(g.elements[i]) for i in sorted(idx)]


def cmd_window(args) -> int:
    spec = _read_spec(args.spec)
    g = build_group(spec)
    if g.finite:
        raise InputError("window experiments need a window model (z_window, q_subgroup_window, amalgam)")
    report = {"model": spec.label, "check": args.check, "window": len(g)}
    ok = True
    if args.check == "iom":
        report.update(win.iom_sets(g, _element(g, args.x)).labelled(g))
    elif args.check == "complement":
        o_bar, m_bar = win.complement_graphs(g, _element(g, args.x))
        report.update({"O_bar": {"vertices": o_bar.n, "edges": len(o_bar.edges()), "connected": o_bar.is_connected()},
                       "M_bar": {"vertices": m_bar.n, "edges": len(m_bar.edges()), "components": len(m_bar.components())}})
    elif args.check == "component":
        ok = win.lemma4_check(g, _element(g, args.x), guard=args.guard)
        report["verdict"] = ok
    elif args.check == "almost":
        comp, idx = win.o_intersection_complement(g, _element(g, args.x), _element(g, args.y))
        rep = win.almost_connected(comp)
        ok = rep.verdict
        report.update({"verdict": ok, "isolated": _labels(g, [idx[k] for k in rep.isolated]), "bulk_size": len(rep.bulk)})
    elif args.check == "directions":
        rep = win.recover_directions(g, _element(g, args.x), _element(g, args.y), tau=args.tau, guard=args.guard)
        bad = rep.disagreements(win.window_digraph(g))
        ok = not bad
        report.update({
            "tau": args.tau,
            "guarded_edges": len(rep.guarded_edges),
            "agree": len(rep.guarded_edges) * 2 - len(bad),
            "disagree": [[g.label(g.elements[a]), g.label(g.elements[b])] for a, b in bad],
            "unguarded_undecided": len(rep.undecided),
            "verdict": ok,
        })
    else:
        rep = win.locally_cyclic_check(g, max_pairs=args.max_pairs)
        ok = rep.verdict
        report.update({
            "verdict": ok,
            "pairs_checked": rep.pairs_checked,
            "no_common_root": [_labels(g, p) for p in rep.no_common_root[:10]],
            "trivial_intersection": [_labels(g, p) for p in rep.trivial_intersection[:10]],
        })
    print(json.dumps(report, indent=1))
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="powgraph", description="Power graphs of groups and directed reconstruction.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write the Z±-power graph of a group spec")
    p.add_argument("spec", help="group spec file, '-' for stdin, or inline JSON")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--dot", action="store_true", help="also write OUT with a .dot suffix")
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("analyze", help="center case and class table of an undirected graph")
    p.add_argument("graph")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("reconstruct", help="orient an undirected finite-order component")
    p.add_argument("graph")
    p.add_argument("-o", "--out")
    p.add_argument("--plan", help="write the orientation plan here")
    p.add_argument("--dot", action="store_true")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="reconstruct one group's graph and compare with the oracle")
    p.add_argument("spec")
    p.add_argument("--seed", type=int, help="relabel the graph with this seed first")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("corpus", help="verify a manifest (default corpus if omitted)")
    p.add_argument("manifest", nargs="?")
    p.add_argument("--report")
    p.add_argument("--threads", type=int)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("window", help="run an infinite-order experiment on a window model")
    p.add_argument("spec")
    p.add_argument("--check", choices=WINDOW_CHECKS, required=True)
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--tau", type=int, default=win.DEFAULT_TAU)
    p.add_argument("--guard", type=int, default=win.DEFAULT_GUARD)
    p.add_argument("--max-pairs", type=int)
    p.set_defaults(func=cmd_window)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InvalidSpec, IdentityArgument, WindowTooSmall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PowGraphError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
