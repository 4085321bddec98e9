"""Command line driver: every library capability behind one subcommand.

Exit codes: 0 = yes/success, 1 = no (negative recognition, infeasible or
over-budget solving), 2 = input error.  ``--json`` emits one JSON line
with the fields {command, input, result, witnesses, cost, runtime_ms}.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import formats
from .digraph import COMPLETION, DELETION, EDITING
from .errors import BmgError, BudgetExceeded, Infeasible
from .generators import perturb, random_colored_tree, x3c_gadget, cgc_gadget
from .ilp import GENERAL, TWO_COLOR, build_model, export_lp, solve_exact
from .recognition import (enumerate_forbidden_classes, is_binary_explainable,
                          is_2bmg_via_forbidden, recognize_bmg,
                          recognize_bmg_via_aho, recognize_bmg_via_axioms,
                          scan_forbidden_subgraphs, scan_hourglasses)
from .trees import bmg_from_tree


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _report(args, result, witnesses=None, cost=None, started=None):
    if getattr(args, "json", False):
        record = {
            "command": args.command,
            "input": getattr(args, "file", None),
            "result": result,
            "witnesses": witnesses,
            "cost": cost,
            "runtime_ms": None if started is None else round((time.monotonic() - started) * 1000, 3),
        }
        print(json.dumps(record, sort_keys=True))


def _cmd_recognize(args) -> int:
    started = time.monotonic()
    graph = formats.parse_graph(_read_input(args.file))
    tree = None
    if args.method == "mtt":
        result = recognize_bmg(graph)
        is_bmg, reason = result.is_bmg, result.failure_reason
        tree = result.explaining_tree
    elif args.method == "aho":
        is_bmg, reason = recognize_bmg_via_aho(graph), None
    elif args.method == "forbidden":
        is_bmg, reason = is_2bmg_via_forbidden(graph), None
    else:
        is_bmg, reason = recognize_bmg_via_axioms(graph), None
    if args.tree_out:
        if tree is None:
            print("no explaining tree available (use --method mtt on a BMG)", file=sys.stderr)
        else:
            with open(args.tree_out, "w", encoding="utf-8") as handle:
                handle.write(formats.serialize_tree(tree) + "\n")
    if not args.json:
        print("BMG" if is_bmg else f"not a BMG ({reason or 'characterization failed'})")
    _report(args, {"is_bmg": is_bmg, "reason": reason}, started=started)
    return 0 if is_bmg else 1


def _cmd_modify(args) -> int:
    started = time.monotonic()
    graph = formats.parse_graph(_read_input(args.file))
    mode = {"edit": EDITING, "delete": DELETION, "complete": COMPLETION}[args.command]
    if not args.exact and not args.export_lp:
        raise BmgError("nothing to do: pass --exact and/or --export-lp PATH")
    if args.export_lp:
        formulation = args.formulation
        if formulation == "auto":
            formulation = TWO_COLOR if graph.num_colors == 2 else GENERAL
        model = build_model(graph, mode, formulation)
        with open(args.export_lp, "w", encoding="utf-8") as handle:
            handle.write(export_lp(model))
        if not args.json:
            print(f"wrote {len(model.constraints)} constraints, "
                  f"{len(model.free_variables())} binary variables to {args.export_lp}")
    if not args.exact:
        _report(args, {"exported": args.export_lp}, started=started)
        return 0
    try:
        solution = solve_exact(graph, mode, budget=args.budget)
    except (Infeasible, BudgetExceeded) as exc:
        if not args.json:
            print(f"no solution: {exc}")
        _report(args, {"feasible": False, "message": str(exc)}, started=started)
        return 1
    if not args.json:
        print(f"cost {solution.optimal_cost}")
        for x, y in solution.edit_set.sorted_pairs():
            op = "D" if (x, y) in graph.arcs else "A"
            print(f"{op} {x} {y}")
    _report(args, {"feasible": True,
                   "edits": [list(p) for p in solution.edit_set.sorted_pairs()],
                   "verified": solution.proof},
            cost=solution.optimal_cost, started=started)
    return 0


def _cmd_binary_explainable(args) -> int:
    started = time.monotonic()
    graph = formats.parse_graph(_read_input(args.file))
    flag = is_binary_explainable(graph)
    if not args.json:
        print("binary-explainable" if flag else "not binary-explainable")
    _report(args, {"binary_explainable": flag}, started=started)
    return 0 if flag else 1


def _cmd_scan(args) -> int:
    started = time.monotonic()
    graph = formats.parse_graph(_read_input(args.file))
    kinds = [k.strip().lower() for k in args.kinds.split(",") if k.strip()]
    unknown = set(kinds) - {"f1", "f2", "f3", "hourglass"}
    if unknown:
        raise BmgError(f"unknown scan kinds: {sorted(unknown)}")
    witnesses = []
    wanted = tuple(k.upper() for k in kinds if k != "hourglass")
    if wanted:
        witnesses.extend(scan_forbidden_subgraphs(graph, kinds=wanted))
    if "hourglass" in kinds:
        witnesses.extend(scan_hourglasses(graph))
    if not args.json:
        for w in witnesses:
            print(" ".join((w.kind,) + w.vertices))
        print(f"# {len(witnesses)} witnesses")
    _report(args, {"count": len(witnesses)},
            witnesses=[[w.kind, *w.vertices] for w in witnesses], started=started)
    return 0


def _cmd_generate(args) -> int:
    started = time.monotonic()
    if args.tree or args.bmg:
        tree = random_colored_tree(args.n, args.colors, args.seed,
                                   multifurcation_p=args.multifurcation)
        if args.tree:
            print(formats.serialize_tree(tree))
            _report(args, {"leaves": tree.n_leaves}, started=started)
        else:
            graph = bmg_from_tree(tree)
            sys.stdout.write(formats.serialize_graph(graph))
            _report(args, {"vertices": graph.n, "arcs": len(graph.arcs)}, started=started)
        return 0
    graph = formats.parse_graph(_read_input(args.file))
    perturbed, edits = perturb(graph, args.flips, args.seed, mode=args.mode)
    sys.stdout.write(formats.serialize_graph(perturbed))
    for x, y in edits.sorted_pairs():
        print(f"# flipped {x} {y}")
    _report(args, {"flips": [list(p) for p in edits.sorted_pairs()]}, started=started)
    return 0


def _cmd_gadget(args) -> int:
    started = time.monotonic()
    if args.x3c:
        instance = formats.parse_x3c(_read_input(args.x3c))
        gadget = x3c_gadget(instance, scale=args.scale)
    else:
        instance = formats.parse_cgc(_read_input(args.cgc))
        if args.scale != 1.0:
            raise BmgError("--scale applies to --x3c gadgets only")
        gadget = cgc_gadget(instance)
    sys.stdout.write(formats.serialize_graph(gadget.graph))
    print(f"# k {gadget.k}")
    for key, value in sorted(gadget.constants.items()):
        print(f"# {key} {value}")
    if not gadget.faithful:
        print("# non-faithful scale: reduction guarantees void")
    _report(args, {"vertices": gadget.graph.n, "arcs": len(gadget.graph.arcs),
                   "k": gadget.k, "constants": gadget.constants,
                   "faithful": gadget.faithful}, started=started)
    return 0


def _cmd_catalog(args) -> int:
    started = time.monotonic()
    catalog = enumerate_forbidden_classes()
    summary = (f"f1={catalog.f1_graphs} f2={catalog.f2_graphs} f3={catalog.f3_graphs} "
               f"classes={catalog.f1_f2_iso_classes} overlap={catalog.overlap} "
               f"total={catalog.nonredundant_total}")
    if not args.json:
        print(f"# forbidden-subgraph catalog: {summary}")
        for i, (kinds, graph) in enumerate(catalog.representatives, 1):
            print(f"# class {i} kinds={','.join(sorted(kinds))}")
            sys.stdout.write(formats.serialize_graph(graph))
            print()
    _report(args, {"f1_graphs": catalog.f1_graphs, "f2_graphs": catalog.f2_graphs,
                   "f3_graphs": catalog.f3_graphs,
                   "f1_f2_iso_classes": catalog.f1_f2_iso_classes,
                   "overlap": catalog.overlap,
                   "nonredundant_total": catalog.nonredundant_total}, started=started)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bmg", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_file(p):
        p.add_argument("file", nargs="?", default="-",
                       help="input file ('-' for stdin)")
        p.add_argument("--json", action="store_true", help="emit a JSON report line")

    p = sub.add_parser("recognize", help="decide whether a colored digraph is a BMG")
    add_file(p)
    p.add_argument("--method", choices=("mtt", "aho", "forbidden", "axioms"),
                   default="mtt")
    p.add_argument("--tree-out", metavar="PATH", help="write the explaining tree")

    for name, help_text in (("edit", "minimum arc editing"),
                            ("delete", "minimum arc deletion"),
                            ("complete", "minimum arc completion")):
        p = sub.add_parser(name, help=help_text)
        add_file(p)
        p.add_argument("--exact", action="store_true", help="run the exact solver")
        p.add_argument("--export-lp", metavar="PATH", help="write the ILP in LP format")
        p.add_argument("--formulation", choices=("auto", TWO_COLOR, GENERAL),
                       default="auto")
        p.add_argument("--budget", type=int, default=None, help="maximum edit count")

    p = sub.add_parser("binary-explainable",
                       help="decide whether a BMG has a binary explaining tree")
    add_file(p)

    p = sub.add_parser("scan", help="list forbidden-subgraph witnesses")
    add_file(p)
    p.add_argument("--kinds", default="f1,f2,f3",
                   help="comma list from f1,f2,f3,hourglass")

    p = sub.add_parser("generate", help="random trees, BMGs, and perturbations")
    add_file(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--tree", action="store_true")
    group.add_argument("--bmg", action="store_true")
    group.add_argument("--perturb", action="store_true")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-n", type=int, default=10, help="leaf count")
    p.add_argument("--colors", type=int, default=2)
    p.add_argument("--multifurcation", type=float, default=0.2)
    p.add_argument("--flips", type=int, default=1)
    p.add_argument("--mode", choices=(EDITING, DELETION, COMPLETION), default=EDITING)

    p = sub.add_parser("gadget", help="hardness reduction gadgets")
    p.add_argument("--json", action="store_true")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--x3c", metavar="FILE", help="exact-3-cover instance")
    group.add_argument("--cgc", metavar="FILE", help="chain-graph-completion instance")
    p.add_argument("--scale", type=float, default=1.0,
                   help="shrink gadget sizes (voids the reduction guarantees)")

    p = sub.add_parser("catalog", help="the 17 non-redundant forbidden subgraphs")
    p.add_argument("--json", action="store_true")
    return parser


_HANDLERS = {
    "recognize": _cmd_recognize,
    "edit": _cmd_modify,
    "delete": _cmd_modify,
    "complete": _cmd_modify,
    "binary-explainable": _cmd_binary_explainable,
    "scan": _cmd_scan,
    "generate": _cmd_generate,
    "gadget": _cmd_gadget,
    "catalog": _cmd_catalog,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (BmgError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
