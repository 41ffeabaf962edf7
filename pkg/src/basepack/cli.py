"""Command-line entry point.

Subcommands compose over JSON on stdin/stdout so reductions chain in
shell pipes.  Exit codes: 0 = yes/ok, 1 = no/failed check, 2 =
usage/format error, 3 = resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .core import ResourceCapExceeded, UniverseMismatch, check_independence_axioms
from .adversary import build_adversary, count_parity_hiding_sets, run_indistinguishability
from .constructions import matroid_from_descriptor
from .formats import (
    FormatError,
    dump_instance,
    load_certificate,
    load_instance,
    parse_arc_list,
    parse_bipartite,
    parse_dimacs,
    read_json,
    read_text,
)
from .gadget import (
    DEFAULT_LABELING,
    BlockLabeling,
    build_gadget,
    search_block_labeling,
    verify_gadget,
)
from .graphs import BipartiteGraph, Digraph
from .instances import ModularTreesInstance
from .reductions import (
    CertificateRejected,
    even_factor_to_mod4_factor,
    mod4_factor_to_parity_bases,
    modular_to_common_bases,
    naesat_to_modular_trees,
    to_partition_matroid_form,
)
from .solvers import (
    PROBLEMS,
    solve_common_bases,
    solve_mod4_two_factor,
    solve_modular_bases,
    solve_modular_trees,
    solve_naesat,
    solve_parity_bases,
    solve_perfect_even_factor,
    verify_certificate,
)

EXIT_YES = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def _emit(data: dict, pretty: bool = False) -> None:
    print(json.dumps(data, indent=2 if pretty else None))


def _load_problem_instance(problem: str, raw: str):
    if problem == "naesat":
        formula, warnings = parse_dimacs(raw)
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        return formula
    stripped = raw.lstrip()
    if problem == "even-factor":
        if stripped.startswith("{"):
            inst = load_instance(json.loads(raw))
            if not isinstance(inst, Digraph):
                raise FormatError("even-factor expects a digraph")
            return inst
        return parse_arc_list(raw)
    if problem == "mod4-2factor":
        if stripped.startswith("{"):
            inst = load_instance(json.loads(raw))
            if not isinstance(inst, BipartiteGraph):
                raise FormatError("mod4-2factor expects a bipartite graph")
            return inst
        return parse_bipartite(raw)
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return load_instance(data)


def _solve(problem: str, instance, cap):
    kwargs = {} if cap is None else {"cap": cap}
    if problem == "common-bases":
        return solve_common_bases(instance, **kwargs)
    if problem == "modular-bases":
        return solve_modular_bases(instance)
    if problem == "parity-bases":
        return solve_parity_bases(instance)
    if problem == "modular-trees":
        return solve_modular_trees(instance)
    if problem == "naesat":
        return solve_naesat(instance, **kwargs)
    if problem == "even-factor":
        return solve_perfect_even_factor(instance, **kwargs)
    if problem == "mod4-2factor":
        return solve_mod4_two_factor(instance, **kwargs)
    raise FormatError(f"unknown problem {problem!r}")


def cmd_build(args) -> int:
    data = read_json(args.input, sys.stdin)
    instance = load_instance(data)
    _emit(dump_instance(instance), args.pretty)
    return EXIT_YES


def cmd_reduce(args) -> int:
    raw = read_text(args.input, sys.stdin)
    rule = args.rule
    if rule == "r1":
        inst = load_instance(json.loads(raw))
        if isinstance(inst, ModularTreesInstance):
            inst = inst.to_modular_instance()
        red = modular_to_common_bases(inst)
        _emit(dump_instance(red.instance, red.provenance), args.pretty)
        return EXIT_YES
    if rule == "r2":
        formula, warnings = parse_dimacs(raw)
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        red = naesat_to_modular_trees(formula)
        _emit(dump_instance(red.instance, red.provenance), args.pretty)
        return EXIT_YES
    if rule == "r3":
        digraph = (
            load_instance(json.loads(raw)) if raw.lstrip().startswith("{") else parse_arc_list(raw)
        )
        red = even_factor_to_mod4_factor(digraph)
        _emit(dump_instance(red.graph, red.provenance), args.pretty)
        return EXIT_YES
    if rule == "r4":
        graph = (
            load_instance(json.loads(raw)) if raw.lstrip().startswith("{") else parse_bipartite(raw)
        )
        red = mod4_factor_to_parity_bases(graph)
        if red is None:
            _emit({"schema": "verdict/1", "answer": "NO",
                   "reason": "sides of unequal size admit no 2-factor"})
            return EXIT_NO
        _emit(dump_instance(red.instance, red.provenance), args.pretty)
        return EXIT_YES
    if rule == "r5":
        inst = load_instance(json.loads(raw))
        red = to_partition_matroid_form(inst)
        _emit(dump_instance(red.instance, red.provenance), args.pretty)
        return EXIT_YES
    raise FormatError(f"unknown rule {rule!r}")


def cmd_solve(args) -> int:
    raw = read_text(args.input, sys.stdin)
    instance = _load_problem_instance(args.problem, raw)
    certificate = _solve(args.problem, instance, args.cap)
    if certificate is None:
        _emit({"schema": "verdict/1", "answer": "NO"})
        return EXIT_NO
    _emit(certificate.to_json(), args.pretty)
    return EXIT_YES


def cmd_verify(args) -> int:
    raw = read_text(args.instance, sys.stdin)
    instance = _load_problem_instance(args.problem, raw)
    cert_data = read_json(args.certificate, sys.stdin)
    certificate = load_certificate(args.problem, cert_data, instance)
    result = verify_certificate(args.problem, instance, certificate)
    if result.ok:
        _emit({"schema": "verdict/1", "answer": "VALID"})
        return EXIT_YES
    _emit({"schema": "verdict/1", "answer": "INVALID", "reason": result.reason})
    return EXIT_NO


def cmd_gadget(args) -> int:
    if args.action == "search":
        labeling = search_block_labeling()
        _emit(labeling.to_json(), args.pretty)
        return EXIT_YES
    labeling = DEFAULT_LABELING
    if args.labeling:
        labeling = BlockLabeling.from_json(read_json(args.labeling, sys.stdin))
    pair = build_gadget(labeling, args.ell)
    cert = verify_gadget(pair, workers=args.threads)
    _emit(cert.to_json(), args.pretty)
    return EXIT_YES if cert.ok else EXIT_NO


def cmd_adversary(args) -> int:
    pair = build_adversary(args.t)
    if args.solver == "parity-sweep":
        def solver(matroid):
            from .instances import ParityInstance

            return solve_parity_bases(ParityInstance(matroid, pair.pairing))
    elif args.solver == "size-order":
        def solver(matroid):
            n = matroid.ground.size
            masks = sorted(range(1 << n), key=lambda m: (m.bit_count(), m))
            for m in masks:
                matroid.indep_mask(m)
            return None
    elif args.solver == "pair-avoider":
        def solver(matroid):
            n = matroid.ground.size
            for m in range(1 << n):
                if m.bit_count() != 2 * args.t:
                    matroid.indep_mask(m)
            return None
    else:
        raise FormatError(f"unknown solver {args.solver!r}")
    report = run_indistinguishability(pair, solver, hidden=args.hidden)
    data = report.to_json()
    data["candidate_hidden_sets"] = count_parity_hiding_sets(args.t)
    _emit(data, args.pretty)
    return EXIT_YES


def cmd_axioms(args) -> int:
    data = read_json(args.input, sys.stdin)
    descriptor = data.get("matroid", data) if isinstance(data, dict) else data
    matroid = matroid_from_descriptor(descriptor)
    kwargs = {} if args.cap is None else {"cap": args.cap}
    report = check_independence_axioms(matroid, **kwargs)
    _emit(
        {
            "schema": "axiom-report/1",
            "ok": report.ok,
            "checks": [
                {"axiom": c.name, "passed": c.passed,
                 "witness": [sorted(w) for w in c.witness] if c.witness else None}
                for c in report.checks
            ],
        },
        args.pretty,
    )
    return EXIT_YES if report.ok else EXIT_NO


def cmd_emit_dot(args) -> int:
    if args.gadget_ell:
        pair = build_gadget(DEFAULT_LABELING, args.gadget_ell)
        print(pair.first_graph.to_dot("first"))
        print(pair.second_graph.to_dot("second"))
        return EXIT_YES
    data = read_json(args.input, sys.stdin)
    instance = load_instance(data)
    if isinstance(instance, ModularTreesInstance):
        print(instance.graph.to_dot())
    elif isinstance(instance, (BipartiteGraph, Digraph)):
        print(instance.to_dot())
    else:
        raise FormatError("emit-dot expects a graph-backed instance")
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="basepack",
        description="Matroid base-packing toolkit: constructions, reductions, solvers.",
    )
    parser.add_argument("--pretty", action="store_true", help="indent JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="validate and normalize an instance JSON")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("reduce", help="transform an instance (r1..r5)")
    p.add_argument("--rule", required=True, choices=["r1", "r2", "r3", "r4", "r5"])
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="run a brute-force solver")
    p.add_argument("--problem", required=True, choices=list(PROBLEMS))
    p.add_argument("--cap", type=int, default=None, help="exhaustive size cap override")
    p.add_argument("input", nargs="?", default="-")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a certificate against an instance")
    p.add_argument("--problem", required=True, choices=list(PROBLEMS))
    p.add_argument("--instance", required=True)
    p.add_argument("--certificate", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gadget", help="search or certify the reduction gadget")
    p.add_argument("action", choices=["search", "verify"])
    p.add_argument("--ell", type=int, default=1, help="number of blocks to certify")
    p.add_argument("--labeling", default=None, help="labeling JSON (default: built-in)")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker processes for the sweep")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("adversary", help="run the oracle-query experiment")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--solver", default="parity-sweep",
                   choices=["parity-sweep", "size-order", "pair-avoider"])
    p.add_argument("--hidden", default="relaxed", choices=["strict", "relaxed"])
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("axioms", help="exhaustively check the independence axioms")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--cap", type=int, default=None)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("emit-dot", help="render a graph-backed instance as DOT")
    p.add_argument("input", nargs="?", default="-")
    p.add_argument("--gadget-ell", type=int, default=0,
                   help="render the built-in gadget with this many blocks instead")
    p.set_defaults(func=cmd_emit_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ResourceCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (FormatError, CertificateRejected, UniverseMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
