"""Batch command-line front end.

Exit codes: 0 success, 1 property or equivalence failure, 2 usage or
input error, 3 cap or budget refusal. Diagnostics go to stderr; results
meant for scripting (counts, orders, verdicts) go to stdout.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import circuit as circuit_mod
from . import cnf as cnf_mod
from . import compiler as compiler_mod
from . import dpll as dpll_mod
from . import generators
from . import hypergraph as hg_mod
from . import lowerbounds as lb_mod
from .errors import (
    BudgetExceededError,
    CapExceededError,
    DimacsParseError,
    NnfParseError,
    NotBetaAcyclicError,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_REFUSED = 3


def _read_text(path: str) -> str:
    with open(path, "r", encoding="ascii") as handle:
        return handle.read()


def _load_formula(path: str) -> cnf_mod.CnfFormula:
    return cnf_mod.parse_dimacs(_read_text(path))


def _load_order(path: str) -> hg_mod.EliminationOrder:
    vertices = [int(line.strip()) for line in _read_text(path).splitlines() if line.strip()]
    return hg_mod.EliminationOrder(vertices)


def _counting_set(formula: cnf_mod.CnfFormula) -> frozenset[int]:
    declared = formula.declared_variables or 0
    top = max(max(formula.variables, default=0), declared)
    return frozenset(range(1, top + 1))


def _order_for(formula: cnf_mod.CnfFormula, args) -> hg_mod.EliminationOrder | None:
    if getattr(args, "order", None):
        return _load_order(args.order)
    return None


def cmd_check(args) -> int:
    formula = _load_formula(args.formula)
    if formula.has_empty_clause():
        print("beta-acyclic: yes (degenerate, empty clause)")
        return EXIT_OK
    found = hg_mod.beta_elimination_order(cnf_mod.hypergraph_of(formula))
    if isinstance(found, hg_mod.NotBetaAcyclic):
        print("beta-acyclic: no")
        print(f"stuck at vertices {sorted(found.stuck_vertices)}", file=sys.stderr)
        return EXIT_FAIL
    print("beta-acyclic: yes")
    print("order: " + " ".join(str(v) for v in found.sequence))
    return EXIT_OK


def cmd_order(args) -> int:
    formula = _load_formula(args.formula)
    found = hg_mod.beta_elimination_order(cnf_mod.hypergraph_of(formula))
    if isinstance(found, hg_mod.NotBetaAcyclic):
        print(f"not beta-acyclic: stuck at {sorted(found.stuck_vertices)}", file=sys.stderr)
        return EXIT_FAIL
    for v in found.sequence:
        print(v)
    return EXIT_OK


def cmd_compile(args) -> int:
    formula = _load_formula(args.formula)
    circuit, report = compiler_mod.compile_cnf(formula, _order_for(formula, args))
    circuit_mod.write_nnf_file(circuit, args.output)
    if args.json:
        print(json.dumps(report.to_dict(), sort_keys=True))
    else:
        print(
            f"gates={report.gates} fanin={report.and_fanin_max} "
            f"size={report.formula_size} components={report.components}",
            file=sys.stderr,
        )
    return EXIT_OK


def cmd_count(args) -> int:
    formula = _load_formula(args.formula)
    over = _counting_set(formula)
    if args.method == "brute":
        n = cnf_mod.brute_force_count(formula, over, cap=args.cap_vars)
    elif args.method == "compile":
        circuit, _ = compiler_mod.compile_cnf(formula, _order_for(formula, args))
        n = circuit_mod.count_models(circuit, over)
    else:
        strategy = dpll_mod.OrderStrategy.lexicographic()
        if args.method == "dpll":
            if not formula.has_empty_clause() and formula.clauses:
                graph = cnf_mod.hypergraph_of(formula)
                if hg_mod.is_beta_acyclic(graph):
                    strategy = dpll_mod.OrderStrategy.reverse_beta_elimination()
        count, _ = dpll_mod.count_dpll(formula, strategy, budget=args.budget)
        n = count << (len(over) - len(formula.variables))
    print(n)
    return EXIT_OK


def cmd_verify(args) -> int:
    circuit = circuit_mod.read_nnf_file(args.circuit)
    ok_dec, v1 = circuit_mod.check_decomposable(circuit)
    ok_gate, v2 = circuit_mod.check_decision(circuit)
    failures = []
    if not ok_dec:
        failures.append(f"decomposability: gate {v1.gate}: {v1.reason}")
    if not ok_gate:
        failures.append(f"decision: gate {v2.gate}: {v2.reason}")
    if args.against:
        formula = _load_formula(args.against)
        if not circuit_mod.equivalent_to_formula(circuit, formula, cap=args.cap_vars):
            failures.append("equivalence: circuit disagrees with the formula")
    for line in failures:
        print(line, file=sys.stderr)
    print("ok" if not failures else "failed")
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_dpll(args) -> int:
    formula = _load_formula(args.formula)
    if args.strategy == "reverse-beta":
        strategy = dpll_mod.OrderStrategy.reverse_beta_elimination()
    else:
        strategy = dpll_mod.OrderStrategy.lexicographic()
    count, stats = dpll_mod.count_dpll(formula, strategy, budget=args.budget)
    if args.trace:
        trace = dpll_mod.trace_to_circuit(formula, strategy, budget=args.budget)
        circuit_mod.write_nnf_file(trace, args.trace)
    print(count)
    if args.json:
        print(json.dumps(stats.to_dict(), sort_keys=True))
    else:
        print(json.dumps(stats.to_dict(), sort_keys=True), file=sys.stderr)
    return EXIT_OK


def cmd_hat(args) -> int:
    formula = _load_formula(args.formula)
    widened = lb_mod.hat(formula)
    if args.output:
        cnf_mod.write_dimacs_file(widened, args.output)
    else:
        sys.stdout.write(cnf_mod.write_dimacs(widened))
    preserved = lb_mod.hat_preserves_beta(formula)
    print(f"beta-acyclicity preserved: {'yes' if preserved else 'no'}", file=sys.stderr)
    return EXIT_OK if preserved else EXIT_FAIL


def cmd_mimw(args) -> int:
    graph = lb_mod.parse_graph(_read_text(args.graph))
    if args.tree:
        tree = lb_mod.parse_branch_decomposition(_read_text(args.tree).strip())
        width = lb_mod.mimw_of_decomposition(graph, tree, cap=args.cap_vars)
        print(width)
    else:
        width, tree = lb_mod.exact_mimw(graph)
        print(width)
        if tree is not None:
            print(lb_mod.write_branch_decomposition(tree))
    return EXIT_OK


def cmd_rectcover(args) -> int:
    formula = _load_formula(args.formula)
    left = frozenset(int(v) for v in args.left.split(",") if v)
    over = _counting_set(formula)
    right = over - left
    print(lb_mod.min_rectangle_cover(formula, left, right, cap=args.cap_vars))
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s]
    formulas = generators.named_family(args.family, sizes, seed=args.seed)
    rows = compiler_mod.compile_stats_sweep(formulas)
    for row in rows:
        if args.json:
            print(json.dumps(row, sort_keys=True))
        else:
            print(
                f"size={row['formula_size']} gates={row['gates']} "
                f"fanin={row['and_fanin_max']}"
            )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betadnnf",
        description="Compile beta-acyclic CNF to decision-DNNF, count models, "
        "and run width/rectangle experiments.",
    )
    parser.add_argument("--cap-vars", type=int, default=20, metavar="N",
                        help="enumeration cap for semantic checks (default 20)")
    parser.add_argument("--budget", type=int, default=None, metavar="STEPS",
                        help="abort DPLL search after this many steps")
    parser.add_argument("--seed", type=int, default=0, metavar="S",
                        help="seed for generated families")
    parser.add_argument("--json", action="store_true", help="machine-readable reports")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="beta-acyclicity verdict and order")
    p.add_argument("formula")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("order", help="print a beta-elimination order, one vertex per line")
    p.add_argument("formula")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("compile", help="compile CNF into a decision-DNNF file")
    p.add_argument("formula")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--order", metavar="FILE", help="explicit elimination order file")
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("count", help="model count over the declared variables")
    p.add_argument("formula")
    p.add_argument("--method", choices=("compile", "dpll", "brute"), default="compile")
    p.add_argument("--order", metavar="FILE", help="explicit elimination order file")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", help="structural checks, optionally against a CNF")
    p.add_argument("circuit")
    p.add_argument("--against", metavar="FILE.cnf")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dpll", help="exhaustive DPLL count with statistics")
    p.add_argument("formula")
    p.add_argument("--strategy", choices=("reverse-beta", "lex"), default="lex")
    p.add_argument("--trace", metavar="FILE.nnf", help="write the trace circuit")
    p.set_defaults(func=cmd_dpll)

    p = sub.add_parser("hat", help="widen every clause with a fresh variable")
    p.add_argument("formula")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_hat)

    p = sub.add_parser("mimw", help="width of a decomposition, or the exact minimum")
    p.add_argument("graph", help="edge-list file")
    p.add_argument("--tree", metavar="FILE", help="branch decomposition file")
    p.set_defaults(func=cmd_mimw)

    p = sub.add_parser("rectcover", help="exact minimum rectangle cover size")
    p.add_argument("formula")
    p.add_argument("--left", required=True, metavar="V1,V2,...",
                   help="variables on the left side of the split")
    p.set_defaults(func=cmd_rectcover)

    p = sub.add_parser("bench", help="compile a formula family and tabulate stats")
    p.add_argument("--family", choices=("chain", "random"), default="chain")
    p.add_argument("--sizes", default="10,20,40,80", metavar="N1,N2,...")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CapExceededError, BudgetExceededError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except NotBetaAcyclicError as exc:
        print(f"not beta-acyclic: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (DimacsParseError, NnfParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
