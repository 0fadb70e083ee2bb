"""Command-line harness.

Subcommands:
  solve    solve one scenario (both categories on a network scenario) and
           print a JSON solution document
  sweep    evaluate the scenario's sweep block and emit CSV
  preset   print a bundled scenario file verbatim
  verify   re-run equilibrium certification on a solution document

Exit codes: 0 success; 1 invalid scenario or solution input; 2
certification failure (verify, or solve/sweep under --strict); 3 I/O
failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from .costs import (CATEGORIES, CONNECTIVITY, THROUGHPUT, CostVector,
                    connectivity_cost_vector, throughput_cost_vector)
from .duration import duration_matrix, solve_duration_game
from .game import GameParameters, GameSolution, verify_shapley
from .network import attackable_set, build_topology
from .scenario import Scenario, ScenarioError, load_scenario
from .sweep import (PRESET_NAMES, preset_text, run_sweep, table_to_csv_text,
                    _solve)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CERTIFICATION = 2
EXIT_IO = 3

SOLUTION_SCHEMA_VERSION = 1


def _category_entry(costs: CostVector, params: GameParameters, sol) -> dict:
    return {
        "lambda_bar": [float(v) for v in costs.values],
        "attackable": (None if costs.attackable is None
                       else [int(i) for i in costs.attackable]),
        "C_h": params.hiding_cost,
        "gamma": params.gamma,
        "value": sol.value,
        "case_label": sol.case_label,
        "support_m": sol.support_m,
        "k_index": sol.k_index,
        "residual": sol.residual,
        "iterations": sol.iterations,
        "p": [float(v) for v in sol.p],
        "q": [float(v) for v in sol.q],
    }


def solution_document(scenario: Scenario, *, oracle_only: bool = False,
                      tol: float = 1e-10, certify_tol: float = 1e-8) -> dict:
    """Solve the scenario at its base parameters (any sweep block is
    ignored here) and assemble the JSON-ready solution document."""
    doc: dict = {"schema_version": SOLUTION_SCHEMA_VERSION,
                 "mode": scenario.mode, "gamma": scenario.gamma}
    if scenario.mode == "costs":
        costs = scenario.injected_costs()
        params = scenario.game_parameters(scenario.injected_category)
        sol = _solve(costs, params, oracle_only=oracle_only, tol=tol,
                     certify_tol=certify_tol)
        doc["categories"] = {scenario.injected_category:
                             _category_entry(costs, params, sol)}
        return doc

    model = scenario.network_model()
    graph = build_topology(model)
    jammer = scenario.jammer_model()
    attackable = None
    if jammer is not None:
        reachable = attackable_set(model, jammer)
        if not reachable:
            raise ValueError("attackable set is empty under the jammer budget")
        attackable = tuple(sorted(reachable))
    cost_c = connectivity_cost_vector(graph)
    cost_t = throughput_cost_vector(
        model, links_only=scenario.throughput_on_links_only, graph=graph)
    if attackable is not None:
        cost_c = replace(cost_c, attackable=attackable)
        cost_t = replace(cost_t, attackable=attackable)
    params_c = scenario.game_parameters(CONNECTIVITY)
    params_t = scenario.game_parameters(THROUGHPUT)
    sol_c = _solve(cost_c, params_c, oracle_only=oracle_only, tol=tol,
                   certify_tol=certify_tol)
    sol_t = _solve(cost_t, params_t, oracle_only=oracle_only, tol=tol,
                   certify_tol=certify_tol)
    matrix = duration_matrix(sol_c, sol_t, scenario.gamma)
    selection = solve_duration_game(matrix)

    doc["network"] = {
        "edge_count": graph.edge_count,
        "edges": [[i, j] for i, j in graph.canonical_edges()],
        "attackable": None if attackable is None else list(attackable),
    }
    doc["categories"] = {
        CONNECTIVITY: _category_entry(cost_c, params_c, sol_c),
        THROUGHPUT: _category_entry(cost_t, params_t, sol_t),
    }
    doc["duration"] = {
        "entries": [[float(v) for v in row] for row in matrix.entries],
        "kind": selection.kind,
        "cell": list(selection.cell) if selection.cell is not None else None,
        "x_c": selection.x_c, "x_t": selection.x_t,
        "y_c": selection.y_c, "y_t": selection.y_t,
        "game_value": selection.game_value,
    }
    return doc


def verify_document(doc: dict, tol: float) -> tuple[bool, list[str]]:
    """Re-certify every category solution in a solution document."""
    if not isinstance(doc, dict) or not isinstance(doc.get("categories"), dict):
        raise ValueError("solution document lacks a 'categories' object")
    lines = []
    all_passed = True
    for category, entry in doc["categories"].items():
        try:
            costs = CostVector(
                values=np.asarray(entry["lambda_bar"], dtype=float),
                category=category if category in CATEGORIES else CONNECTIVITY,
                attackable=(None if entry.get("attackable") is None
                            else tuple(entry["attackable"])))
            params = GameParameters(hiding_cost=float(entry["C_h"]),
                                    gamma=float(entry["gamma"]))
            sol = GameSolution(
                value=float(entry["value"]),
                p=np.asarray(entry["p"], dtype=float),
                q=np.asarray(entry["q"], dtype=float),
                case_label=str(entry["case_label"]),
                support_m=int(entry["support_m"]),
                k_index=entry.get("k_index"),
                residual=math.nan, iterations=int(entry["iterations"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(
                f"solution document category '{category}' is malformed: {exc}"
            ) from exc
        report = verify_shapley(costs, params, sol, tol=tol)
        status = "PASS" if report.passed else "FAIL"
        lines.append(
            f"{category}: residual={report.residual:.3e} "
            f"(rows={report.row_residual:.3e}, cols={report.col_residual:.3e}, "
            f"sums={report.sum_residual:.3e}) tol={tol:g} {status}")
        all_passed = all_passed and report.passed
    return all_passed, lines


def _write_text(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jamgame",
        description="Scan-vs-jam stochastic game toolkit: solve scenarios, "
                    "run parameter sweeps, emit bundled presets, and verify "
                    "solution certificates.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_solver_flags(p):
        p.add_argument("--tol", type=float, default=1e-10,
                       help="oracle value-iteration tolerance (default 1e-10)")
        p.add_argument("--certify-tol", type=float, default=1e-8,
                       help="equilibrium certification tolerance (default 1e-8)")
        p.add_argument("--oracle-only", action="store_true",
                       help="skip the closed form; solve by value iteration only")
        p.add_argument("--strict", action="store_true",
                       help="exit 2 if any solution fails certification")

    p_solve = sub.add_parser("solve", help="solve one scenario, print the "
                                           "solution document")
    p_solve.add_argument("scenario", help="scenario JSON file")
    p_solve.add_argument("--out", help="write the solution JSON to this path")
    add_solver_flags(p_solve)

    p_sweep = sub.add_parser("sweep", help="run the scenario's sweep, emit CSV")
    p_sweep.add_argument("scenario", help="scenario JSON file")
    p_sweep.add_argument("--out", help="write CSV to this path (default stdout)")
    add_solver_flags(p_sweep)

    p_preset = sub.add_parser("preset", help="print a bundled scenario")
    p_preset.add_argument("name", choices=PRESET_NAMES)
    p_preset.add_argument("--out", help="write the scenario to this path")

    p_verify = sub.add_parser("verify", help="re-certify a solution document")
    p_verify.add_argument("solution", help="solution JSON file from 'solve'")
    p_verify.add_argument("--tol", type=float, default=1e-8,
                          help="certification tolerance (default 1e-8)")
    return parser


def _cmd_solve(args) -> int:
    scenario = load_scenario(args.scenario)
    doc = solution_document(scenario, oracle_only=args.oracle_only,
                            tol=args.tol, certify_tol=args.certify_tol)
    _write_text(json.dumps(doc, indent=2) + "\n", args.out)
    if args.strict:
        worst = max(entry["residual"] for entry in doc["categories"].values())
        if not worst <= args.certify_tol:
            print(f"certification failure: worst residual {worst:.3e} > "
                  f"{args.certify_tol:g}", file=sys.stderr)
            return EXIT_CERTIFICATION
    return EXIT_OK


def _cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    table = run_sweep(scenario, oracle_only=args.oracle_only, tol=args.tol,
                      certify_tol=args.certify_tol)
    _write_text(table_to_csv_text(table), args.out)
    if args.strict:
        failures = []
        if "error" in table.columns:
            failures += [e for e in table.column("error") if e]
        for col in table.columns:
            if col.startswith("residual"):
                failures += [r for r in table.column(col)
                             if r is not None and not r <= args.certify_tol]
        if failures:
            print(f"{len(failures)} cell(s) failed certification or errored",
                  file=sys.stderr)
            return EXIT_CERTIFICATION
    return EXIT_OK


def _cmd_preset(args) -> int:
    _write_text(preset_text(args.name), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    try:
        with open(args.solution, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{args.solution}: not valid JSON: {exc}") from exc
    passed, lines = verify_document(doc, args.tol)
    for line in lines:
        print(line)
    return EXIT_OK if passed else EXIT_CERTIFICATION


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"solve": _cmd_solve, "sweep": _cmd_sweep,
               "preset": _cmd_preset, "verify": _cmd_verify}[args.command]
    try:
        return handler(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
