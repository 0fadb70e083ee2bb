"""Experiment sweeps: grid evaluation, result tables, CSV, presets.

run_sweep walks the scenario's parameter grid in declaration order
(itertools.product over the listed values), rebuilds the topology and
both cost vectors per cell, solves both category games and the duration
game, and collects one row per cell.  A failing cell records its error
message in the final column and the run continues; two runs of the same
scenario produce byte-identical CSV.
"""
from __future__ import annotations

import csv
import importlib.resources
import io
import itertools
import json
from dataclasses import dataclass, replace

import numpy as np

from .costs import (CONNECTIVITY, THROUGHPUT, CostVector,
                    connectivity_cost_vector, throughput_cost_vector)
from .duration import duration_matrix, solve_duration_game
from .game import solve_closed_form, solve_oracle, value_by_iteration
from .network import attackable_set, build_topology
from .scenario import (SWEEP_GRID, SWEEP_TRACE, Scenario, ScenarioError,
                       parse_scenario)

PRESET_NAMES = ("fig3", "fig4", "fig5", "fig6", "fig7")


@dataclass(frozen=True)
class ResultTable:
    """Column names plus rows of raw cell values (floats, ints, strings,
    or None for empty); formatting happens at CSV emission."""

    columns: tuple[str, ...]
    rows: tuple[tuple, ...]

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(
                    f"row width {len(row)} != column count {len(self.columns)}")

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


def format_cell(value) -> str:
    """Deterministic cell text: 17 significant digits for floats,
    plain digits for ints, empty for None."""
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def _write_rows(table: ResultTable, fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_cell(v) for v in row])


def emit_csv(table: ResultTable, path) -> None:
    """Write the table as UTF-8 CSV with LF line endings; byte-identical
    for equal tables."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_rows(table, fh)


def table_to_csv_text(table: ResultTable) -> str:
    """The exact text emit_csv would write."""
    buf = io.StringIO()
    _write_rows(table, buf)
    return buf.getvalue()


def _edges_text(graph) -> str:
    return ";".join(f"{i}-{j}" for i, j in graph.canonical_edges())


def _nodes_text(nodes) -> str:
    return ";".join(str(i) for i in sorted(nodes))


def _solve(costs: CostVector, params, *, oracle_only: bool, tol: float,
           certify_tol: float):
    if oracle_only:
        return solve_oracle(costs, params, tol=tol)
    return solve_closed_form(costs, params, oracle_tol=tol,
                             certify_tol=certify_tol)


def _network_columns(names: tuple[str, ...], n: int) -> tuple[str, ...]:
    cols = list(names)
    cols += ["edge_count", "edges", "attackable"]
    for cat in ("connectivity", "throughput"):
        cols += [f"V_{cat}", f"case_{cat}", f"support_{cat}",
                 f"residual_{cat}", f"iterations_{cat}"]
    for vec in ("p_c", "q_c", "p_t", "q_t"):
        cols += [f"{vec}_{i}" for i in range(1, n + 1)]
    cols += ["T_cc", "T_ct", "T_tc", "T_tt",
             "selection_kind", "x_c", "x_t", "y_c", "y_t", "duration_value",
             "error"]
    return tuple(cols)


def _costs_columns(names: tuple[str, ...], n: int) -> tuple[str, ...]:
    cols = list(names)
    cols += ["V", "case_label", "support_m", "residual", "iterations"]
    cols += [f"p_{i}" for i in range(1, n + 1)]
    cols += [f"q_{i}" for i in range(1, n + 1)]
    cols += ["error"]
    return tuple(cols)


def _split_overrides(overrides: dict[str, float]):
    omega = overrides.get("omega")
    gamma = overrides.get("gamma")
    hiding = overrides.get("C_h")
    powers = {int(k[1:]): v for k, v in overrides.items()
              if k not in ("omega", "gamma", "C_h")}
    return omega, gamma, hiding, powers


def _network_cell(scenario: Scenario, overrides: dict[str, float], *,
                  oracle_only: bool, tol: float, certify_tol: float) -> list:
    omega, gamma, hiding, powers = _split_overrides(overrides)
    n = scenario.n
    model = scenario.network_model(omega=omega, power_overrides=powers)
    graph = build_topology(model)
    jammer = scenario.jammer_model()
    if jammer is None:
        attackable = None
        attackable_text = ""
    else:
        reachable = attackable_set(model, jammer)
        if not reachable:
            raise ValueError("attackable set is empty under the jammer budget")
        attackable = tuple(sorted(reachable))
        attackable_text = _nodes_text(reachable)

    cost_c = connectivity_cost_vector(graph)
    cost_t = throughput_cost_vector(
        model, links_only=scenario.throughput_on_links_only, graph=graph)
    if attackable is not None:
        cost_c = replace(cost_c, attackable=attackable)
        cost_t = replace(cost_t, attackable=attackable)

    params_c = scenario.game_parameters(CONNECTIVITY, gamma=gamma,
                                        hiding_cost=hiding)
    params_t = scenario.game_parameters(THROUGHPUT, gamma=gamma,
                                        hiding_cost=hiding)
    sol_c = _solve(cost_c, params_c, oracle_only=oracle_only, tol=tol,
                   certify_tol=certify_tol)
    sol_t = _solve(cost_t, params_t, oracle_only=oracle_only, tol=tol,
                   certify_tol=certify_tol)
    gamma_used = scenario.gamma if gamma is None else gamma
    matrix = duration_matrix(sol_c, sol_t, gamma_used)
    selection = solve_duration_game(matrix)

    cell: list = [graph.edge_count, _edges_text(graph), attackable_text]
    for sol in (sol_c, sol_t):
        cell += [sol.value, sol.case_label, sol.support_m, sol.residual,
                 sol.iterations]
    for vec in (sol_c.p, sol_c.q, sol_t.p, sol_t.q):
        cell += [float(v) for v in vec]
    t = matrix.entries
    cell += [t[0, 0], t[0, 1], t[1, 0], t[1, 1],
             selection.kind, selection.x_c, selection.x_t,
             selection.y_c, selection.y_t, selection.game_value, ""]
    return cell


def _costs_cell(scenario: Scenario, overrides: dict[str, float], *,
                oracle_only: bool, tol: float, certify_tol: float) -> list:
    _, gamma, hiding, _ = _split_overrides(overrides)
    costs = scenario.injected_costs()
    params = scenario.game_parameters(scenario.injected_category, gamma=gamma,
                                      hiding_cost=hiding)
    sol = _solve(costs, params, oracle_only=oracle_only, tol=tol,
                 certify_tol=certify_tol)
    cell: list = [sol.value, sol.case_label, sol.support_m, sol.residual,
                  sol.iterations]
    cell += [float(v) for v in sol.p]
    cell += [float(v) for v in sol.q]
    cell.append("")
    return cell


def run_sweep(scenario: Scenario, *, oracle_only: bool = False,
              tol: float = 1e-10, certify_tol: float = 1e-8) -> ResultTable:
    """Evaluate the scenario's sweep block into a ResultTable.

    Grid sweeps produce one row per parameter combination (declaration
    order, rightmost parameter fastest); trace sweeps produce the
    fixed-point iterate trajectory.  Per-cell failures land in the
    'error' column; only an invalid scenario aborts the run.
    """
    if scenario.sweep is None:
        raise ScenarioError("scenario has no sweep block")
    sweep = scenario.sweep
    if sweep.kind == SWEEP_TRACE:
        costs = scenario.injected_costs()
        params = scenario.game_parameters(scenario.injected_category)
        _, trace = value_by_iteration(costs, params, tol=sweep.tol)
        rows = tuple((i, float(x)) for i, x in enumerate(trace))
        return ResultTable(columns=("iteration", "x"), rows=rows)

    names = tuple(name for name, _ in sweep.parameters)
    grids = [values for _, values in sweep.parameters]
    n = scenario.n
    if scenario.mode == "network":
        columns = _network_columns(names, n)
        cell_fn = _network_cell
    else:
        columns = _costs_columns(names, n)
        cell_fn = _costs_cell

    width = len(columns) - len(names)
    rows = []
    for combo in itertools.product(*grids):
        overrides = dict(zip(names, combo))
        try:
            cell = cell_fn(scenario, overrides, oracle_only=oracle_only,
                           tol=tol, certify_tol=certify_tol)
        except Exception as exc:  # recorded, the sweep continues
            cell = [None] * (width - 1) + [f"{type(exc).__name__}: {exc}"]
        rows.append(tuple(combo) + tuple(cell))
    return ResultTable(columns=columns, rows=tuple(rows))


def preset_text(name: str) -> str:
    """Raw JSON text of a bundled preset (exact file bytes)."""
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    res = importlib.resources.files("jamgame.presets").joinpath(f"{name}.json")
    return res.read_text(encoding="utf-8")


def figure_preset(name: str) -> Scenario:
    """Bundled scenario reproducing one of the reference figures."""
    return parse_scenario(json.loads(preset_text(name)))
