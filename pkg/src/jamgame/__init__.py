"""Jamming attacks on P2P wireless networks: SINR topology modeling,
attack-cost pricing, the scan-vs-jam stochastic game, and maxmin
category selection, with a scenario/sweep harness on top."""

from .costs import (CATEGORIES, CONNECTIVITY, THROUGHPUT, CostVector,
                    ascending_view, connectivity_cost_vector,
                    pairwise_throughput, throughput_cost_vector)
from .duration import (CATEGORY_LABELS, MIXED, PURE, CategorySelection,
                       DurationMatrix, duration_matrix, expected_duration,
                       solve_duration_game)
from .game import (CASE_A, CASE_B, CASE_C, CERTIFY_TOL, ORACLE_FALLBACK,
                   BracketError, ConvergenceError, GameParameters,
                   GameSolution, ShapleyReport, payoff_matrix,
                   solve_closed_form, solve_matrix_game, solve_one_shot,
                   solve_oracle, value_by_bisection, value_by_iteration,
                   verify_shapley)
from .network import (GeometryError, JammerModel, NetworkModel, TopologyGraph,
                      attackable_set, build_topology, jammed_sinr, link_exists,
                      required_jamming_power, throughput)
from .scenario import Scenario, ScenarioError, SweepSpec, load_scenario, parse_scenario
from .spectral import (EIG_ZERO_TOL, component_count, fiedler_value,
                       laplacian, laplacian_spectrum, remove_node)
from .sweep import (PRESET_NAMES, ResultTable, emit_csv, figure_preset,
                    format_cell, preset_text, run_sweep, table_to_csv_text)

__version__ = "0.1.0"

__all__ = [
    "CASE_A", "CASE_B", "CASE_C", "CATEGORIES", "CATEGORY_LABELS",
    "CERTIFY_TOL", "CONNECTIVITY", "EIG_ZERO_TOL", "MIXED",
    "ORACLE_FALLBACK", "PURE", "THROUGHPUT",
    "BracketError", "CategorySelection", "ConvergenceError", "CostVector",
    "DurationMatrix", "GameParameters", "GameSolution", "GeometryError",
    "JammerModel", "NetworkModel", "PRESET_NAMES", "ResultTable", "Scenario",
    "ScenarioError", "ShapleyReport", "SweepSpec", "TopologyGraph",
    "ascending_view", "attackable_set", "build_topology", "component_count",
    "connectivity_cost_vector", "duration_matrix", "emit_csv",
    "expected_duration", "fiedler_value", "figure_preset", "format_cell",
    "jammed_sinr",
    "laplacian", "laplacian_spectrum", "link_exists", "load_scenario",
    "pairwise_throughput", "parse_scenario", "payoff_matrix", "preset_text",
    "remove_node", "required_jamming_power", "run_sweep",
    "solve_closed_form", "solve_duration_game", "solve_matrix_game",
    "solve_one_shot", "solve_oracle", "table_to_csv_text",
    "throughput", "throughput_cost_vector", "value_by_bisection",
    "value_by_iteration", "verify_shapley",
]
