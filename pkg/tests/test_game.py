"""The scan-vs-jam game: closed forms, oracle, scalar procedures, certifier."""
import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import jamgame as jg
from conftest import random_game_instance


def costs_of(*values, attackable=None):
    return jg.CostVector(values=np.array(values, dtype=float),
                         category=jg.CONNECTIVITY, attackable=attackable)


def params_of(c_h, gamma):
    return jg.GameParameters(hiding_cost=c_h, gamma=gamma)


# --- parameters ---------------------------------------------------------------

def test_parameters_reject_bad_gamma():
    with pytest.raises(ValueError):
        params_of(1.0, 1.0)
    with pytest.raises(ValueError):
        params_of(1.0, -0.2)
    with pytest.raises(ValueError):
        params_of(-1.0, 0.5)


def test_parameters_detection_form():
    params = jg.GameParameters.from_detection(2.0, alpha=0.4, delta=0.5)
    assert math.isclose(params.gamma, 0.3, abs_tol=1e-15)
    with pytest.raises(ValueError):
        jg.GameParameters(hiding_cost=1.0, gamma=0.5, alpha=0.4, delta=0.5)
    with pytest.raises(ValueError):
        jg.GameParameters(hiding_cost=1.0, gamma=0.5, alpha=0.4)


# --- stage matrix and LP kernel -------------------------------------------------

def test_payoff_matrix_layout():
    mat = jg.payoff_matrix(costs_of(1.0, 4.0), params_of(6.0, 0.0), v=0.0)
    assert np.array_equal(mat, [[6.0, 4.0], [1.0, 6.0]])


def test_payoff_matrix_diagonal_tracks_continuation():
    mat = jg.payoff_matrix(costs_of(3.0, 5.0), params_of(1.0, 0.5), v=2.0)
    assert mat[0, 0] == mat[1, 1] == 2.0


def test_payoff_matrix_single_node():
    mat = jg.payoff_matrix(costs_of(7.0), params_of(2.0, 0.5), v=4.0)
    assert mat.shape == (1, 1) and mat[0, 0] == 4.0


def test_matrix_game_diagonal():
    value, p, q = jg.solve_matrix_game(np.eye(2))
    assert math.isclose(value, 0.5, abs_tol=1e-10)
    assert np.allclose(p, [0.5, 0.5], atol=1e-10)
    assert np.allclose(q, [0.5, 0.5], atol=1e-10)


def test_matrix_game_pure_saddle():
    value, p, q = jg.solve_matrix_game(np.array([[2.0, 3.0], [1.0, 0.0]]))
    assert math.isclose(value, 2.0, abs_tol=1e-10)
    assert np.allclose(p, [1.0, 0.0], atol=1e-10)
    assert np.allclose(q, [1.0, 0.0], atol=1e-10)


def test_matrix_game_matching_pennies():
    value, p, q = jg.solve_matrix_game(np.array([[1.0, -1.0], [-1.0, 1.0]]))
    assert abs(value) <= 1e-10
    assert np.allclose(p, [0.5, 0.5], atol=1e-10)


def test_matrix_game_rejects_non_finite():
    with pytest.raises(ValueError):
        jg.solve_matrix_game(np.array([[1.0, np.inf], [0.0, 1.0]]))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_matrix_game_is_minimax(seed):
    rng = np.random.default_rng(seed)
    mat = rng.uniform(-5.0, 5.0, size=(int(rng.integers(1, 6)), int(rng.integers(1, 6))))
    value, p, q = jg.solve_matrix_game(mat)
    assert math.isclose(p.sum(), 1.0, abs_tol=1e-9)
    assert math.isclose(q.sum(), 1.0, abs_tol=1e-9)
    # p guarantees at least value against every column, q at most against every row
    assert (p @ mat).min() >= value - 1e-8
    assert (mat @ q).max() <= value + 1e-8


# --- closed-form worked instances -----------------------------------------------

def test_interior_case_two_nodes():
    sol = jg.solve_closed_form(costs_of(1.0, 4.0), params_of(6.0, 0.0))
    assert sol.case_label == "C"
    assert sol.support_m == 2
    assert abs(sol.value - 32.0 / 7.0) <= 1e-12
    assert np.allclose(sol.p, [5.0 / 7.0, 2.0 / 7.0], atol=1e-12)
    assert np.allclose(sol.q, [2.0 / 7.0, 5.0 / 7.0], atol=1e-12)
    assert sol.residual <= 1e-10


def test_interior_case_discounted():
    # fixed point of the 2x2 stage game: 3a^2 - 34a + 64 = 0 with a = 6 + V/2
    sol = jg.solve_closed_form(costs_of(1.0, 4.0), params_of(6.0, 0.5))
    expected = (-1.0 + math.sqrt(97.0)) / 1.5
    assert sol.case_label == "C"
    assert abs(sol.value - expected) <= 1e-9
    ref = jg.solve_oracle(costs_of(1.0, 4.0), params_of(6.0, 0.5), tol=1e-11)
    assert abs(sol.value - ref.value) <= 1e-9


def test_collision_case():
    sol = jg.solve_closed_form(costs_of(2.0, 5.0), params_of(1.2, 0.5))
    assert sol.case_label == "B"
    assert math.isclose(sol.value, 2.4, abs_tol=1e-12)
    assert np.array_equal(sol.p, [1.0, 0.0])
    assert np.array_equal(sol.q, [1.0, 0.0])


def test_cheap_hiding_case_one_shot():
    lams = (1.11, 4.31, 6.12, 8.31, 9.11)
    sol = jg.solve_one_shot(costs_of(*lams), 1.0)
    assert sol.case_label == "A"
    assert math.isclose(sol.value, 1.11, abs_tol=1e-12)
    assert np.allclose(sol.q, [1.0, 0.0, 0.0, 0.0, 0.0], atol=1e-12)
    assert sol.p[0] == 0.0
    assert math.isclose(sol.p.sum(), 1.0, abs_tol=1e-12)


def test_one_shot_collision():
    sol = jg.solve_one_shot(costs_of(2.0, 5.0), 3.0)
    assert sol.case_label == "B" and math.isclose(sol.value, 3.0, abs_tol=1e-12)


def test_feasibility_guard_falls_back():
    # the cheap-hiding bounds sum to 4/6.5 < 1, so no valid case-(a) mix exists
    sol = jg.solve_closed_form(costs_of(5.0, 9.0), params_of(1.0, 0.5))
    assert sol.case_label == jg.ORACLE_FALLBACK
    expected = (13.0 - math.sqrt(37.0)) / 1.5
    assert abs(sol.value - expected) <= 1e-6
    assert abs(sol.value - 5.0) > 0.3


def test_figure_instance_collision():
    lams = (1.11, 4.31, 6.12, 8.31, 9.11)
    sol = jg.solve_closed_form(costs_of(*lams), params_of(1.0, 0.7))
    assert sol.case_label == "B"
    assert math.isclose(sol.value, 10.0 / 3.0, abs_tol=1e-12)


def test_solution_respects_unsorted_input():
    # same game as the worked interior case, nodes swapped
    sol = jg.solve_closed_form(costs_of(4.0, 1.0), params_of(6.0, 0.0))
    assert abs(sol.value - 32.0 / 7.0) <= 1e-12
    assert np.allclose(sol.p, [2.0 / 7.0, 5.0 / 7.0], atol=1e-12)
    assert np.allclose(sol.q, [5.0 / 7.0, 2.0 / 7.0], atol=1e-12)


def test_interior_case_k_index():
    sol = jg.solve_closed_form(costs_of(1.0, 4.0), params_of(6.0, 0.0))
    rho = 6.0
    lams = np.array([1.0, 4.0, np.inf])
    k = sol.k_index
    assert k is not None and lams[k - 1] < rho < lams[k]


# --- attackable masking -----------------------------------------------------------

def test_masked_single_column_collision():
    sol = jg.solve_closed_form(costs_of(1.0, 4.0, attackable=(1,)), params_of(6.0, 0.0))
    assert sol.case_label == "B"
    assert math.isclose(sol.value, 6.0, abs_tol=1e-12)
    assert np.array_equal(sol.q, [0.0, 1.0])
    assert np.array_equal(sol.p, [0.0, 1.0])


def test_masked_single_column_cheap_hiding():
    # scanning elsewhere absorbs the whole budget: the jammer's one target
    # costs more than hiding forever
    sol = jg.solve_closed_form(costs_of(1.0, 4.0, attackable=(1,)), params_of(2.0, 0.0))
    assert sol.case_label == "A"
    assert math.isclose(sol.value, 4.0, abs_tol=1e-12)
    assert np.array_equal(sol.q, [0.0, 1.0])
    assert np.array_equal(sol.p, [1.0, 0.0])


def test_masked_solution_certifies():
    costs = costs_of(2.0, 5.0, 8.0, 11.0, attackable=(1, 3))
    params = params_of(4.0, 0.6)
    sol = jg.solve_closed_form(costs, params)
    report = jg.verify_shapley(costs, params, sol)
    assert report.passed
    assert sol.q[0] == sol.q[2] == 0.0
    ref = jg.solve_oracle(costs, params, tol=1e-10)
    assert abs(sol.value - ref.value) <= 1e-7


def test_empty_attackable_rejected():
    with pytest.raises(ValueError):
        jg.solve_closed_form(costs_of(1.0, 4.0, attackable=()), params_of(1.0, 0.0))


def test_single_node_game_hides_forever():
    sol = jg.solve_closed_form(costs_of(5.0), params_of(3.0, 0.5))
    assert sol.case_label == "B"
    assert math.isclose(sol.value, 6.0, abs_tol=1e-12)


# --- oracle -----------------------------------------------------------------------

def test_oracle_agrees_with_collision_case():
    sol = jg.solve_oracle(costs_of(2.0, 5.0), params_of(1.2, 0.5))
    assert sol.case_label == jg.ORACLE_FALLBACK
    assert math.isclose(sol.value, 2.4, abs_tol=1e-8)
    assert np.allclose(sol.p, [1.0, 0.0], atol=1e-8)
    assert sol.iterations > 0


def test_oracle_at_gamma_zero_is_one_shot():
    costs = costs_of(1.0, 4.0)
    oracle = jg.solve_oracle(costs, params_of(6.0, 0.0))
    one_shot = jg.solve_one_shot(costs, 6.0)
    assert abs(oracle.value - one_shot.value) <= 1e-9


# --- certification ------------------------------------------------------------------

def test_verifier_accepts_worked_solution():
    costs, params = costs_of(1.0, 4.0), params_of(6.0, 0.0)
    sol = jg.solve_closed_form(costs, params)
    report = jg.verify_shapley(costs, params, sol, tol=1e-12)
    assert report.passed and report.residual <= 1e-12


def test_verifier_flags_perturbed_strategy():
    costs, params = costs_of(1.0, 4.0), params_of(6.0, 0.0)
    sol = jg.solve_closed_form(costs, params)
    bad_p = sol.p + np.array([0.05, -0.05])
    bad = jg.GameSolution(value=sol.value, p=bad_p / bad_p.sum(), q=sol.q,
                          case_label=sol.case_label, support_m=sol.support_m,
                          k_index=sol.k_index, residual=0.0, iterations=0)
    report = jg.verify_shapley(costs, params, bad)
    assert not report.passed
    assert report.residual > 1e-3


def test_verifier_accepts_pure_collision():
    costs, params = costs_of(2.0, 5.0), params_of(1.2, 0.5)
    report = jg.verify_shapley(costs, params, jg.solve_closed_form(costs, params))
    assert report.residual <= 1e-12


# --- scalar procedures ---------------------------------------------------------------

def figure_costs():
    return costs_of(1.11, 4.31, 6.12, 8.31, 9.11)


def test_iteration_on_figure_instance():
    value, trace = jg.value_by_iteration(figure_costs(), params_of(1.0, 0.7))
    assert abs(value - 10.0 / 3.0) <= 1e-10
    assert trace[0] == 1.0
    assert math.isclose(trace[1], 0.7 * 1.11 + 1.0, abs_tol=1e-12)
    assert (np.diff(trace) >= -1e-15).all()


def test_iteration_contracts_fast_for_small_gamma():
    value, trace = jg.value_by_iteration(costs_of(2.0, 5.0, 8.0), params_of(1.0, 0.01),
                                         tol=1e-8)
    assert len(trace) <= 4
    assert np.allclose(trace, [1.0, 1.02, 1.02], atol=1e-12)
    assert math.isclose(value, 2.0, abs_tol=1e-9)


def test_iteration_requires_positive_gamma():
    with pytest.raises(ValueError):
        jg.value_by_iteration(costs_of(1.0, 2.0), params_of(1.0, 0.0))


def test_bisection_on_figure_instance():
    value = jg.value_by_bisection(figure_costs(), params_of(1.0, 0.7))
    assert abs(value - 10.0 / 3.0) <= 1e-10


def test_bisection_agrees_with_oracle():
    costs, params = costs_of(1.0, 4.0), params_of(6.0, 0.5)
    value = jg.value_by_bisection(costs, params)
    ref = jg.solve_oracle(costs, params, tol=1e-10)
    assert abs(value - ref.value) <= 1e-8


def test_bisection_brackets_when_hiding_dominates():
    # the root x* = C_h + gamma*V sits above C_h + gamma*max(costs) + 1,
    # so the bracket has to stretch past the raw cost range
    costs, params = costs_of(5.0, 10.0), params_of(20.0, 0.9)
    value = jg.value_by_bisection(costs, params)
    iter_value, _ = jg.value_by_iteration(costs, params)
    assert abs(value - iter_value) <= 1e-9
    assert value > 10.0


def test_bisection_stress_near_one():
    costs, params = costs_of(1.0, 4.0), params_of(2.0, 0.9999)
    value = jg.value_by_bisection(costs, params)
    ref = jg.solve_oracle(costs, params, tol=1e-7)
    assert abs(value - ref.value) <= 1e-6


def test_procedures_cross_check():
    costs, params = costs_of(0.7, 2.2, 3.9, 6.5), params_of(2.5, 0.8)
    iter_value, _ = jg.value_by_iteration(costs, params, tol=1e-12)
    bis_value = jg.value_by_bisection(costs, params, tol=1e-12)
    assert abs(iter_value - bis_value) <= 1e-10


# --- degeneracy and property sweeps ----------------------------------------------------

def test_tied_costs_near_case_boundary_stay_silent():
    # rho = 1/(1-0.8) lands within rounding of the tied cost 5; the case
    # analysis must hand over to the oracle without arithmetic warnings
    costs = costs_of(3.0, 3.0, 3.0, 5.0, 5.0, 3.0)
    params = params_of(1.0, 0.8)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        sol = jg.solve_closed_form(costs, params)
    assert jg.verify_shapley(costs, params, sol).passed


@given(st.integers(0, 10 ** 6))
@settings(max_examples=120, deadline=None)
def test_solution_invariants(seed):
    costs, params = random_game_instance(np.random.default_rng(seed))
    sol = jg.solve_closed_form(costs, params)
    rho = params.hiding_cost / (1.0 - params.gamma)
    lams = np.sort(costs.values)
    assert math.isclose(sol.p.sum(), 1.0, abs_tol=1e-10)
    assert math.isclose(sol.q.sum(), 1.0, abs_tol=1e-10)
    assert (sol.p >= -1e-12).all() and (sol.q >= -1e-12).all()
    assert min(lams[0], rho) - 1e-8 <= sol.value <= max(lams[-1], rho) + 1e-8
    assert sol.case_label in ("A", "B", "C", jg.ORACLE_FALLBACK)
    if sol.case_label != jg.ORACLE_FALLBACK:
        assert sol.residual <= jg.CERTIFY_TOL


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_interior_support_is_shared(seed):
    costs, params = random_game_instance(np.random.default_rng(seed))
    sol = jg.solve_closed_form(costs, params)
    if sol.case_label != "C":
        return
    ordered_p = sol.p[costs.order]
    ordered_q = sol.q[costs.order]
    m = sol.support_m
    assert (ordered_q[:m] > 1e-12).all()
    assert np.allclose(ordered_q[m:], 0.0, atol=1e-15)
    assert np.allclose(ordered_p[m:], 0.0, atol=1e-15)


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_iteration_trace_is_monotone(seed):
    rng = np.random.default_rng(seed)
    costs, params = random_game_instance(rng)
    if params.gamma == 0.0:
        return
    _, trace = jg.value_by_iteration(costs, params, tol=1e-10)
    assert (np.diff(trace) >= -1e-12).all()
