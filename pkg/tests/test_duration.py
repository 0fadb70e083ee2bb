"""Expected attack duration and the 2x2 category-selection game."""
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import jamgame as jg


def entries_from_dots(dots, gamma):
    cc, ct, tc, tt = dots
    return np.array([[1.0 / (1.0 - gamma * cc), 1.0 / (1.0 - gamma * ct)],
                     [1.0 / (1.0 - gamma * tc), 1.0 / (1.0 - gamma * tt)]])


def truncated_series(dot, gamma, horizon=10 ** 4):
    # E[T] = sum over t >= 0 of P(T > t) = sum (gamma * dot)^t
    return sum((gamma * dot) ** t for t in range(horizon))


# --- expected duration -------------------------------------------------------

def test_duration_disjoint_supports():
    assert jg.expected_duration([1.0, 0.0], [0.0, 1.0], 0.9) == 1.0


def test_duration_full_collision():
    assert math.isclose(jg.expected_duration([1.0, 0.0], [1.0, 0.0], 0.7),
                        10.0 / 3.0, abs_tol=1e-12)


def test_duration_at_gamma_zero():
    assert jg.expected_duration([0.3, 0.7], [0.5, 0.5], 0.0) == 1.0


def test_duration_rejects_mismatched_lengths():
    with pytest.raises(ValueError):
        jg.expected_duration([1.0], [0.5, 0.5], 0.5)


def test_duration_matches_series():
    rng = np.random.default_rng(3)
    for _ in range(10):
        p = rng.dirichlet(np.ones(4))
        q = rng.dirichlet(np.ones(4))
        gamma = float(rng.uniform(0.0, 0.9))
        expected = truncated_series(float(p @ q), gamma)
        assert math.isclose(jg.expected_duration(p, q, gamma), expected, abs_tol=1e-6)


# --- duration matrix ----------------------------------------------------------

def test_matrix_from_dot_products():
    mat = jg.DurationMatrix(entries=entries_from_dots((0.5, 0.6, 0.2, 0.3), 0.5),
                            gamma=0.5)
    assert np.allclose(mat.entries,
                       [[4.0 / 3.0, 10.0 / 7.0], [10.0 / 9.0, 20.0 / 17.0]],
                       atol=1e-12)


def test_matrix_from_game_solutions():
    costs = jg.CostVector(values=np.array([1.0, 4.0]), category=jg.CONNECTIVITY)
    params = jg.GameParameters(hiding_cost=6.0, gamma=0.5)
    sol_c = jg.solve_closed_form(costs, params)
    sol_t = jg.solve_closed_form(
        jg.CostVector(values=np.array([2.0, 9.0]), category=jg.THROUGHPUT), params)
    mat = jg.duration_matrix(sol_c, sol_t, 0.5)
    for r, p in enumerate((sol_c.p, sol_t.p)):
        for c, q in enumerate((sol_c.q, sol_t.q)):
            assert math.isclose(mat.entries[r, c],
                                jg.expected_duration(p, q, 0.5), abs_tol=1e-12)


def test_matrix_identical_categories():
    p = np.array([0.5, 0.5])
    sol = jg.GameSolution(value=1.0, p=p, q=p.copy(), case_label="B",
                          support_m=1, k_index=None, residual=0.0, iterations=0)
    mat = jg.duration_matrix(sol, sol, 0.6)
    assert np.allclose(mat.entries, mat.entries[0, 0])


def test_matrix_gamma_zero_is_all_ones():
    mat = jg.DurationMatrix(entries=entries_from_dots((0.1, 0.9, 0.4, 0.2), 0.0),
                            gamma=0.0)
    assert np.array_equal(mat.entries, np.ones((2, 2)))


def test_matrix_bounds_enforced():
    with pytest.raises(ValueError):
        jg.DurationMatrix(entries=np.array([[0.5, 1.0], [1.0, 1.0]]), gamma=0.5)
    with pytest.raises(ValueError):
        jg.DurationMatrix(entries=np.array([[3.0, 1.0], [1.0, 1.0]]), gamma=0.5)


def test_matrix_pairs_must_reproduce_entries():
    p = np.array([1.0, 0.0])
    pairs = ((p, p), (p, p))
    with pytest.raises(ValueError):
        jg.DurationMatrix(entries=np.ones((2, 2)) * 1.5, gamma=0.5, pairs=pairs)
    good = jg.DurationMatrix.from_pairs(pairs, gamma=0.5)
    assert np.allclose(good.entries, [[2.0, 2.0], [2.0, 2.0]], atol=1e-12)


# --- category selection ---------------------------------------------------------

def test_selection_pure_saddle():
    mat = jg.DurationMatrix(entries=entries_from_dots((0.5, 0.6, 0.2, 0.3), 0.5),
                            gamma=0.5)
    sel = jg.solve_duration_game(mat)
    assert sel.kind == jg.PURE
    assert sel.cell == ("c", "c")
    assert sel.x_c == 1.0 and sel.y_c == 1.0
    assert math.isclose(sel.game_value, 4.0 / 3.0, abs_tol=1e-12)


def test_selection_symmetric_mixed():
    mat = jg.DurationMatrix(entries=np.array([[2.0, 4.0], [4.0, 2.0]]), gamma=0.75)
    sel = jg.solve_duration_game(mat)
    assert sel.kind == jg.MIXED
    assert sel.x_c == 0.5 and sel.x_t == 0.5
    assert sel.y_c == 0.5
    assert math.isclose(sel.game_value, 3.0, abs_tol=1e-12)


def test_selection_all_equal_breaks_ties_lexicographically():
    mat = jg.DurationMatrix(entries=np.full((2, 2), 1.25), gamma=0.5)
    sel = jg.solve_duration_game(mat)
    assert sel.kind == jg.PURE and sel.cell == ("c", "c")


def test_selection_probabilities_are_consistent():
    mat = jg.DurationMatrix(entries=entries_from_dots((0.9, 0.1, 0.2, 0.8), 0.6),
                            gamma=0.6)
    sel = jg.solve_duration_game(mat)
    assert math.isclose(sel.x_c + sel.x_t, 1.0, abs_tol=1e-12)
    assert math.isclose(sel.y_c + sel.y_t, 1.0, abs_tol=1e-12)
    assert 0.0 <= sel.x_c <= 1.0 and 0.0 <= sel.y_c <= 1.0


def best_response_audit(entries, sel):
    x = np.array([sel.x_c, sel.x_t])
    y = np.array([sel.y_c, sel.y_t])
    row_payoffs = entries @ y      # authority's duration per pure row
    col_payoffs = x @ entries      # jammer's duration per pure column
    assert sel.game_value >= row_payoffs.max() - 1e-9
    assert sel.game_value <= col_payoffs.min() + 1e-9


@given(st.integers(0, 10 ** 6))
@settings(max_examples=150, deadline=None)
def test_selection_passes_best_response_audit(seed):
    rng = np.random.default_rng(seed)
    gamma = float(rng.uniform(0.0, 0.95))
    dots = rng.uniform(0.0, 1.0, size=4)
    mat = jg.DurationMatrix(entries=entries_from_dots(tuple(dots), gamma), gamma=gamma)
    sel = jg.solve_duration_game(mat)
    best_response_audit(mat.entries, sel)
    if sel.kind == jg.MIXED:
        assert 0.0 < sel.x_c < 1.0 and 0.0 < sel.y_c < 1.0


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_duration_value_monotone_in_gamma(seed):
    rng = np.random.default_rng(seed)
    dots = tuple(rng.uniform(0.0, 1.0, size=4))
    values = []
    for gamma in (0.2, 0.5, 0.8):
        mat = jg.DurationMatrix(entries=entries_from_dots(dots, gamma), gamma=gamma)
        values.append(jg.solve_duration_game(mat).game_value)
    assert values[0] <= values[1] + 1e-12 <= values[2] + 2e-12
