"""The scan-vs-jam stochastic game and its solvers.

One hidden jammer repeatedly picks a node to attack; the authority picks a
node to scan.  A successful attack on node j ends the game at cost
lambda_bar[j] to the jammer; a scanned jammer hides, pays the hiding cost
C_h, and the game continues with probability gamma = (1 - alpha) * delta.
The stage matrix has the attack costs in its columns and C_h + gamma * V
on the diagonal, the authority maximizes and the jammer minimizes, and the
value V solves the fixed-point (Shapley) equation V = val(A(V)).

Solvers provided here:

* solve_matrix_game  -- exact minimax kernel for any finite matrix (LP);
* solve_oracle       -- fixed-point value iteration over the kernel, with
                        a certified stopping rule (independent reference);
* solve_closed_form  -- the three-case closed form on ascending costs,
                        certified by verify_shapley, oracle on fallback;
* solve_one_shot     -- the single-round game (gamma = 0 case structure);
* value_by_iteration / value_by_bisection -- scalar fixed-point routes
                        through the one-shot value function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

# Bisection tolerance for the interior-case root of F_m(V) = 1.
ROOT_TOL = 1e-12
# Default ceiling on the equilibrium-condition residual before a closed-form
# answer is distrusted and recomputed by the oracle.
CERTIFY_TOL = 1e-8
# Strategy entries below this are treated as "out of support" when checking
# complementary slackness.
SUPPORT_EPS = 1e-13
# Allowed defect in gamma == (1 - alpha) * delta when both forms are given.
GAMMA_CONSISTENCY_TOL = 1e-12

CASE_A = "A"
CASE_B = "B"
CASE_C = "C"
ORACLE_FALLBACK = "OracleFallback"


class ConvergenceError(RuntimeError):
    """An iterative solver hit its iteration cap."""


class BracketError(RuntimeError):
    """Root bracketing failed (reported with the endpoint values)."""


@dataclass(frozen=True)
class GameParameters:
    """Hiding cost and continuation probability of the repeated game.

    gamma may be given directly or derived from the detection probability
    alpha and the jammer persistence delta as (1 - alpha) * delta; when
    both forms are present they must agree to GAMMA_CONSISTENCY_TOL.
    gamma = 1 would break the contraction and is rejected outright.
    """

    hiding_cost: float
    gamma: float
    alpha: float | None = None
    delta: float | None = None

    def __post_init__(self):
        ch = float(self.hiding_cost)
        if not (math.isfinite(ch) and ch >= 0.0):
            raise ValueError(f"C_h must be finite and >= 0, got {self.hiding_cost}")
        g = float(self.gamma)
        if not math.isfinite(g) or g < 0.0 or g >= 1.0:
            raise ValueError(
                f"gamma must lie in [0, 1); got {self.gamma}"
                + (" (gamma = 1 gives a non-contractive game)" if g == 1.0 else ""))
        if (self.alpha is None) != (self.delta is None):
            raise ValueError("alpha and delta must be supplied together")
        if self.alpha is not None:
            a, d = float(self.alpha), float(self.delta)
            if not (0.0 <= a <= 1.0):
                raise ValueError(f"alpha must lie in [0, 1], got {a}")
            if not (0.0 <= d <= 1.0):
                raise ValueError(f"delta must lie in [0, 1], got {d}")
            if abs(g - (1.0 - a) * d) > GAMMA_CONSISTENCY_TOL:
                raise ValueError(
                    f"gamma={g} inconsistent with (1-alpha)*delta={(1.0 - a) * d}")
        object.__setattr__(self, "hiding_cost", ch)
        object.__setattr__(self, "gamma", g)

    @classmethod
    def from_detection(cls, hiding_cost: float, alpha: float, delta: float) -> "GameParameters":
        return cls(hiding_cost=hiding_cost, gamma=(1.0 - float(alpha)) * float(delta),
                   alpha=alpha, delta=delta)


@dataclass(frozen=True)
class GameSolution:
    """Value and mixed strategies, full-length in original node indexing.

    case_label records which closed-form branch produced the answer ("A",
    "B", "C") or "OracleFallback"; support_m is the number of nodes the
    jammer mixes over; k_index is the interior-case threshold position
    when applicable.  residual is the certification residual reported by
    verify_shapley and iterations counts oracle sweeps (0 for closed form).
    """

    value: float
    p: np.ndarray
    q: np.ndarray
    case_label: str
    support_m: int
    k_index: int | None
    residual: float
    iterations: int

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        q = np.asarray(self.q, dtype=float)
        p.setflags(write=False)
        q.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class ShapleyReport:
    """Residuals of the equilibrium conditions at a proposed solution."""

    residual: float
    row_residual: float
    col_residual: float
    sum_residual: float
    passed: bool
    tol: float


# ---------------------------------------------------------------------------
# exact matrix-game kernel
# ---------------------------------------------------------------------------

@njit(cache=True)
def _simplex_kernel(B):  # pragma: no cover - exercised via solve_matrix_game
    """Dense tableau simplex for max 1'y s.t. By <= 1, y >= 0 (B > 0).

    Returns (basis, objective, status); status 0 = optimal.  Entering
    column: most negative reduced cost, lowest index on ties (switching to
    Bland's rule after 100 pivots); leaving row: lowest index among
    minimal ratios.  Both rules are deterministic.
    """
    m, k = B.shape
    ncols = k + m
    T = np.zeros((m, ncols + 1))
    for r in range(m):
        for c in range(k):
            T[r, c] = B[r, c]
        T[r, k + r] = 1.0
        T[r, ncols] = 1.0
    cost = np.zeros(ncols + 1)
    for c in range(k):
        cost[c] = -1.0
    basis = np.empty(m, dtype=np.int64)
    for r in range(m):
        basis[r] = k + r
    eps = 1e-11
    max_pivots = 200 + 20 * (m + k)
    for it in range(max_pivots):
        enter = -1
        if it < 100:
            best = -eps
            for j in range(ncols):
                if cost[j] < best:
                    best = cost[j]
                    enter = j
        else:
            for j in range(ncols):
                if cost[j] < -eps:
                    enter = j
                    break
        if enter < 0:
            return basis, cost[ncols], 0
        leave = -1
        best_ratio = 0.0
        for r in range(m):
            a = T[r, enter]
            if a > eps:
                ratio = T[r, ncols] / a
                if leave < 0 or ratio < best_ratio:
                    best_ratio = ratio
                    leave = r
        if leave < 0:
            return basis, 0.0, 1  # unbounded; impossible for positive B
        piv = T[leave, enter]
        for c in range(ncols + 1):
            T[leave, c] /= piv
        for r in range(m):
            if r != leave:
                f = T[r, enter]
                if f != 0.0:
                    for c in range(ncols + 1):
                        T[r, c] -= f * T[leave, c]
        f = cost[enter]
        if f != 0.0:
            for c in range(ncols + 1):
                cost[c] -= f * T[leave, c]
        basis[leave] = enter
    return basis, 0.0, 2  # pivot cap; not expected on well-posed inputs


def _refine_from_basis(B: np.ndarray, basis: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Re-solve the optimal basis exactly; wipes accumulated tableau error."""
    m, k = B.shape
    mb = np.empty((m, m))
    for idx in range(m):
        col = int(basis[idx])
        if col < k:
            mb[:, idx] = B[:, col]
        else:
            mb[:, idx] = 0.0
            mb[col - k, idx] = 1.0
    zb = np.linalg.solve(mb, np.ones(m))
    cb = (basis < k).astype(float)
    u = np.linalg.solve(mb.T, cb)
    y = np.zeros(k)
    for idx in range(m):
        col = int(basis[idx])
        if col < k:
            y[col] = zb[idx]
    np.maximum(y, 0.0, out=y)
    np.maximum(u, 0.0, out=u)
    return y, u


def _checked_matrix(matrix) -> np.ndarray:
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError(f"payoff matrix must be 2-D and non-empty, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("payoff matrix contains non-finite entries")
    return a


def solve_matrix_game(matrix) -> tuple[float, np.ndarray, np.ndarray]:
    """Minimax value and optimal mixed strategies of a zero-sum game.

    The row player maximizes, the column player minimizes.  Solved as the
    standard LP pair after shifting the matrix positive; the optimal basis
    is re-solved exactly, so values are accurate to machine precision and
    ties resolve deterministically (lowest index).
    Returns (value, p, q).
    """
    a = _checked_matrix(matrix)
    shift = 1.0 - a.min()
    basis, _, status = _simplex_kernel(a + shift)
    if status != 0:
        raise ConvergenceError(f"matrix-game LP failed with status {status}")
    y, u = _refine_from_basis(a + shift, basis)
    sy = float(y.sum())
    su = float(u.sum())
    if sy <= 0.0 or su <= 0.0:
        raise ConvergenceError("matrix-game LP returned a degenerate basis")
    return 1.0 / sy - shift, u / su, y / sy


def _stage_value(a: np.ndarray) -> float:
    """Game value only, from the tableau objective (oracle inner loop)."""
    shift = 1.0 - a.min()
    _, obj, status = _simplex_kernel(a + shift)
    if status != 0:
        raise ConvergenceError(f"matrix-game LP failed with status {status}")
    return 1.0 / obj - shift


# ---------------------------------------------------------------------------
# stage game assembly
# ---------------------------------------------------------------------------

def payoff_matrix(costs, params: GameParameters, v: float) -> np.ndarray:
    """Stage matrix at continuation value v: columns carry the attack
    costs, the diagonal carries C_h + gamma * v."""
    lam = costs.values
    a = np.tile(lam, (lam.size, 1))
    np.fill_diagonal(a, params.hiding_cost + params.gamma * v)
    return a


@dataclass(frozen=True)
class _Subgame:
    """Ascending cost view restricted to the attackable nodes.

    When the jammer's options are a strict subset, the authority keeps the
    option of scanning elsewhere; every such scan is equivalent, so the
    stage matrix gains one constant row, carried by the lowest node id
    outside the set (phantom_node).
    """

    lams: np.ndarray
    nodes: np.ndarray
    phantom_node: int | None
    n_full: int


def _subgame(costs) -> _Subgame:
    n = costs.n
    if costs.attackable is None:
        idx = np.arange(n)
        phantom = None
    else:
        idx = np.array(costs.attackable, dtype=np.int64)
        if idx.size == 0:
            raise ValueError("attackable set is empty: no game to play")
        outside = sorted(set(range(n)) - set(costs.attackable))
        phantom = outside[0] if outside else None
    vals = costs.values[idx]
    local = np.argsort(vals, kind="stable")
    return _Subgame(lams=vals[local], nodes=idx[local], phantom_node=phantom, n_full=n)


def _stage_matrix(lams: np.ndarray, hiding: float, gamma: float, v: float,
                  phantom: bool) -> np.ndarray:
    s = lams.size
    a = np.tile(lams, (s + 1 if phantom else s, 1))
    np.fill_diagonal(a, hiding + gamma * v)
    return a


# ---------------------------------------------------------------------------
# closed-form case analysis
# ---------------------------------------------------------------------------

def _bisect_root(lams_m: np.ndarray, hiding: float, gamma: float,
                 lo: float, hi: float) -> float:
    """Root of F(V) = sum (V - lam_i) / (C_h + gamma V - lam_i) = 1.

    F is increasing on [lo, hi] with F(lo) <= 1 <= F(hi), so plain
    bisection to ROOT_TOL is certified.
    """
    for _ in range(240):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f = float(((mid - lams_m) / (hiding + gamma * mid - lams_m)).sum())
        if f < 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= ROOT_TOL:
            break
    return 0.5 * (lo + hi)


def _closed_form_cases(lams: np.ndarray, hiding: float, gamma: float,
                       phantom_available: bool):
    """Three-case analysis on ascending costs.

    Returns (case, V, p_sorted, phantom_mass, q_sorted, support, k) or
    None when no case applies cleanly (exact boundary hit, or the cheap
    branch is infeasible without a spare scan row) and the caller must use
    the oracle.
    """
    s = lams.size
    rho = hiding / (1.0 - gamma)

    if s == 1 and not phantom_available:
        # scanning and attacking coincide: the jammer hides forever
        one = np.ones(1)
        return CASE_B, rho, one, 0.0, one.copy(), 1, None

    if rho < lams[0]:
        # hiding is so cheap that even the cheapest attack costs more:
        # the jammer goes for the cheapest node, the authority spreads
        # scans so no dearer node becomes worth attacking
        v = float(lams[0])
        q = np.zeros(s)
        q[0] = 1.0
        p = np.zeros(s)
        phantom_mass = 0.0
        if s > 1:
            den = lams[1:] - hiding - gamma * lams[0]
            if den.min() <= 0.0:
                return None  # rho within rounding of lams[0]: oracle's call
            bounds = (lams[1:] - lams[0]) / den
            total = float(bounds.sum())
        else:
            bounds = np.zeros(0)
            total = 0.0
        if total >= 1.0:
            p[1:] = bounds / total
        elif phantom_available:
            p[1:] = bounds
            phantom_mass = 1.0 - total
        else:
            return None  # scan budget cannot cover the caps: not a valid case
        return CASE_A, v, p, phantom_mass, q, 1, None

    lam2 = float(lams[1]) if s >= 2 else math.inf
    if rho < lam2:
        # lams[0] <= rho < lams[1]: pure collision on the cheapest node
        p = np.zeros(s)
        p[0] = 1.0
        q = p.copy()
        return CASE_B, rho, p, 0.0, q, 1, None

    k = int(np.searchsorted(lams, rho, side="left"))
    if k < s and lams[k] == rho:
        return None  # exact boundary between cases: let the oracle decide

    # interior case: jammer mixes over the m cheapest nodes, m <= k
    m = 1
    for cand in range(2, k + 1):
        d = hiding + gamma * lams[cand - 1] - lams[:cand]
        if d.min() <= 0.0:
            # mathematically d > 0 whenever lams[cand-1] < rho; hitting zero
            # means rho sits within rounding of a cost and the case split is
            # numerically unreliable
            return None
        phi = float(((lams[cand - 1] - lams[:cand]) / d).sum())
        if phi > 1.0:
            break
        m = cand
    lo = float(lams[m - 1])
    hi = min(float(lams[m]), rho) if m < s else rho
    if gamma == 0.0:
        d = hiding - lams[:m]
        if d.min() <= 0.0:
            return None
        v = float((1.0 + (lams[:m] / d).sum()) / (1.0 / d).sum())
    else:
        v = _bisect_root(lams[:m], hiding, gamma, lo, hi)
    d = hiding + gamma * v - lams[:m]
    if d.min() <= 0.0:
        return None
    p = np.zeros(s)
    p[:m] = np.maximum((v - lams[:m]) / d, 0.0)
    p /= p.sum()
    q = np.zeros(s)
    w = 1.0 / d
    q[:m] = w / w.sum()
    return CASE_C, v, p, 0.0, q, m, k


def _scatter(sub: _Subgame, p_sorted: np.ndarray, phantom_mass: float,
             q_sorted: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = np.zeros(sub.n_full)
    q = np.zeros(sub.n_full)
    p[sub.nodes] = p_sorted
    q[sub.nodes] = q_sorted
    if phantom_mass != 0.0:
        p[sub.phantom_node] += phantom_mass
    return p, q


# ---------------------------------------------------------------------------
# solvers
# ---------------------------------------------------------------------------

def verify_shapley(costs, params: GameParameters, solution: GameSolution,
                   tol: float = CERTIFY_TOL) -> ShapleyReport:
    """Check the equilibrium conditions of the fixed-point game.

    Every row in the scan support must pay exactly V against q and no row
    may pay more; every attacked column must cost exactly V against p and
    no column may cost less.  Probability-vector defects count too.  The
    report carries the worst violation.
    """
    lam = costs.values
    p = np.asarray(solution.p, dtype=float)
    q = np.asarray(solution.q, dtype=float)
    if p.shape != lam.shape or q.shape != lam.shape:
        raise ValueError("strategy vectors must match the cost vector length")
    v = float(solution.value)
    coef = params.hiding_cost + params.gamma * v - lam
    base = float(lam @ q)
    row_pay = coef * q + base
    col_pay = coef * p + lam

    in_set = np.zeros(lam.size, dtype=bool)
    if costs.attackable is None:
        in_set[:] = True
    else:
        in_set[list(costs.attackable)] = True

    row_dev = np.where(p > SUPPORT_EPS, np.abs(row_pay - v),
                       np.maximum(row_pay - v, 0.0))
    row_residual = float(row_dev.max())
    col_dev = np.where(q > SUPPORT_EPS, np.abs(col_pay - v),
                       np.maximum(v - col_pay, 0.0))
    col_residual = float(col_dev[in_set].max())
    sum_residual = max(
        abs(float(p.sum()) - 1.0),
        abs(float(q.sum()) - 1.0),
        max(0.0, -float(p.min())),
        max(0.0, -float(q.min())),
        float(q[~in_set].sum()) if (~in_set).any() else 0.0,
    )
    residual = max(row_residual, col_residual, sum_residual)
    return ShapleyReport(residual=residual, row_residual=row_residual,
                         col_residual=col_residual, sum_residual=sum_residual,
                         passed=residual <= tol, tol=tol)


def solve_oracle(costs, params: GameParameters, tol: float = 1e-9,
                 max_iterations: int = 2_000_000) -> GameSolution:
    """Reference solver: value iteration on V <- val(A(V)) from V = 0.

    The map is a gamma-contraction, so the loop stops once
    gamma * |dV| / (1 - gamma) <= tol, which certifies |V - V*| <= tol.
    Strategies come from the final stage game.
    """
    sub = _subgame(costs)
    phantom = sub.phantom_node is not None
    g = params.gamma
    hiding = params.hiding_cost
    v = 0.0
    iters = 0
    while True:
        b = _stage_matrix(sub.lams, hiding, g, v, phantom)
        shift = 1.0 - b.min()
        b += shift
        basis, obj, status = _simplex_kernel(b)
        if status != 0:
            raise ConvergenceError(f"stage game LP failed with status {status}")
        nv = 1.0 / obj - shift
        iters += 1
        delta = abs(nv - v)
        v = nv
        if g * delta / (1.0 - g) <= tol:
            break
        if iters >= max_iterations:
            raise ConvergenceError(
                f"value iteration exceeded {max_iterations} sweeps "
                f"(gamma={g}, last dV={delta:.3e})")
    y, u = _refine_from_basis(b, basis)
    sy = float(y.sum())
    value = 1.0 / sy - shift
    q_sorted = y / sy
    rows = u / float(u.sum())
    s = sub.lams.size
    p, q = _scatter(sub, rows[:s], float(rows[s:].sum()), q_sorted)
    sol = GameSolution(value=value, p=p, q=q, case_label=ORACLE_FALLBACK,
                       support_m=int((q_sorted > SUPPORT_EPS).sum()),
                       k_index=None, residual=math.nan, iterations=iters)
    report = verify_shapley(costs, params, sol)
    return replace(sol, residual=report.residual)


def solve_closed_form(costs, params: GameParameters, *,
                      oracle_tol: float = 1e-10,
                      certify_tol: float = CERTIFY_TOL) -> GameSolution:
    """Closed-form solve on the ascending cost view, certified before return.

    Exact case boundaries and an infeasible cheap branch route to
    solve_oracle, as does any certification failure (case_label then says
    OracleFallback).
    """
    sub = _subgame(costs)
    res = _closed_form_cases(sub.lams, params.hiding_cost, params.gamma,
                             sub.phantom_node is not None)
    if res is None:
        return solve_oracle(costs, params, tol=oracle_tol)
    case, v, p_sorted, phantom_mass, q_sorted, support, k = res
    p, q = _scatter(sub, p_sorted, phantom_mass, q_sorted)
    sol = GameSolution(value=v, p=p, q=q, case_label=case, support_m=support,
                       k_index=k, residual=math.nan, iterations=0)
    report = verify_shapley(costs, params, sol, tol=certify_tol)
    if not report.passed:
        return solve_oracle(costs, params, tol=oracle_tol)
    return replace(sol, residual=report.residual)


def solve_one_shot(costs, c: float, *, certify_tol: float = CERTIFY_TOL) -> GameSolution:
    """Single-round game: same case structure with gamma = 0 and scan
    cost c on the diagonal.  The interior-case value is explicit, no
    root finding involved."""
    params = GameParameters(hiding_cost=c, gamma=0.0)
    return solve_closed_form(costs, params, certify_tol=certify_tol)


def _one_shot_value(lams: np.ndarray, c: float, phantom: bool) -> float:
    """Value of the one-round game on sorted costs (scalar fast path)."""
    res = _closed_form_cases(lams, c, 0.0, phantom)
    if res is None:
        return _stage_value(_stage_matrix(lams, c, 0.0, 0.0, phantom))
    return res[1]


def value_by_iteration(costs, params: GameParameters, tol: float = 1e-12,
                       max_iterations: int = 10 ** 6) -> tuple[float, np.ndarray]:
    """Fixed-point iteration x <- gamma * V(x) + C_h from x0 = C_h.

    V is the one-shot value function, so each sweep is one closed-form
    evaluation.  Stops when |x_{i+1} - x_i| <= tol and returns
    ((x - C_h) / gamma, trace of iterates).  The trace is monotone
    nondecreasing because V is nondecreasing and x0 starts below the
    fixed point.
    """
    g = params.gamma
    if not 0.0 < g < 1.0:
        raise ValueError(f"iteration needs gamma in (0, 1), got {g}")
    sub = _subgame(costs)
    phantom = sub.phantom_node is not None
    ch = params.hiding_cost
    x = ch
    trace = [x]
    for _ in range(max_iterations):
        x_next = g * _one_shot_value(sub.lams, x, phantom) + ch
        trace.append(x_next)
        if abs(x_next - x) <= tol:
            return (x_next - ch) / g, np.array(trace)
        x = x_next
    raise ConvergenceError(
        f"fixed-point iteration exceeded {max_iterations} sweeps at gamma={g}")


def value_by_bisection(costs, params: GameParameters, tol: float = 1e-12) -> float:
    """Root of (x - C_h) / gamma - V(x) = 0 by bisection; returns the value.

    The gap is strictly increasing (V has slope at most 1 < 1/gamma), is
    <= 0 at x = C_h, and the upper endpoint sits past
    C_h + gamma * max(lam_max, C_h / (1 - gamma)), which bounds the fixed
    point from above.  tol applies to the returned value.
    """
    g = params.gamma
    if not 0.0 < g < 1.0:
        raise ValueError(f"bisection needs gamma in (0, 1), got {g}")
    sub = _subgame(costs)
    phantom = sub.phantom_node is not None
    ch = params.hiding_cost

    def gap(x: float) -> float:
        return (x - ch) / g - _one_shot_value(sub.lams, x, phantom)

    lo = ch
    hi = ch + g * max(float(sub.lams[-1]), ch / (1.0 - g)) + 1.0
    glo, ghi = gap(lo), gap(hi)
    if glo > 0.0 or ghi <= 0.0:
        raise BracketError(
            f"no sign change: gap({lo})={glo:.6e}, gap({hi})={ghi:.6e}")
    while hi - lo > tol * g:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if gap(mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    return (0.5 * (lo + hi) - ch) / g
