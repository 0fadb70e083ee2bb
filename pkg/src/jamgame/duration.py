"""Maxmin category selection through the expected-attack-duration game.

Connectivity and throughput attacks are priced in different units, so the
two scan-vs-jam equilibria cannot be compared by value.  They can be
compared by time: with scan mix p and attack mix q a round repeats only
on a scan/attack collision that the game survives, so the attack lands
after 1 / (1 - gamma * p.q) slots in expectation.  The four (p, q)
pairings of the two per-category equilibria give a 2x2 zero-sum matrix
over categories ("c" = connectivity, "t" = throughput): the authority
picks the category to defend and wants the attack delayed, the jammer
picks the category to strike and wants it quick.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

PURE = "pure"
MIXED = "mixed"
CATEGORY_LABELS = ("c", "t")
# A vanishing mixing denominator means a pure saddle, which is checked
# first; smaller than this and the matrix is reported as degenerate.
DEGENERATE_TOL = 1e-12
# Allowed pure-deviation improvement in the best-response audit.
AUDIT_TOL = 1e-9


def _probability_vector(name: str, value) -> np.ndarray:
    v = np.asarray(value, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"{name} must be a non-empty 1-D probability vector")
    if not np.isfinite(v).all() or v.min() < -1e-12:
        raise ValueError(f"{name} has negative or non-finite entries")
    if abs(float(v.sum()) - 1.0) > 1e-8:
        raise ValueError(f"{name} must sum to 1, got {float(v.sum())!r}")
    return v


def expected_duration(p, q, gamma: float) -> float:
    """Expected slots until a successful attack: 1 / (1 - gamma * p.q).

    One slot always elapses; further slots occur only when the scan hits
    the attacked node (probability p.q) and the game continues (gamma).
    """
    g = float(gamma)
    if not 0.0 <= g < 1.0:
        raise ValueError(f"gamma must lie in [0, 1), got {gamma}")
    pv = _probability_vector("p", p)
    qv = _probability_vector("q", q)
    if pv.shape != qv.shape:
        raise ValueError(f"p and q lengths differ: {pv.size} vs {qv.size}")
    dot = min(max(float(pv @ qv), 0.0), 1.0)
    return 1.0 / (1.0 - g * dot)


@dataclass(frozen=True)
class DurationMatrix:
    """Duration table entries[r][c] = T(p of category r, q of category c).

    Rows are the authority's category choices, columns the jammer's.
    pairs, when given, holds the generating (p, q) per category and every
    entry is required to reproduce from it exactly.  The container admits
    any number of categories (a new category is new data); the built-in
    solver below covers the two-category game.
    """

    entries: np.ndarray
    gamma: float
    labels: tuple[str, ...] = CATEGORY_LABELS
    pairs: tuple[tuple[np.ndarray, np.ndarray], ...] | None = None

    def __post_init__(self):
        t = np.asarray(self.entries, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.size == 0:
            raise ValueError(f"entries must be a square matrix, got shape {t.shape}")
        g = float(self.gamma)
        if not 0.0 <= g < 1.0:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")
        cap = 1.0 / (1.0 - g)
        if not np.isfinite(t).all() or t.min() < 1.0 - 1e-12 or t.max() > cap * (1.0 + 1e-12):
            raise ValueError(
                f"durations must lie in [1, {cap}] for gamma={g}, got range "
                f"[{t.min()}, {t.max()}]")
        if len(self.labels) != t.shape[0]:
            raise ValueError("one label per category is required")
        if self.pairs is not None:
            if len(self.pairs) != t.shape[0]:
                raise ValueError("one (p, q) pair per category is required")
            for r, (pr, _) in enumerate(self.pairs):
                for c, (_, qc) in enumerate(self.pairs):
                    if t[r, c] != expected_duration(pr, qc, g):
                        raise ValueError(
                            f"entry [{r}][{c}] does not reproduce from its "
                            f"strategy pair")
        t.setflags(write=False)
        object.__setattr__(self, "entries", t)
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "labels", tuple(self.labels))

    @classmethod
    def from_pairs(cls, pairs, gamma: float, labels=None) -> "DurationMatrix":
        fixed = tuple((np.asarray(p, dtype=float), np.asarray(q, dtype=float))
                      for p, q in pairs)
        k = len(fixed)
        if labels is None:
            labels = CATEGORY_LABELS if k == 2 else tuple(f"cat{i}" for i in range(k))
        t = np.empty((k, k))
        for r in range(k):
            for c in range(k):
                t[r, c] = expected_duration(fixed[r][0], fixed[c][1], gamma)
        return cls(entries=t, gamma=gamma, labels=tuple(labels), pairs=fixed)


def duration_matrix(sol_c, sol_t, gamma: float) -> DurationMatrix:
    """Build the 2x2 category game from the two per-category equilibria."""
    if sol_c.p.shape != sol_t.p.shape or sol_c.q.shape != sol_t.q.shape:
        raise ValueError(
            f"category solutions cover different node sets: "
            f"{sol_c.p.shape} vs {sol_t.p.shape}")
    return DurationMatrix.from_pairs(
        [(sol_c.p, sol_c.q), (sol_t.p, sol_t.q)], gamma, labels=CATEGORY_LABELS)


@dataclass(frozen=True)
class CategorySelection:
    """Authority's maxmin category mix (x) and the jammer's (y).

    kind is "pure" with the saddle cell recorded, or "mixed"; game_value
    is the equilibrium expected duration in slots.
    """

    kind: str
    cell: tuple[str, str] | None
    x_c: float
    x_t: float
    y_c: float
    y_t: float
    game_value: float


def _audit(t: np.ndarray, x: np.ndarray, y: np.ndarray, value: float) -> None:
    # no pure row may beat the value against y; no pure column may undercut
    # it against x
    row_best = float((t @ y).max())
    col_best = float((x @ t).min())
    if row_best > value + AUDIT_TOL or col_best < value - AUDIT_TOL:
        raise RuntimeError(
            f"best-response audit failed: value={value}, best row deviation "
            f"{row_best}, best column deviation {col_best}")


def solve_duration_game(mat: DurationMatrix) -> CategorySelection:
    """Equilibrium of the category game: pure saddle if one exists
    (lexicographic tie-break, c before t), otherwise the unique fully
    mixed 2x2 solution.  The authority maximizes duration, the jammer
    minimizes; the result is best-response audited either way."""
    t = mat.entries
    if t.shape != (2, 2):
        raise ValueError(
            f"the category game is defined over exactly 2 categories, "
            f"got {t.shape[0]}")
    for r, c in ((0, 0), (0, 1), (1, 0), (1, 1)):
        if t[r, c] >= t[1 - r, c] and t[r, c] <= t[r, 1 - c]:
            x = np.array([1.0 - r, float(r)])
            y = np.array([1.0 - c, float(c)])
            _audit(t, x, y, float(t[r, c]))
            return CategorySelection(kind=PURE, cell=(mat.labels[r], mat.labels[c]),
                                     x_c=x[0], x_t=x[1], y_c=y[0], y_t=y[1],
                                     game_value=float(t[r, c]))
    den = float(t[0, 0] + t[1, 1] - t[0, 1] - t[1, 0])
    if abs(den) < DEGENERATE_TOL:
        raise ValueError(
            "degenerate duration matrix: no pure saddle yet a vanishing "
            "mixing denominator")
    x_c = float((t[1, 1] - t[1, 0]) / den)
    y_c = float((t[1, 1] - t[0, 1]) / den)
    value = float((t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]) / den)
    x = np.array([x_c, 1.0 - x_c])
    y = np.array([y_c, 1.0 - y_c])
    _audit(t, x, y, value)
    return CategorySelection(kind=MIXED, cell=None, x_c=x[0], x_t=x[1],
                             y_c=y[0], y_t=y[1], game_value=value)
