"""Wireless P2P network model and jammer physics.

A network is a set of n transceiver nodes with pairwise channel gains
h[i][j], per-link transmit powers P[i][j], thermal noise sigma^2 and an
SINR decoding threshold omega.  A duplex link (i, j) exists when the
unjammed SINR clears omega in both directions.  A jammer parked at a
planar position raises the noise floor at a receiver j by g_j * J / d_j^2
and breaks the link when the jammed SINR drops below omega.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Jammer-to-receiver distances below this are rejected as degenerate
# geometry rather than clamped.
DISTANCE_FLOOR = 1e-9


class GeometryError(ValueError):
    """Jammer sits on top of a receiver (distance under DISTANCE_FLOOR)."""


def _square_matrix(name: str, value, n: int | None = None) -> np.ndarray:
    a = np.asarray(value, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise ValueError(f"{name} has shape {a.shape}, expected ({n}, {n})")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} contains non-finite entries")
    return a


@dataclass(frozen=True)
class NetworkModel:
    """Static description of the radio environment.

    gains[i][j] is the channel gain from transmitter i to receiver j
    (zero diagonal, not necessarily symmetric).  power[i][j] is the
    power node i spends on the link to j; uniform allocation is the
    common case, see :meth:`from_node_powers`.  include_interference
    selects whether concurrent transmissions of other senders enter the
    SINR denominator; it is off by default, matching the simulation
    setting in which links are evaluated against thermal noise only.
    """

    gains: np.ndarray
    power: np.ndarray
    noise: float
    sinr_threshold: float
    positions: np.ndarray | None = None
    include_interference: bool = False

    def __post_init__(self):
        h = _square_matrix("h", self.gains)
        n = h.shape[0]
        if n < 2:
            raise ValueError(f"network needs at least 2 nodes, got {n}")
        if (h < 0).any():
            raise ValueError("h contains negative gains")
        if np.diagonal(h).any():
            raise ValueError("h must have a zero diagonal")
        p = _square_matrix("P", self.power, n)
        if (p < 0).any():
            raise ValueError("P contains negative powers")
        if not (math.isfinite(self.noise) and self.noise > 0):
            raise ValueError(f"sigma2 must be positive, got {self.noise}")
        if not (math.isfinite(self.sinr_threshold) and self.sinr_threshold > 0):
            raise ValueError(f"omega must be positive, got {self.sinr_threshold}")
        pos = self.positions
        if pos is not None:
            pos = np.asarray(pos, dtype=float)
            if pos.shape != (n, 2):
                raise ValueError(f"positions must have shape ({n}, 2), got {pos.shape}")
            if not np.isfinite(pos).all():
                raise ValueError("positions contain non-finite coordinates")
        h.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "gains", h)
        object.__setattr__(self, "power", p)
        object.__setattr__(self, "positions", pos)

    @property
    def n(self) -> int:
        return self.gains.shape[0]

    @classmethod
    def from_node_powers(cls, gains, node_powers, noise, sinr_threshold,
                         positions=None, include_interference=False) -> "NetworkModel":
        """Build a model with uniform power allocation P[i][j] = P_i."""
        h = _square_matrix("h", gains)
        p_nodes = np.asarray(node_powers, dtype=float)
        if p_nodes.shape != (h.shape[0],):
            raise ValueError(
                f"powers must list one scalar per node, got shape {p_nodes.shape}")
        power = np.repeat(p_nodes[:, None], h.shape[0], axis=1)
        np.fill_diagonal(power, 0.0)
        return cls(gains=h, power=power, noise=noise, sinr_threshold=sinr_threshold,
                   positions=positions, include_interference=include_interference)

    def interference_at(self, i: int, j: int) -> float:
        """Aggregate interference at receiver j for the (i, j) transmission.

        Sums h[k][j] * P[k][j] over senders k outside {i, j}; zero when
        interference accounting is disabled.
        """
        if not self.include_interference:
            return 0.0
        col = self.gains[:, j] * self.power[:, j]
        return float(col.sum() - col[i] - col[j])

    def sinr(self, i: int, j: int) -> float:
        """Unjammed SINR of the directed transmission i -> j."""
        self._check_pair(i, j)
        return (self.gains[i, j] * self.power[i, j]
                / (self.noise + self.interference_at(i, j)))

    def _check_pair(self, i: int, j: int):
        n = self.n
        if not (0 <= i < n and 0 <= j < n):
            raise IndexError(f"node pair ({i}, {j}) out of range for n={n}")
        if i == j:
            raise ValueError(f"sender and receiver coincide (node {i})")


@dataclass(frozen=True)
class JammerModel:
    """A jammer: planar position, power budget J, per-receiver gains g_j."""

    position: tuple[float, float]
    power_budget: float
    gains: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.position, dtype=float)
        if x.shape != (2,) or not np.isfinite(x).all():
            raise ValueError(f"jammer position must be a finite 2-vector, got {self.position}")
        if not (math.isfinite(self.power_budget) and self.power_budget >= 0):
            raise ValueError(f"J must be >= 0, got {self.power_budget}")
        g = np.asarray(self.gains, dtype=float)
        if g.ndim != 1 or not np.isfinite(g).all() or (g < 0).any():
            raise ValueError("g must be a vector of non-negative finite gains")
        g.setflags(write=False)
        object.__setattr__(self, "position", (float(x[0]), float(x[1])))
        object.__setattr__(self, "gains", g)

    def distance_to(self, model: NetworkModel, j: int) -> float:
        if model.positions is None:
            raise ValueError("jammer computations need node positions")
        d = math.hypot(model.positions[j, 0] - self.position[0],
                       model.positions[j, 1] - self.position[1])
        if d < DISTANCE_FLOOR:
            raise GeometryError(
                f"jammer-to-node distance {d:.3e} at node {j} is below the "
                f"{DISTANCE_FLOOR} floor")
        return d


@dataclass(frozen=True)
class TopologyGraph:
    """Undirected simple graph over the node ids that carry duplex links.

    nodes keeps the original ids (so induced subgraphs after node removal
    stay aligned with the parent network); edges hold (i, j) with i < j.
    """

    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        nodeset = set(self.nodes)
        if len(nodeset) != len(self.nodes):
            raise ValueError("duplicate node ids")
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            if i > j:
                raise ValueError(f"edge ({i}, {j}) must be stored with i < j")
            if i not in nodeset or j not in nodeset:
                raise ValueError(f"edge ({i}, {j}) leaves the vertex set")

    @classmethod
    def from_edges(cls, nodes, edges) -> "TopologyGraph":
        canon = frozenset((min(i, j), max(i, j)) for i, j in edges)
        return cls(nodes=tuple(nodes), edges=canon)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, i: int) -> set[int]:
        out = set()
        for a, b in self.edges:
            if a == i:
                out.add(b)
            elif b == i:
                out.add(a)
        return out

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))

    def adjacency_matrix(self) -> np.ndarray:
        """0/1 adjacency in the order of self.nodes."""
        index = {node: k for k, node in enumerate(self.nodes)}
        a = np.zeros((len(self.nodes), len(self.nodes)), dtype=np.int64)
        for i, j in self.edges:
            a[index[i], index[j]] = 1
            a[index[j], index[i]] = 1
        return a

    def canonical_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def throughput(model: NetworkModel, i: int, j: int) -> float:
    """Shannon-style throughput ln(1 + SINR) of the directed link i -> j."""
    model._check_pair(i, j)
    num = model.gains[i, j] * model.power[i, j]
    return math.log1p(num / (model.noise + model.interference_at(i, j)))


def jammed_sinr(model: NetworkModel, jammer: JammerModel, i: int, j: int) -> float:
    """SINR of i -> j while the jammer spends its whole budget on node j."""
    model._check_pair(i, j)
    if jammer.gains.shape != (model.n,):
        raise ValueError(f"jammer gain vector has shape {jammer.gains.shape}, "
                         f"expected ({model.n},)")
    d = jammer.distance_to(model, j)
    jam = jammer.gains[j] * jammer.power_budget / (d * d)
    num = model.gains[i, j] * model.power[i, j]
    return num / (model.noise + model.interference_at(i, j) + jam)


def link_exists(model: NetworkModel, i: int, j: int) -> bool:
    """Duplex rule: both directed unjammed SINRs must reach the threshold."""
    model._check_pair(i, j)
    w = model.sinr_threshold
    return model.sinr(i, j) >= w and model.sinr(j, i) >= w


def build_topology(model: NetworkModel) -> TopologyGraph:
    """Evaluate the duplex rule on every pair; isolated nodes stay vertices."""
    edges = set()
    for i in range(model.n):
        for j in range(i + 1, model.n):
            if link_exists(model, i, j):
                edges.add((i, j))
    return TopologyGraph(nodes=tuple(range(model.n)), edges=frozenset(edges))


def required_jamming_power(model: NetworkModel, jammer: JammerModel, j: int) -> float:
    """Smallest budget that pushes every incoming SINR at node j below omega.

    For each sender i the jammer must add at least
    max(h[i][j] P[i][j] / omega - sigma2 - I, 0) of received power; the
    worst sender decides.  Returns 0.0 when node j is already cut off and
    math.inf when g_j = 0 but some clamp is positive (unjammable node).
    """
    if not (0 <= j < model.n):
        raise IndexError(f"node {j} out of range for n={model.n}")
    w = model.sinr_threshold
    worst = 0.0
    for i in range(model.n):
        if i == j:
            continue
        clamp = (model.gains[i, j] * model.power[i, j] / w
                 - model.noise - model.interference_at(i, j))
        if clamp > worst:
            worst = clamp
    if worst == 0.0:
        return 0.0
    g = jammer.gains[j]
    if g == 0.0:
        return math.inf
    d = jammer.distance_to(model, j)
    return d * d / g * worst


def attackable_set(model: NetworkModel, jammer: JammerModel) -> frozenset[int]:
    """Nodes whose links the budget J can break: required power <= J."""
    return frozenset(
        j for j in range(model.n)
        if required_jamming_power(model, jammer, j) <= jammer.power_budget)
