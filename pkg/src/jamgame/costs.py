"""Attack-cost vectors: what the network loses when one node is jammed.

Two pricing categories:

* connectivity -- algebraic connectivity of the topology after deleting
  the attacked vertex;
* throughput -- total ln(1 + SINR) over all ordered sender/receiver pairs
  that avoid the attacked node (the attacked node forwards nothing, every
  other pair keeps transmitting).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .network import NetworkModel, TopologyGraph, build_topology
from .spectral import fiedler_value, remove_node

CONNECTIVITY = "connectivity"
THROUGHPUT = "throughput"
CATEGORIES = (CONNECTIVITY, THROUGHPUT)


@dataclass(frozen=True)
class CostVector:
    """Per-node attack costs plus the ascending permutation.

    values[i] prices an attack on node i (original indexing).  order is a
    stable ascending argsort: order[k] is the original index of the k-th
    cheapest node, ties resolved by lowest original index.  attackable
    optionally narrows which nodes the jammer can actually hit.
    """

    values: np.ndarray
    category: str
    attackable: tuple[int, ...] | None = None
    order: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError(f"values must be a non-empty vector, got shape {v.shape}")
        if not np.isfinite(v).all():
            raise ValueError("values contain non-finite entries")
        if (v < 0).any():
            raise ValueError("values contain negative costs")
        if self.category not in CATEGORIES:
            raise ValueError(f"unknown category {self.category!r}")
        if self.attackable is not None:
            att = tuple(sorted(set(int(a) for a in self.attackable)))
            if att and not (0 <= att[0] and att[-1] < v.size):
                raise ValueError(f"attackable ids {att} out of range for n={v.size}")
            object.__setattr__(self, "attackable", att)
        v.setflags(write=False)
        order = np.argsort(v, kind="stable")
        order.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "order", order)

    @property
    def n(self) -> int:
        return self.values.size


def ascending_view(costs: CostVector) -> tuple[np.ndarray, np.ndarray]:
    """(sorted values, permutation sorted-position -> original index)."""
    return costs.values[costs.order], costs.order


def connectivity_cost_vector(graph: TopologyGraph) -> CostVector:
    """values[k] = algebraic connectivity of graph minus graph.nodes[k]."""
    if graph.node_count < 3:
        raise ValueError(
            f"connectivity costs need >= 3 vertices, got {graph.node_count}")
    vals = [fiedler_value(remove_node(graph, i)) for i in graph.nodes]
    return CostVector(values=np.array(vals), category=CONNECTIVITY)


def pairwise_throughput(model: NetworkModel, *, links_only: bool = False,
                        graph: TopologyGraph | None = None) -> np.ndarray:
    """Matrix t[l, j] of directed throughputs, zero diagonal.

    links_only zeroes pairs that fail the duplex rule, for figure modes
    that only credit traffic on actual links.
    """
    hp = model.gains * model.power
    if model.include_interference:
        colsum = hp.sum(axis=0)
        interference = colsum[None, :] - hp
    else:
        interference = 0.0
    t = np.log1p(hp / (model.noise + interference))
    np.fill_diagonal(t, 0.0)
    if links_only:
        if graph is None:
            graph = build_topology(model)
        mask = graph.adjacency_matrix().astype(bool)
        t = np.where(mask, t, 0.0)
    return t


def throughput_cost_vector(model: NetworkModel, *, links_only: bool = False,
                           graph: TopologyGraph | None = None) -> CostVector:
    """values[i] = total throughput over ordered pairs avoiding node i."""
    if model.n < 3:
        raise ValueError(f"throughput costs need >= 3 nodes, got {model.n}")
    t = pairwise_throughput(model, links_only=links_only, graph=graph)
    total = t.sum()
    involving = t.sum(axis=0) + t.sum(axis=1)  # diagonal is zero
    return CostVector(values=total - involving, category=THROUGHPUT)
