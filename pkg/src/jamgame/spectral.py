"""Laplacian spectra of topology graphs.

The price of losing a node is measured by the algebraic connectivity
(second-smallest Laplacian eigenvalue) of what remains, so this module
keeps the Laplacian exact (integer entries) and treats eigenvalues within
EIG_ZERO_TOL of zero as zero.
"""
from __future__ import annotations

import numpy as np

from .network import TopologyGraph

# Absolute tolerance under which a Laplacian eigenvalue counts as zero.
EIG_ZERO_TOL = 1e-9


def laplacian(graph: TopologyGraph) -> np.ndarray:
    """Integer Laplacian L = D - A in the order of graph.nodes."""
    a = graph.adjacency_matrix()
    return np.diag(a.sum(axis=1)) - a


def laplacian_spectrum(graph: TopologyGraph) -> np.ndarray:
    """All Laplacian eigenvalues, ascending (symmetric solver, values only)."""
    if graph.node_count == 0:
        raise ValueError("empty graph has no spectrum")
    return np.linalg.eigvalsh(laplacian(graph).astype(float))


def fiedler_value(graph: TopologyGraph) -> float:
    """Algebraic connectivity: second-smallest Laplacian eigenvalue.

    Clamped to exactly 0.0 within EIG_ZERO_TOL (disconnected graphs).
    """
    if graph.node_count < 2:
        raise ValueError(f"fiedler value needs >= 2 vertices, got {graph.node_count}")
    lam2 = float(laplacian_spectrum(graph)[1])
    return 0.0 if lam2 < EIG_ZERO_TOL else lam2


def component_count(graph: TopologyGraph) -> int:
    """Connected components by plain traversal; no eigenvalues involved."""
    if graph.node_count == 0:
        return 0
    seen: set[int] = set()
    count = 0
    for start in graph.nodes:
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            for nb in graph.neighbors(stack.pop()):
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
    return count


def remove_node(graph: TopologyGraph, i: int) -> TopologyGraph:
    """Induced subgraph on the other vertices; original ids are kept."""
    if i not in graph.nodes:
        raise ValueError(f"node {i} not in graph")
    if graph.node_count < 3:
        raise ValueError(
            f"refusing to remove a node from a {graph.node_count}-vertex graph")
    return TopologyGraph(
        nodes=tuple(v for v in graph.nodes if v != i),
        edges=frozenset(e for e in graph.edges if i not in e))
