"""Closed-form influence indicators and the activation-cost model.

These are the cheap stand-ins for Monte-Carlo spread used everywhere a solver
needs many evaluations: the 1-hop expected diffusion value (EDV), the 2-hop
spread estimate for nodes and sets, and the cost-effectiveness ratio ce2.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .diffusion import seed_array
from .graph import DirectedGraph


class CostModel:
    """Per-node activation costs: cost(v) = outdeg(v) * p_v + 1.

    ``p_v`` is ``base_p`` unless overridden per node (cost-sensitivity runs
    override a random fraction of nodes with a different probability).
    Costs are cached as a float64 array at construction.
    """

    def __init__(self, graph: DirectedGraph, base_p: float = 0.1, overrides: dict | None = None):
        if not 0.0 <= base_p <= 1.0:
            raise ValueError("base_p must lie in [0, 1]")
        self.graph = graph
        self.base_p = base_p
        self.overrides = dict(overrides or {})
        probs = np.full(graph.node_count, base_p, dtype=np.float64)
        for v, pv in self.overrides.items():
            if not 0 <= int(v) < graph.node_count:
                raise ValueError(f"override for unknown node {v}")
            if not 0.0 <= pv <= 1.0:
                raise ValueError("override probability must lie in [0, 1]")
            probs[int(v)] = pv
        self.costs = graph.out_degrees * probs + 1.0
        self.costs.setflags(write=False)

    def cost(self, v: int) -> float:
        return float(self.costs[v])

    def total(self, nodes) -> float:
        """Canonical total cost: summed in ascending node id order."""
        total = 0.0
        for v in sorted(int(x) for x in nodes):
            total += self.costs[v]
        return float(total)


def node_cost(cm: CostModel, v: int) -> float:
    return cm.cost(v)


def degree_score(g: DirectedGraph, v: int) -> int:
    return int(g.out_degrees[v])


def _qpow(g: DirectedGraph, p: float) -> np.ndarray:
    """(1-p)^t table for t in [0, n]; shared by both kernel backends."""
    key = ("qpow", p)
    if key not in g._memo:
        table = np.empty(g.node_count + 1, dtype=np.float64)
        table[0] = 1.0
        base = 1.0 - p
        for t in range(1, g.node_count + 1):
            table[t] = table[t - 1] * base
        table.setflags(write=False)
        g._memo[key] = table
    return g._memo[key]


def sigma2_all(g: DirectedGraph, p: float) -> np.ndarray:
    """2-hop spread estimate for every node (cached per graph and p)."""
    key = ("sig2", p)
    if key not in g._memo:
        arr = _kernels.sigma2_nodes(g.out_indptr, g.out_indices, g.node_count, p)
        arr.setflags(write=False)
        g._memo[key] = arr
    return g._memo[key]


def sigma2_node(g: DirectedGraph, v: int, p: float) -> float:
    """2-hop spread estimate of a single node."""
    return float(sigma2_all(g, p)[v])


def sigma2_set(g: DirectedGraph, seeds, p: float) -> float:
    """2-hop spread estimate of a seed set.

    Sums the per-node estimates and subtracts the 1-hop overlap between seeds
    and the repeated influence of seed pairs at distance two.
    """
    members = seed_array(g, seeds)
    return float(
        _kernels.sigma2_set_value(g.out_indptr, g.out_indices, members, sigma2_all(g, p), p)
    )


def edv_set(g: DirectedGraph, seeds, p: float) -> float:
    """1-hop expected diffusion value: |S| + sum over out-neighbors of
    1 - (1-p)^tau, where tau counts edges from the set into the neighbor."""
    members = seed_array(g, seeds)
    return float(
        _kernels.edv_set_value(g.out_indptr, g.out_indices, members, _qpow(g, p), p)
    )


def cedv_node(g: DirectedGraph, cm: CostModel, v: int, p: float) -> float:
    """Cost-effectiveness of a node: 2-hop spread divided by activation cost."""
    return sigma2_node(g, v, p) / cm.cost(v)


def cedv_all(g: DirectedGraph, cm: CostModel, p: float) -> np.ndarray:
    """ce2 for every node; same arithmetic as cedv_node, vectorized."""
    return sigma2_all(g, p) / cm.costs
