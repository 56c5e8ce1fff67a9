"""Candidate seed-set construction.

Rather than searching influential nodes directly, the candidate set collects
cost-effective low-degree nodes able to activate the influential top-degree
set: C1 greedily admits bottom-partition nodes by ce2 rank under an inflated
budget (skipping nodes whose out-neighbor was already admitted), and C2 patches
coverage for top nodes unreachable from C1 within two hops.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .graph import DegreePartition, DirectedGraph
from .indicators import CostModel, cedv_all


@dataclass
class CandidateSet:
    """C1 (admission order), C2, ce2 values, and the top-set reachability split.

    t1: top nodes with an in-neighbor in C1 (directly activatable);
    t2: remaining top nodes reachable from C1 through one top-set intermediary;
    t3: the rest (influential but unreached), the nodes C2 exists to cover.
    """

    c1: list[int]
    c2: list[int]
    ce_values: dict[int, float]
    t1: frozenset = field(default_factory=frozenset)
    t2: frozenset = field(default_factory=frozenset)
    t3: frozenset = field(default_factory=frozenset)

    @property
    def nodes(self) -> list[int]:
        """All candidates, C1 admission order then C2; no duplicates."""
        return self.c1 + self.c2

    def __len__(self) -> int:
        return len(self.c1) + len(self.c2)


def build_candidates(
    g: DirectedGraph,
    cm: CostModel,
    partition: DegreePartition,
    budget: float,
    alpha: float = 1.5,
    beta_percent: float = 60.0,
    p: float = 0.1,
) -> CandidateSet:
    """Build the candidate set for one budget.

    C1: walk H in ce2-descending order (ties by ascending id), admit v while
    the accumulated activation cost stays within alpha * budget and no
    out-neighbor of v was already admitted. C2: for each unreached top node,
    add its best-ce2 in-neighbor ranked in the top beta_percent of H.
    """
    if g.node_count <= 0:
        raise ValueError("empty graph")
    if budget <= 0:
        raise ValueError("budget must be positive")
    if not 1.0 < alpha < 2.0:
        raise ValueError("alpha must lie in (1, 2)")
    if not 0.0 < beta_percent <= 100.0:
        raise ValueError("beta_percent must lie in (0, 100]")

    ce = cedv_all(g, cm, p)
    h_nodes = partition.bottom_sorted
    h_order = sorted(h_nodes, key=lambda v: (-ce[v], v))

    cap = alpha * budget
    c1: list[int] = []
    in_c1 = np.zeros(g.node_count, dtype=bool)
    total = 0.0
    for v in h_order:
        c = cm.costs[v]
        if total + c <= cap and not in_c1[g.out_neighbors(v)].any():
            c1.append(v)
            in_c1[v] = True
            total += c
    if not c1:
        warnings.warn(
            f"budget {budget} admits no candidate from the bottom partition "
            f"(cheapest cost exceeds alpha*budget)",
            stacklevel=2,
        )

    top = partition.top
    t1 = {t for t in top if in_c1[g.in_neighbors(t)].any()}
    t2 = set()
    for t in top - t1:
        for w in g.in_neighbors(t):
            w = int(w)
            if w in top and in_c1[g.in_neighbors(w)].any():
                t2.add(t)
                break
    t3 = top - t1 - t2

    beta_cut = math.ceil(beta_percent / 100.0 * len(h_order))
    in_top_beta = np.zeros(g.node_count, dtype=bool)
    for v in h_order[:beta_cut]:
        in_top_beta[v] = True

    c2: list[int] = []
    c2_seen: set[int] = set()
    for t in sorted(t3):
        best = -1
        for w in g.in_neighbors(t):
            w = int(w)
            if in_top_beta[w] and (best < 0 or ce[w] > ce[best] or (ce[w] == ce[best] and w < best)):
                best = w
        if best >= 0 and not in_c1[best] and best not in c2_seen:
            c2.append(best)
            c2_seen.add(best)

    ce_values = {int(v): float(ce[v]) for v in c1 + c2}
    return CandidateSet(
        c1=c1,
        c2=c2,
        ce_values=ce_values,
        t1=frozenset(t1),
        t2=frozenset(t2),
        t3=frozenset(t3),
    )


def t_reachability_report(
    g: DirectedGraph,
    cm: CostModel,
    partition: DegreePartition,
    budgets,
    alpha: float = 1.5,
    beta_percent: float = 60.0,
    p: float = 0.1,
) -> list[tuple[float, int, int, int]]:
    """(budget, |C|, |T1 ∪ T2|, |T3|) rows across a budget sweep."""
    rows = []
    for budget in budgets:
        cs = build_candidates(g, cm, partition, budget, alpha, beta_percent, p)
        rows.append((float(budget), len(cs), len(cs.t1) + len(cs.t2), len(cs.t3)))
    return rows


def write_t_report(rows, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("budget,|C|,|T1T2|,|T3|\n")
        for budget, c, t12, t3 in rows:
            fh.write(f"{budget:g},{c},{t12},{t3}\n")
