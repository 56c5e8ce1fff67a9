"""Reference solvers: MaxDegree, budgeted CELF, and the two-set annealer.

The two-set annealer ("combination" solver) greedily builds a billboard set
from the top partition and a handbill set from the bottom partition, then
anneals by replacing billboard seeds with budget-feasible handbill refills.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass

import numpy as np

from .diffusion import ICParams, estimate_spread, exact_spread
from .graph import DegreePartition, DirectedGraph
from .indicators import CostModel, cedv_all, edv_set, sigma2_all, sigma2_set
from .rng import Stream, derive
from .sa import ObjectiveRuntime, RunReport, SAConfig, SeedSet, rank_fill, _fill_random


@dataclass(frozen=True)
class BillboardHandbill:
    """The two greedy candidate pools: billboard ⊆ top, handbill ⊆ bottom."""

    billboard: SeedSet
    handbill: SeedSet


def max_degree_solve(g: DirectedGraph, cm: CostModel, budget: float) -> SeedSet:
    """Admit nodes by out-degree (descending, ties by id) while they fit."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    deg = g.out_degrees
    order = sorted(range(g.node_count), key=lambda v: (-deg[v], v))
    return SeedSet.from_ids(rank_fill(order, cm.costs, budget), cm)


# ---------------------------------------------------------------------------
# Budgeted CELF
# ---------------------------------------------------------------------------


def _make_estimator(g: DirectedGraph, p: float, estimator, mc_reps: int, rng_seed: int):
    if callable(estimator):
        return lambda ids: float(estimator(frozenset(ids)))
    if estimator == "sigma2":
        return lambda ids: sigma2_set(g, ids, p)
    if estimator == "edv":
        return lambda ids: edv_set(g, ids, p)
    if estimator == "exact":
        params = ICParams(p=p)
        return lambda ids: exact_spread(g, ids, params)
    if estimator == "mc":
        params = ICParams(p=p)
        counter = [0]

        def mc_value(ids):
            counter[0] += 1
            if not ids:
                return 0.0
            return estimate_spread(g, ids, params, mc_reps, derive(rng_seed, 6, counter[0])).mean

        return mc_value
    raise ValueError(f"unknown estimator {estimator!r}")


def celf_bim_solve(
    g: DirectedGraph,
    cm: CostModel,
    budget: float,
    p: float = 0.1,
    estimator="sigma2",
    mc_reps: int = 1000,
    rng_seed: int = 0,
    diagnostics: list | None = None,
) -> SeedSet:
    """Lazy greedy on marginal gain per cost under a budget.

    The priority queue stores stale gain/cost ratios; the top entry is
    recomputed unless it was evaluated against the current seed set, and
    unaffordable nodes are dropped for good (budgets only shrink). With a
    deterministic submodular estimator this reproduces naive greedy exactly.
    ``diagnostics``, when given, collects (node, stale_gain, fresh_gain)
    recompute pairs.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    value = _make_estimator(g, p, estimator, mc_reps, rng_seed)

    selected: list[int] = []
    chosen: set[int] = set()
    spread = 0.0
    total = 0.0
    base = value(frozenset())
    # heap of (-gain/cost, node id, round the gain was computed at)
    heap = []
    gains = {}
    for v in range(g.node_count):
        gain = value(frozenset([v])) - base
        gains[v] = gain
        heapq.heappush(heap, (-gain / cm.costs[v], v, 0))

    while heap:
        neg_ratio, v, at_round = heapq.heappop(heap)
        if v in chosen:
            continue
        if total + cm.costs[v] > budget:
            continue
        if at_round == len(selected):
            selected.append(v)
            chosen.add(v)
            total += cm.costs[v]
            spread += gains[v]
            continue
        fresh = value(frozenset(selected + [v])) - spread - base
        if diagnostics is not None:
            diagnostics.append((v, gains[v], fresh))
        gains[v] = fresh
        heapq.heappush(heap, (-fresh / cm.costs[v], v, len(selected)))

    return SeedSet.from_ids(selected, cm)


# ---------------------------------------------------------------------------
# Two-set (billboard/handbill) simulated annealing
# ---------------------------------------------------------------------------


def build_billboard_handbill(
    g: DirectedGraph,
    cm: CostModel,
    partition: DegreePartition,
    budget: float,
    p: float = 0.1,
) -> BillboardHandbill:
    """Greedy pools: top partition by 2-hop spread, bottom by ce2, each under budget."""
    sig2 = sigma2_all(g, p)
    ce = cedv_all(g, cm, p)
    top_order = sorted(partition.top, key=lambda v: (-sig2[v], v))
    bottom_order = sorted(partition.bottom, key=lambda v: (-ce[v], v))
    return BillboardHandbill(
        billboard=SeedSet.from_ids(rank_fill(top_order, cm.costs, budget), cm),
        handbill=SeedSet.from_ids(rank_fill(bottom_order, cm.costs, budget), cm),
    )


def combination_sa_solve(
    g: DirectedGraph,
    cm: CostModel,
    partition: DegreePartition,
    budget: float,
    cfg: SAConfig,
    objective="sigma2",
    p: float = 0.1,
) -> RunReport:
    """Anneal the billboard set by handbill replacements.

    Starting from the billboard set, process every not-yet-processed member of
    the evolving seed set (lowest node id first): propose swapping it for
    budget-feasible handbill nodes (Metropolis-accepted); on acceptance run q
    equal-cost random swap steps over the handbill pool. Equal-cost swaps keep
    the total cost constant, so the pool keeps churning and the loop performs
    roughly |S| * q moves. Nodes that enter the set later are processed too.
    Temperature drops by delta_t per processed node, clamped at tf. Returns
    the best set seen at outer-step granularity.
    """
    start = time.perf_counter()
    runtime = ObjectiveRuntime(g, p, objective)
    pools = build_billboard_handbill(g, cm, partition, budget, p)
    handbill = sorted(pools.handbill.nodes)
    hand_arr = np.asarray(handbill, dtype=np.int32)

    s = pools.billboard
    cur = runtime.value(s.nodes)
    best_value = cur
    best_set = s
    trajectory: list[tuple[int, float]] = []
    temp = cfg.t0
    processed: set[int] = set()
    i = 0

    while handbill:
        pending = [v for v in s.sorted_ids() if v not in processed]
        if not pending:
            break
        v = pending[0]
        processed.add(v)
        i += 1
        stream = Stream(derive(cfg.rng_seed, 4, i))
        members = [u for u in s.sorted_ids() if u != v]
        remaining = budget - s.total_cost + cm.costs[v]
        pool = [c for c in handbill if c not in s.nodes]
        added = _fill_random(pool, cm.costs, remaining, stream, exclude=v)
        if added:
            proposal = SeedSet.from_ids(members + added, cm)
            new = runtime.value(proposal.nodes)
            d_e = new - cur
            accept = d_e > 0
            if not accept:
                accept = math.exp(d_e / temp) > stream.random()
            if accept:
                s, cur = proposal, new
                mem, cur, _ = runtime.chain(
                    np.asarray(s.sorted_ids(), dtype=np.int32),
                    hand_arr, cm.costs, budget, temp, cfg.q,
                    derive(cfg.rng_seed, 5, i), cap_mode=2,
                )
                s = SeedSet.from_ids(mem, cm)
        if cur > best_value:
            best_value = cur
            best_set = s
        trajectory.append((i, best_value))
        temp = max(temp - cfg.delta_t, cfg.tf)

    return RunReport(
        final_seeds=best_set,
        trajectory=trajectory,
        interrupted_at=None,
        wall_time=time.perf_counter() - start,
        estimator_calls=runtime.calls,
        budget=budget,
    )
