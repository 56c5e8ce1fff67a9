"""Boost simulated-annealing solver for budgeted seed selection.

Three pieces on top of a plain Metropolis chain: an ensemble random
initialization consolidated by vote, per-outer-iteration voting across GP
independent chain groups, and an adaptive interrupt that stops once the best
value has been flat for ``num`` iterations.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .candidate import CandidateSet
from .graph import DirectedGraph
from .indicators import CostModel, _qpow, sigma2_all
from .rng import Stream, derive


@dataclass(frozen=True)
class SAConfig:
    """Annealing schedule and ensemble sizes.

    t0/tf/delta_t drive the outer temperature loop, q the inner Metropolis
    steps per chain, gp the number of voting groups per outer iteration,
    k the number of initialization ensembles, and num the interrupt patience.
    """

    t0: float = 1e6
    tf: float = 1e5
    delta_t: float = 1e3
    q: int = 1000
    gp: int = 3
    k: int = 10
    num: int = 10
    rng_seed: int = 0

    def __post_init__(self):
        if not self.t0 > self.tf > 0:
            raise ValueError("need t0 > tf > 0")
        if self.delta_t <= 0:
            raise ValueError("delta_t must be positive")
        if self.q < 0:
            raise ValueError("q must be >= 0")
        for name in ("gp", "k", "num"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


@dataclass(frozen=True)
class SeedSet:
    """A set of seed node ids with its cached total activation cost."""

    nodes: frozenset
    total_cost: float

    @classmethod
    def from_ids(cls, ids, cm: CostModel) -> "SeedSet":
        nodes = frozenset(int(v) for v in ids)
        return cls(nodes=nodes, total_cost=cm.total(nodes))

    def sorted_ids(self) -> list[int]:
        return sorted(self.nodes)

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass
class VoteTally:
    """Selection counts per candidate node across chains."""

    counts: dict[int, int] = field(default_factory=dict)

    def add_members(self, members) -> None:
        for v in members:
            v = int(v)
            self.counts[v] = self.counts.get(v, 0) + 1


@dataclass
class RunReport:
    """Per-run record: final seeds, best-value trajectory, interrupt, timing."""

    final_seeds: SeedSet
    trajectory: list[tuple[int, float]]
    interrupted_at: int | None
    wall_time: float
    estimator_calls: int
    budget: float
    improved_flags: int = 0

    def save_trajectory_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("iteration,max_influence\n")
            for it, val in self.trajectory:
                fh.write(f"{it},{val!r}\n")

    def summary(self, mc_influence: float | None = None) -> dict:
        return {
            "budget": self.budget,
            "final_cost": self.final_seeds.total_cost,
            "seeds": len(self.final_seeds),
            "mc_influence": mc_influence,
            "wall_time": self.wall_time,
            "interrupted_at": self.interrupted_at,
            "estimator_calls": self.estimator_calls,
        }


class ObjectiveRuntime:
    """Binds an objective spec ("sigma2", "edv", or a callable on frozensets)
    to a graph so chain steps and standalone evaluations agree exactly.

    Named objectives run on the selected kernel backend; a callable objective
    forces the generic pure-Python chain (same semantics, arbitrary function).
    """

    def __init__(self, g: DirectedGraph, p: float, objective):
        self.graph = g
        self.p = p
        self.calls = 0
        self.fn: Callable | None = None
        self.objective_id = 0
        if callable(objective):
            self.fn = objective
        elif objective == "sigma2":
            self.objective_id = 0
        elif objective == "edv":
            self.objective_id = 1
        else:
            raise ValueError(f"unknown objective {objective!r}; use 'sigma2', 'edv', or a callable")
        self.sig2 = sigma2_all(g, p)
        self.qpow = _qpow(g, p)

    def value(self, nodes) -> float:
        self.calls += 1
        ids = frozenset(int(v) for v in nodes)
        if self.fn is not None:
            return float(self.fn(ids))
        members = np.fromiter(sorted(ids), dtype=np.int32, count=len(ids))
        g = self.graph
        if self.objective_id == 0:
            return float(
                _kernels.sigma2_set_value(g.out_indptr, g.out_indices, members, self.sig2, self.p)
            )
        return float(
            _kernels.edv_set_value(g.out_indptr, g.out_indices, members, self.qpow, self.p)
        )

    def chain(self, members, cand, costs, budget, temp, q, seed, cap_mode=0):
        """Run q Metropolis steps; returns (member array, final value, improved).

        cap_mode 0: refills may use any remaining budget; 1: replacement nodes
        must cost no more than the removed node (the total never grows).
        """
        g = self.graph
        if self.fn is not None:
            mem, cur, evals, improved = _kernels.sa_chain_generic(
                g.out_indptr, g.out_indices, costs, cand, members,
                budget, temp, q, self.p, self.objective_id, cap_mode,
                self.sig2, self.qpow, seed, objective_fn=self.fn,
            )
        else:
            mem, cur, evals, improved = _kernels.sa_chain(
                g.out_indptr, g.out_indices, costs, cand, members,
                budget, temp, q, self.p, self.objective_id, cap_mode,
                self.sig2, self.qpow, seed,
            )
        self.calls += evals
        return mem, cur, improved


# ---------------------------------------------------------------------------
# Seed-set moves
# ---------------------------------------------------------------------------


def _fill_random(cand: list[int], costs, budget: float, stream: Stream, exclude: int = -1) -> list[int]:
    """Permutation-walk fill: admit uniformly random candidates that still fit."""
    chosen: list[int] = []
    if not cand:
        return chosen
    buf = list(cand)
    length = len(buf)
    min_cost = min(costs[c] for c in buf)
    total = 0.0
    for i in range(length):
        rem = budget - total
        if rem < min_cost:
            break
        j = i + stream.below(length - i)
        buf[i], buf[j] = buf[j], buf[i]
        u = buf[i]
        if u == exclude:
            continue
        if costs[u] <= rem:
            chosen.append(u)
            total += costs[u]
    return chosen


def random_seed_set(cs: CandidateSet, cm: CostModel, budget: float, stream: Stream) -> SeedSet:
    """Uniformly random budget-feasible draw from the candidate set."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    return SeedSet.from_ids(_fill_random(cs.nodes, cm.costs, budget, stream), cm)


def neighbor_set(s: SeedSet, cs: CandidateSet, cm: CostModel, budget: float, stream: Stream) -> SeedSet:
    """One replacement move: drop a random seed, refill from the candidates.

    The removed node is excluded from the refill; if nothing else fits it is
    restored, returning a set equal to the input.
    """
    if len(s) < 1:
        raise ValueError("neighbor_set requires a nonempty seed set")
    members = s.sorted_ids()
    v = members.pop(stream.below(len(members)))
    remaining = budget - s.total_cost + cm.costs[v]
    in_set = set(members)
    pool = [c for c in cs.nodes if c not in in_set]
    added = _fill_random(pool, cm.costs, remaining, stream, exclude=v)
    if not added:
        members.append(v)
    else:
        members.extend(added)
    return SeedSet.from_ids(members, cm)


def rank_fill(order, costs, budget: float) -> list[int]:
    """Walk a ranked node order and admit everything that still fits."""
    chosen: list[int] = []
    total = 0.0
    for v in order:
        c = costs[int(v)]
        if total + c <= budget:
            chosen.append(int(v))
            total += c
    return chosen


def _vote_order(tally: VoteTally, cs: CandidateSet) -> list[int]:
    """Candidates by (tally desc, ce2 desc, id asc)."""
    ce = cs.ce_values
    return sorted(cs.nodes, key=lambda v: (-tally.counts.get(v, 0), -ce[v], v))


# ---------------------------------------------------------------------------
# Boost SA
# ---------------------------------------------------------------------------


def sa_initialize(
    cs: CandidateSet,
    cm: CostModel,
    budget: float,
    cfg: SAConfig,
    objective: ObjectiveRuntime,
) -> SeedSet:
    """Ensemble initialization: k random sets annealed at t0, then a vote fill."""
    cand = np.asarray(cs.nodes, dtype=np.int32)
    tally = VoteTally()
    for i in range(cfg.k):
        stream = Stream(derive(cfg.rng_seed, 1, i))
        s0 = random_seed_set(cs, cm, budget, stream)
        members = np.fromiter(s0.sorted_ids(), dtype=np.int32, count=len(s0))
        mem, _, _ = objective.chain(
            members, cand, cm.costs, budget, cfg.t0, cfg.q, derive(cfg.rng_seed, 2, i)
        )
        tally.add_members(mem)
    return SeedSet.from_ids(rank_fill(_vote_order(tally, cs), cm.costs, budget), cm)


def vote_update(
    tally: VoteTally,
    s_prev: SeedSet,
    cs: CandidateSet,
    cm: CostModel,
    budget: float,
    objective: ObjectiveRuntime,
    prev_value: float | None = None,
) -> tuple[SeedSet, float]:
    """Consolidate a tally into a candidate set and keep the better of the two."""
    s_new = SeedSet.from_ids(rank_fill(_vote_order(tally, cs), cm.costs, budget), cm)
    if prev_value is None:
        prev_value = objective.value(s_prev.nodes)
    new_value = objective.value(s_new.nodes)
    if new_value > prev_value:
        return s_new, new_value
    return s_prev, prev_value


def boost_sa_solve(
    g: DirectedGraph,
    cm: CostModel,
    cs: CandidateSet,
    budget: float,
    cfg: SAConfig,
    objective="sigma2",
    p: float = 0.1,
    initial: SeedSet | None = None,
) -> RunReport:
    """Full solver: initialization, temperature loop with GP voting groups,
    adaptive interrupt once the best value repeats ``num`` times."""
    if len(cs) == 0:
        raise ValueError("candidate set is empty")
    start = time.perf_counter()
    runtime = ObjectiveRuntime(g, p, objective)
    cand = np.asarray(cs.nodes, dtype=np.int32)

    s = initial if initial is not None else sa_initialize(cs, cm, budget, cfg, runtime)
    best_value = runtime.value(s.nodes)

    trajectory: list[tuple[int, float]] = []
    interrupted_at: int | None = None
    improved_flags = 0
    temp = cfg.t0
    iteration = 0
    while temp > cfg.tf:
        iteration += 1
        tally = VoteTally()
        members = np.fromiter(s.sorted_ids(), dtype=np.int32, count=len(s))
        for group in range(cfg.gp):
            mem, _, improved = runtime.chain(
                members, cand, cm.costs, budget, temp, cfg.q,
                derive(cfg.rng_seed, 3, iteration, group),
            )
            if improved:
                improved_flags += 1
            tally.add_members(mem)
        s, best_value = vote_update(tally, s, cs, cm, budget, runtime, prev_value=best_value)
        trajectory.append((iteration, best_value))
        if len(trajectory) > cfg.num and all(
            trajectory[-1 - j][1] == best_value for j in range(1, cfg.num + 1)
        ):
            interrupted_at = iteration
            break
        temp -= cfg.delta_t

    return RunReport(
        final_seeds=s,
        trajectory=trajectory,
        interrupted_at=interrupted_at,
        wall_time=time.perf_counter() - start,
        estimator_calls=runtime.calls,
        budget=budget,
        improved_flags=improved_flags,
    )
