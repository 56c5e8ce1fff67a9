"""Experiment harness: budget sweeps, ablations, and CSV emission.

Per-cell randomness derives from (master seed, solver name, budget index,
repeat), so adding a solver or re-running never perturbs other cells. Files
that contain only derived quantities are byte-reproducible; measured wall
times go to separate files that are not.
"""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

from .baselines import celf_bim_solve, combination_sa_solve, max_degree_solve
from .candidate import build_candidates, t_reachability_report, write_t_report
from .diffusion import ICParams, estimate_spread
from .graph import DirectedGraph, partition_by_outdegree
from .indicators import CostModel
from .rng import Stream, derive, key_from_name
from .sa import RunReport, SAConfig, SeedSet, boost_sa_solve, rank_fill

SOLVERS = ("boost-sa", "combination-sa", "celf", "max-degree")


@dataclass
class ExperimentConfig:
    """One experiment: dataset, solver list, budget sweep, and protocol knobs."""

    graph: DirectedGraph
    solvers: list[str]
    budgets: list[float]
    sa: SAConfig = field(default_factory=SAConfig)
    p: float = 0.1
    mc_replications: int = 10000
    repeats: int = 30
    alpha: float = 1.5
    beta_percent: float = 60.0
    master_seed: int = 0
    out_dir: Path = Path("out")
    cost_fraction: float = 0.0
    cost_alt_p: float | None = None
    celf_estimator: str = "sigma2"

    def __post_init__(self):
        if not self.budgets:
            raise ValueError("at least one budget required")
        if any(b <= 0 for b in self.budgets):
            raise ValueError("budgets must be positive")
        if list(self.budgets) != sorted(self.budgets):
            raise ValueError("budgets must be ascending")
        if self.repeats < 1:
            raise ValueError("repeats must be >= 1")
        for name in self.solvers:
            if name not in SOLVERS:
                raise ValueError(f"unknown solver {name!r}; known: {', '.join(SOLVERS)}")
        self.out_dir = Path(self.out_dir)


def build_cost_model(config: ExperimentConfig) -> CostModel:
    """Cost model, optionally with a seeded random fraction of overrides."""
    g = config.graph
    if config.cost_fraction and config.cost_alt_p is not None:
        if not 0.0 < config.cost_fraction <= 1.0:
            raise ValueError("cost_fraction must lie in (0, 1]")
        stream = Stream(derive(config.master_seed, key_from_name("cost-overrides")))
        nodes = list(range(g.node_count))
        for i in range(len(nodes) - 1, 0, -1):
            j = stream.below(i + 1)
            nodes[i], nodes[j] = nodes[j], nodes[i]
        count = math.ceil(config.cost_fraction * g.node_count)
        overrides = {v: config.cost_alt_p for v in nodes[:count]}
        return CostModel(g, config.p, overrides)
    return CostModel(g, config.p)


def unified_initial_set(cs, cm: CostModel, budget: float) -> SeedSet:
    """Deterministic counterpart of the random ensemble initialization:
    rank-fill the candidate set by ce2 (descending, ties by id)."""
    order = sorted(cs.nodes, key=lambda v: (-cs.ce_values[v], v))
    return SeedSet.from_ids(rank_fill(order, cm.costs, budget), cm)


def solve_cell(
    solver: str,
    config: ExperimentConfig,
    cm: CostModel,
    partition,
    budget: float,
    seed: int,
    candidate_cache: dict | None = None,
    initial: str = "random",
):
    """Run one solver at one budget; returns (SeedSet, RunReport | None, wall_time)."""
    g = config.graph
    cfg = dataclasses.replace(config.sa, rng_seed=seed)
    start = time.perf_counter()
    report: RunReport | None = None
    if solver == "boost-sa":
        cs = _candidates(config, cm, partition, budget, candidate_cache)
        init = None
        if initial == "unified":
            init = unified_initial_set(cs, cm, budget)
        elif initial != "random":
            raise ValueError("initial must be 'random' or 'unified'")
        report = boost_sa_solve(g, cm, cs, budget, cfg, p=config.p, initial=init)
        seeds = report.final_seeds
    elif solver == "combination-sa":
        report = combination_sa_solve(g, cm, partition, budget, cfg, p=config.p)
        seeds = report.final_seeds
    elif solver == "celf":
        seeds = celf_bim_solve(
            g, cm, budget, p=config.p, estimator=config.celf_estimator,
            mc_reps=max(1, config.mc_replications // 10), rng_seed=seed,
        )
    elif solver == "max-degree":
        seeds = max_degree_solve(g, cm, budget)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    wall = time.perf_counter() - start
    return seeds, report, wall


def _candidates(config, cm, partition, budget, cache):
    if cache is None:
        cache = {}
    if budget not in cache:
        cache[budget] = build_candidates(
            config.graph, cm, partition, budget, config.alpha, config.beta_percent, config.p
        )
    return cache[budget]


def _evaluate(config: ExperimentConfig, seeds: SeedSet, seed: int):
    params = ICParams(p=config.p)
    return estimate_spread(config.graph, seeds, params, config.mc_replications, derive(seed, 9))


def _cell_seed(config: ExperimentConfig, solver: str, budget_index: int, repeat: int) -> int:
    return derive(config.master_seed, key_from_name(solver), budget_index, repeat)


# ---------------------------------------------------------------------------
# Experiment drivers
# ---------------------------------------------------------------------------


def run_experiment(config: ExperimentConfig) -> dict[str, Path]:
    """Full sweep: every (solver, budget, repeat) cell, Monte-Carlo evaluated.

    Writes cells.csv (deterministic), timings.csv (measured), summary.csv
    (per-cell means in an influence/time layout), and prints the summary.
    """
    config.out_dir.mkdir(parents=True, exist_ok=True)
    cm = build_cost_model(config)
    partition = partition_by_outdegree(config.graph)
    cache: dict = {}
    rows = []
    for solver in config.solvers:
        for b_idx, budget in enumerate(config.budgets):
            for repeat in range(config.repeats):
                seed = _cell_seed(config, solver, b_idx, repeat)
                seeds, report, wall = solve_cell(
                    solver, config, cm, partition, budget, seed, cache
                )
                est = _evaluate(config, seeds, seed)
                rows.append(
                    {
                        "solver": solver,
                        "budget": budget,
                        "repeat": repeat,
                        "influence": est.mean,
                        "influence_stderr": est.std_error,
                        "seed_count": len(seeds),
                        "seed_cost": seeds.total_cost,
                        "interrupted_at": "" if report is None or report.interrupted_at is None
                        else report.interrupted_at,
                        "estimator_calls": 0 if report is None else report.estimator_calls,
                        "wall_time": wall,
                    }
                )

    cells_path = config.out_dir / "cells.csv"
    det_cols = [
        "solver", "budget", "repeat", "influence", "influence_stderr",
        "seed_count", "seed_cost", "interrupted_at", "estimator_calls",
    ]
    _write_csv(cells_path, det_cols, rows)
    timings_path = config.out_dir / "timings.csv"
    _write_csv(timings_path, ["solver", "budget", "repeat", "wall_time"], rows)

    summary_path = config.out_dir / "summary.csv"
    summary_rows = []
    for solver in config.solvers:
        for budget in config.budgets:
            cell = [r for r in rows if r["solver"] == solver and r["budget"] == budget]
            inf = sum(r["influence"] for r in cell) / len(cell)
            wall = sum(r["wall_time"] for r in cell) / len(cell)
            summary_rows.append(
                {"solver": solver, "budget": budget, "influence": inf, "wall_time": wall}
            )
    _write_csv(summary_path, ["solver", "budget", "influence", "wall_time"], summary_rows)

    print(f"{'budget':>10} " + " ".join(f"{s:>28}" for s in config.solvers))
    for budget in config.budgets:
        parts = []
        for solver in config.solvers:
            r = next(
                x for x in summary_rows if x["solver"] == solver and x["budget"] == budget
            )
            parts.append(f"{r['influence']:.1f}/{r['wall_time']:.3f}".rjust(28))
        print(f"{budget:>10g} " + " ".join(parts))
    return {"cells": cells_path, "timings": timings_path, "summary": summary_path}


def run_candidate_report(config: ExperimentConfig) -> Path:
    """Candidate-set diagnostics across the budget sweep."""
    config.out_dir.mkdir(parents=True, exist_ok=True)
    cm = build_cost_model(config)
    partition = partition_by_outdegree(config.graph)
    rows = t_reachability_report(
        config.graph, cm, partition, config.budgets, config.alpha, config.beta_percent, config.p
    )
    path = config.out_dir / "candidates.csv"
    write_t_report(rows, path)
    print("budget,|C|,|T1T2|,|T3|")
    for row in rows:
        print(f"{row[0]:g},{row[1]},{row[2]},{row[3]}")
    return path


def run_init_comparison(config: ExperimentConfig) -> Path:
    """Boost SA with random ensemble initialization vs the unified rank fill."""
    config.out_dir.mkdir(parents=True, exist_ok=True)
    cm = build_cost_model(config)
    partition = partition_by_outdegree(config.graph)
    cache: dict = {}
    rows = []
    for b_idx, budget in enumerate(config.budgets):
        for repeat in range(config.repeats):
            seed = _cell_seed(config, "boost-sa", b_idx, repeat)
            values = {}
            for mode in ("random", "unified"):
                seeds, _, _ = solve_cell(
                    "boost-sa", config, cm, partition, budget, seed, cache, initial=mode
                )
                values[mode] = _evaluate(config, seeds, seed).mean
            rows.append(
                {
                    "budget": budget,
                    "repeat": repeat,
                    "random_influence": values["random"],
                    "unified_influence": values["unified"],
                }
            )
    path = config.out_dir / "init_compare.csv"
    _write_csv(path, ["budget", "repeat", "random_influence", "unified_influence"], rows)
    for budget in config.budgets:
        cell = [r for r in rows if r["budget"] == budget]
        rnd = sum(r["random_influence"] for r in cell) / len(cell)
        uni = sum(r["unified_influence"] for r in cell) / len(cell)
        print(f"B={budget:g}: random {rnd:.1f} vs unified {uni:.1f}")
    return path


def run_cost_sensitivity(config: ExperimentConfig) -> Path:
    """Boost vs combination sweep under randomized per-node cost overrides."""
    if config.cost_alt_p is None:
        raise ValueError("cost sensitivity run requires cost_alt_p")
    config.out_dir.mkdir(parents=True, exist_ok=True)
    cm = build_cost_model(config)
    partition = partition_by_outdegree(config.graph)
    cache: dict = {}
    rows = []
    for b_idx, budget in enumerate(config.budgets):
        for repeat in range(config.repeats):
            values = {}
            for solver in ("boost-sa", "combination-sa"):
                seed = _cell_seed(config, solver, b_idx, repeat)
                seeds, _, _ = solve_cell(solver, config, cm, partition, budget, seed, cache)
                values[solver] = _evaluate(config, seeds, seed).mean
            rows.append(
                {
                    "budget": budget,
                    "repeat": repeat,
                    "boost_influence": values["boost-sa"],
                    "combination_influence": values["combination-sa"],
                }
            )
    path = config.out_dir / "cost_sens.csv"
    _write_csv(path, ["budget", "repeat", "boost_influence", "combination_influence"], rows)
    return path


def run_beta_sweep(config: ExperimentConfig, betas) -> Path:
    """Rebuild the candidate set per beta and re-solve; influence and runtime."""
    config.out_dir.mkdir(parents=True, exist_ok=True)
    cm = build_cost_model(config)
    partition = partition_by_outdegree(config.graph)
    rows = []
    for beta in betas:
        if not 0.0 < beta <= 100.0:
            raise ValueError("beta values must lie in (0, 100]")
        beta_config = dataclasses.replace(config, beta_percent=float(beta))
        cache: dict = {}
        for b_idx, budget in enumerate(config.budgets):
            influences = []
            walls = []
            for repeat in range(config.repeats):
                seed = _cell_seed(beta_config, "boost-sa", b_idx, repeat)
                seeds, _, wall = solve_cell(
                    "boost-sa", beta_config, cm, partition, budget, seed, cache
                )
                influences.append(_evaluate(beta_config, seeds, seed).mean)
                walls.append(wall)
            cs = cache[budget]
            rows.append(
                {
                    "beta": beta,
                    "budget": budget,
                    "influence": sum(influences) / len(influences),
                    "wall_time": sum(walls) / len(walls),
                    "candidates": len(cs),
                }
            )
    path = config.out_dir / "beta_sweep.csv"
    _write_csv(path, ["beta", "budget", "influence", "wall_time", "candidates"], rows)
    return path


def _write_csv(path: Path, columns: list[str], rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[c]) for c in columns) + "\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(float(value))
    return str(value)
