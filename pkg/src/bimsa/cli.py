"""Command-line interface.

Verbs: solve, bench, candidates, init-compare, cost-sens, beta-sweep, gen.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .diffusion import ICParams, estimate_spread
from .graph import (
    generate_powerlaw_graph,
    load_edge_list,
    partition_by_outdegree,
    write_edge_list,
)
from .harness import (
    ExperimentConfig,
    build_cost_model,
    run_beta_sweep,
    run_candidate_report,
    run_cost_sensitivity,
    run_experiment,
    run_init_comparison,
    solve_cell,
)
from .rng import derive
from .sa import SAConfig


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="edge-list file")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--directed", action="store_true", default=True,
                       help="treat edges as directed (default)")
    group.add_argument("--symmetrize", action="store_true",
                       help="insert both directions per input edge")
    p.add_argument("--index-base", type=int, default=0, choices=(0, 1))


def _add_common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--p", type=float, default=0.1, help="IC activation probability")
    p.add_argument("--q", type=int, default=1000, help="inner Metropolis steps per chain")
    p.add_argument("--gp", type=int, default=3, help="voting groups per outer iteration")
    p.add_argument("--k", type=int, default=10, help="initialization ensembles")
    p.add_argument("--num", type=int, default=10, help="interrupt patience")
    p.add_argument("--t0", type=float, default=1e6)
    p.add_argument("--tf", type=float, default=1e5)
    p.add_argument("--delta-t", type=float, default=1e3)
    p.add_argument("--alpha", type=float, default=1.5, help="candidate budget inflation")
    p.add_argument("--beta", type=float, default=60.0, help="top-H percentile for C2")
    p.add_argument("--mc-reps", type=int, default=10000)
    p.add_argument("--repeats", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out", help="output directory")


def _load_graph(args):
    return load_edge_list(
        args.graph, directed=not args.symmetrize, index_base=args.index_base,
        symmetrize=args.symmetrize,
    )


def _sa_config(args, seed=None) -> SAConfig:
    return SAConfig(
        t0=args.t0, tf=args.tf, delta_t=args.delta_t, q=args.q, gp=args.gp,
        k=args.k, num=args.num, rng_seed=args.seed if seed is None else seed,
    )


def _config(args, graph, solvers, budgets, repeats=None) -> ExperimentConfig:
    return ExperimentConfig(
        graph=graph,
        solvers=solvers,
        budgets=budgets,
        sa=_sa_config(args),
        p=args.p,
        mc_replications=args.mc_reps,
        repeats=args.repeats if repeats is None else repeats,
        alpha=args.alpha,
        beta_percent=args.beta,
        master_seed=args.seed,
        out_dir=Path(args.out),
        cost_fraction=getattr(args, "fraction", 0.0),
        cost_alt_p=getattr(args, "alt_p", None),
    )


def _budget_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def main(argv=None) -> int:
    top = argparse.ArgumentParser(prog="bimsa", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run one solver at one budget")
    _add_graph_args(p_solve)
    _add_common_args(p_solve)
    p_solve.add_argument("--budget", type=float, required=True)
    p_solve.add_argument("--solver", default="boost-sa")

    p_bench = sub.add_parser("bench", help="full budget sweep over solvers")
    _add_graph_args(p_bench)
    _add_common_args(p_bench)
    p_bench.add_argument("--budgets", required=True, type=_budget_list)
    p_bench.add_argument("--solver", action="append", dest="solvers",
                         help="repeatable; defaults to all four solvers")

    p_cand = sub.add_parser("candidates", help="candidate-set reachability report")
    _add_graph_args(p_cand)
    _add_common_args(p_cand)
    p_cand.add_argument("--budgets", required=True, type=_budget_list)

    p_init = sub.add_parser("init-compare", help="random vs unified initialization")
    _add_graph_args(p_init)
    _add_common_args(p_init)
    p_init.add_argument("--budgets", required=True, type=_budget_list)

    p_cost = sub.add_parser("cost-sens", help="cost sensitivity: boost vs combination")
    _add_graph_args(p_cost)
    _add_common_args(p_cost)
    p_cost.add_argument("--budgets", required=True, type=_budget_list)
    p_cost.add_argument("--fraction", type=float, default=0.02)
    p_cost.add_argument("--alt-p", type=float, default=0.05, dest="alt_p")

    p_beta = sub.add_parser("beta-sweep", help="sweep the C2 percentile")
    _add_graph_args(p_beta)
    _add_common_args(p_beta)
    p_beta.add_argument("--budgets", required=True, type=_budget_list)
    p_beta.add_argument("--betas", required=True, type=_budget_list)

    p_gen = sub.add_parser("gen", help="generate a synthetic power-law graph")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--avg-degree", type=float, default=5.0)
    p_gen.add_argument("--max-degree", type=int, default=50)
    p_gen.add_argument("--exponent", type=float, default=2.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="output edge-list file")

    args = top.parse_args(argv)

    if args.command == "gen":
        g = generate_powerlaw_graph(args.n, args.avg_degree, args.max_degree,
                                    args.exponent, args.seed)
        write_edge_list(g, args.out)
        print(f"wrote {g.node_count} nodes / {g.edge_count} edges to {args.out}")
        return 0

    graph = _load_graph(args)
    print(f"loaded {graph.node_count} nodes / {graph.edge_count} edges from {args.graph}")

    if args.command == "solve":
        config = _config(args, graph, [args.solver], [args.budget], repeats=1)
        config.out_dir.mkdir(parents=True, exist_ok=True)
        cm = build_cost_model(config)
        partition = partition_by_outdegree(graph)
        seed = derive(args.seed, 0)
        seeds, report, wall = solve_cell(args.solver, config, cm, partition,
                                         args.budget, seed)
        est = estimate_spread(graph, seeds, ICParams(p=args.p), args.mc_reps,
                              derive(seed, 9))
        summary = {
            "solver": args.solver,
            "budget": args.budget,
            "seeds": len(seeds),
            "final_cost": seeds.total_cost,
            "mc_influence": est.mean,
            "mc_stderr": est.std_error,
            "wall_time": wall,
            "interrupted_at": None if report is None else report.interrupted_at,
        }
        out = config.out_dir / "solve_summary.json"
        out.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
        if report is not None:
            report.save_trajectory_csv(config.out_dir / "trajectory.csv")
        print(json.dumps(summary, indent=2))
        return 0

    if args.command == "bench":
        solvers = args.solvers or list(("boost-sa", "combination-sa", "celf", "max-degree"))
        config = _config(args, graph, solvers, args.budgets)
        run_experiment(config)
        return 0

    if args.command == "candidates":
        config = _config(args, graph, ["boost-sa"], args.budgets)
        run_candidate_report(config)
        return 0

    if args.command == "init-compare":
        config = _config(args, graph, ["boost-sa"], args.budgets)
        run_init_comparison(config)
        return 0

    if args.command == "cost-sens":
        config = _config(args, graph, ["boost-sa", "combination-sa"], args.budgets)
        run_cost_sensitivity(config)
        return 0

    if args.command == "beta-sweep":
        config = _config(args, graph, ["boost-sa"], args.budgets)
        run_beta_sweep(config, args.betas)
        return 0

    top.error(f"unhandled command {args.command}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
