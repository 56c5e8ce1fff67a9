import json

import pytest

from bimsa.cli import main


@pytest.fixture(scope="module")
def graph_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "toy.txt"
    assert main(["gen", "--n", "120", "--avg-degree", "4", "--max-degree", "20",
                 "--exponent", "2", "--seed", "3", "--out", str(path)]) == 0
    return path


FAST = ["--q", "20", "--gp", "2", "--k", "2", "--num", "3",
        "--t0", "100", "--tf", "10", "--delta-t", "10",
        "--mc-reps", "100", "--repeats", "1", "--seed", "1"]


def test_gen_writes_edge_list(graph_file):
    lines = graph_file.read_text().strip().splitlines()
    assert len(lines) > 100
    assert all(len(line.split()) == 2 for line in lines)


def test_solve_boost(graph_file, tmp_path, capsys):
    out = tmp_path / "solve"
    rc = main(["solve", "--graph", str(graph_file), "--budget", "5",
               "--solver", "boost-sa", "--out", str(out), *FAST])
    assert rc == 0
    summary = json.loads((out / "solve_summary.json").read_text())
    assert summary["solver"] == "boost-sa"
    assert summary["final_cost"] <= 5.0 + 1e-9
    assert summary["mc_influence"] >= summary["seeds"]
    assert (out / "trajectory.csv").exists()


def test_solve_all_solvers(graph_file, tmp_path):
    for solver in ("combination-sa", "celf", "max-degree"):
        out = tmp_path / solver
        rc = main(["solve", "--graph", str(graph_file), "--budget", "4",
                   "--solver", solver, "--out", str(out), *FAST])
        assert rc == 0


def test_bench(graph_file, tmp_path, capsys):
    out = tmp_path / "bench"
    rc = main(["bench", "--graph", str(graph_file), "--budgets", "3,5",
               "--solver", "celf", "--solver", "max-degree", "--out", str(out), *FAST])
    assert rc == 0
    assert (out / "cells.csv").exists()
    assert (out / "summary.csv").exists()
    captured = capsys.readouterr().out
    assert "celf" in captured


def test_candidates(graph_file, tmp_path):
    out = tmp_path / "cand"
    rc = main(["candidates", "--graph", str(graph_file), "--budgets", "3,6",
               "--out", str(out), *FAST])
    assert rc == 0
    assert (out / "candidates.csv").exists()


def test_init_compare(graph_file, tmp_path):
    out = tmp_path / "init"
    rc = main(["init-compare", "--graph", str(graph_file), "--budgets", "4",
               "--out", str(out), *FAST])
    assert rc == 0
    assert (out / "init_compare.csv").exists()


def test_cost_sens(graph_file, tmp_path):
    out = tmp_path / "cs"
    rc = main(["cost-sens", "--graph", str(graph_file), "--budgets", "4",
               "--fraction", "0.02", "--alt-p", "0.05", "--out", str(out), *FAST])
    assert rc == 0
    assert (out / "cost_sens.csv").exists()


def test_beta_sweep(graph_file, tmp_path):
    out = tmp_path / "bs"
    rc = main(["beta-sweep", "--graph", str(graph_file), "--budgets", "4",
               "--betas", "40,80", "--out", str(out), *FAST])
    assert rc == 0
    assert (out / "beta_sweep.csv").exists()


def test_symmetrize_flag(graph_file, tmp_path):
    out = tmp_path / "sym"
    rc = main(["solve", "--graph", str(graph_file), "--symmetrize", "--budget", "4",
               "--solver", "max-degree", "--out", str(out), *FAST])
    assert rc == 0


def test_unknown_solver_errors(graph_file, tmp_path):
    with pytest.raises(ValueError, match="unknown solver"):
        main(["bench", "--graph", str(graph_file), "--budgets", "3",
              "--solver", "bogus", "--out", str(tmp_path / "x"), *FAST])
