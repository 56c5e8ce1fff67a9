import numpy as np
import pytest

from bimsa.graph import DirectedGraph
from bimsa.rng import Stream


def make_graph(n, edges):
    return DirectedGraph(n, np.asarray(edges, dtype=np.int64).reshape(-1, 2))


def random_graph(n, m, seed):
    """Random simple directed graph with exactly m edges (deterministic)."""
    assert m <= n * (n - 1)
    stream = Stream(seed)
    seen = set()
    while len(seen) < m:
        u = stream.below(n)
        v = stream.below(n)
        if u != v:
            seen.add((u, v))
    return make_graph(n, sorted(seen))


@pytest.fixture
def path3():
    # a -> b -> c
    return make_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def triangle():
    # a -> b, a -> c, b -> c
    return make_graph(3, [(0, 1), (0, 2), (1, 2)])


def star_graph(spokes):
    """Node 0 points at `spokes` leaf nodes."""
    return make_graph(spokes + 1, [(0, i) for i in range(1, spokes + 1)])


def naive_greedy_exact(g, cm, budget, p):
    """Exhaustive greedy on gain/cost with the enumeration oracle (test oracle).

    Ties broken by ascending node id; unaffordable nodes skipped.
    """
    from bimsa.diffusion import ICParams, exact_spread

    params = ICParams(p=p)
    selected = []
    total = 0.0
    current = 0.0
    while True:
        best = None
        best_key = None
        for v in range(g.node_count):
            if v in selected or total + cm.cost(v) > budget:
                continue
            gain = exact_spread(g, selected + [v], params) - current
            key = (-(gain / cm.cost(v)), v)
            if best_key is None or key < best_key:
                best_key = key
                best = v
        if best is None:
            break
        selected.append(best)
        total += cm.cost(best)
        current = exact_spread(g, selected, params)
    return selected
