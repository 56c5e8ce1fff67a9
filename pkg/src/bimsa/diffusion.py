"""Independent-cascade diffusion: Monte-Carlo estimator and exact oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .graph import DirectedGraph

MAX_EXACT_EDGES = 22


@dataclass(frozen=True)
class ICParams:
    """Uniform-probability independent cascade parameters.

    ``p`` is the per-edge activation probability (p = 0 is allowed: the
    degenerate cascade activates only the seeds). ``max_steps`` bounds the
    number of propagation rounds; ``None`` means run to quiescence.
    """

    p: float = 0.1
    max_steps: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")
        if self.max_steps is not None and self.max_steps < 0:
            raise ValueError("max_steps must be nonnegative")


@dataclass(frozen=True)
class SpreadEstimate:
    """Monte-Carlo spread estimate: mean activated nodes (seeds included)."""

    mean: float
    std_error: float
    replications: int


def seed_array(g: DirectedGraph, seeds) -> np.ndarray:
    """Normalize a SeedSet / iterable of ids into a sorted unique int32 array."""
    ids = getattr(seeds, "nodes", seeds)
    arr = np.unique(np.fromiter((int(v) for v in ids), dtype=np.int64))
    if arr.size and (arr[0] < 0 or arr[-1] >= g.node_count):
        raise ValueError("seed node id outside the graph")
    return arr.astype(np.int32)


def simulate_ic_once(g: DirectedGraph, seeds, params: ICParams, rng_seed: int) -> int:
    """Run one cascade and return the number of activated nodes."""
    arr = seed_array(g, seeds)
    if arr.size == 0:
        return 0
    return _kernels.ic_one(
        g.out_indptr, g.out_indices, arr, g.node_count, params.p, params.max_steps, rng_seed
    )


def estimate_spread(
    g: DirectedGraph,
    seeds,
    params: ICParams,
    replications: int,
    rng_seed: int,
) -> SpreadEstimate:
    """Monte-Carlo estimate over independent replications.

    Replication r draws from a stream derived from (rng_seed, r), so the
    result is identical however replications are scheduled or chunked.
    """
    if replications < 1:
        raise ValueError("replications must be >= 1")
    arr = seed_array(g, seeds)
    if arr.size == 0:
        return SpreadEstimate(0.0, 0.0, replications)
    counts = _kernels.ic_counts(
        g.out_indptr,
        g.out_indices,
        arr,
        g.node_count,
        params.p,
        params.max_steps,
        replications,
        rng_seed,
    )
    mean = float(counts.mean())
    if replications > 1:
        var = float(counts.var(ddof=1))
        stderr = math.sqrt(var / replications)
    else:
        stderr = 0.0
    return SpreadEstimate(mean, stderr, replications)


def exact_spread(g: DirectedGraph, seeds, params: ICParams) -> float:
    """Exact expected spread by enumerating all 2^|E| live-edge subgraphs.

    Only feasible on tiny graphs (|E| <= 22). Requires unbounded cascades
    (the live-edge equivalence does not hold under a step cap).
    """
    if params.max_steps is not None:
        raise ValueError("exact_spread requires max_steps=None")
    m = g.edge_count
    if m > MAX_EXACT_EDGES:
        raise ValueError(f"graph has {m} edges; exact enumeration capped at {MAX_EXACT_EDGES}")
    arr = seed_array(g, seeds)
    if arr.size == 0:
        return 0.0

    srcs = []
    tgt_bits = []
    for u, v in g.edges():
        srcs.append(u)
        tgt_bits.append(1 << v)
    seed_mask = 0
    for s in arr:
        seed_mask |= 1 << int(s)

    p = params.p
    weight = [p**k * (1.0 - p) ** (m - k) for k in range(m + 1)]

    total = 0.0
    for mask in range(1 << m):
        act = seed_mask
        changed = True
        while changed:
            changed = False
            for e in range(m):
                if mask >> e & 1 and act >> srcs[e] & 1 and not act & tgt_bits[e]:
                    act |= tgt_bits[e]
                    changed = True
        total += weight[mask.bit_count()] * act.bit_count()
    return total
