"""Directed-graph data model, edge-list ingestion, and degree utilities."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import Stream


class GraphParseError(ValueError):
    """Raised for malformed edge-list input; message carries the line number."""


class GraphGenerationError(RuntimeError):
    """Raised when a synthetic degree sequence cannot be wired up."""


class DirectedGraph:
    """Immutable directed graph in CSR form.

    Node ids are dense integers in [0, node_count). Adjacency lists are
    sorted ascending, deduplicated, and self-loop free. ``out_indptr`` /
    ``out_indices`` hold out-neighbors, ``in_indptr`` / ``in_indices``
    in-neighbors; the two views always agree edge-for-edge.
    """

    __slots__ = (
        "node_count",
        "edge_count",
        "out_indptr",
        "out_indices",
        "in_indptr",
        "in_indices",
        "_memo",
    )

    def __init__(self, node_count: int, edge_array: np.ndarray):
        """Build from an (m, 2) int array of (source, target) pairs.

        Duplicate edges are merged and self-loops dropped.
        """
        if node_count <= 0:
            raise ValueError("graph must have at least one node")
        edges = np.asarray(edge_array, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= node_count:
                raise ValueError("edge endpoint outside [0, node_count)")
            edges = edges[edges[:, 0] != edges[:, 1]]
            edges = np.unique(edges, axis=0)
        self.node_count = int(node_count)
        self.edge_count = int(edges.shape[0])
        self.out_indptr, self.out_indices = _csr(edges[:, 0], edges[:, 1], node_count)
        self.in_indptr, self.in_indices = _csr(edges[:, 1], edges[:, 0], node_count)
        for arr in (self.out_indptr, self.out_indices, self.in_indptr, self.in_indices):
            arr.setflags(write=False)
        self._memo: dict = {}

    # -- accessors ---------------------------------------------------------

    @property
    def out_degrees(self) -> np.ndarray:
        if "outdeg" not in self._memo:
            self._memo["outdeg"] = np.diff(self.out_indptr).astype(np.int64)
        return self._memo["outdeg"]

    @property
    def in_degrees(self) -> np.ndarray:
        if "indeg" not in self._memo:
            self._memo["indeg"] = np.diff(self.in_indptr).astype(np.int64)
        return self._memo["indeg"]

    def out_neighbors(self, v: int) -> np.ndarray:
        return self.out_indices[self.out_indptr[v] : self.out_indptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        return self.in_indices[self.in_indptr[v] : self.in_indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.out_neighbors(u)
        i = np.searchsorted(nb, v)
        return i < nb.shape[0] and nb[i] == v

    def edges(self):
        """Yield (source, target) pairs in (source asc, target asc) order."""
        for u in range(self.node_count):
            for v in self.out_neighbors(u):
                yield int(u), int(v)

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.node_count}, m={self.edge_count})"


def _csr(src: np.ndarray, dst: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    order = np.lexsort((dst, src))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
    return indptr, dst[order].astype(np.int32)


# ---------------------------------------------------------------------------
# File ingestion
# ---------------------------------------------------------------------------


def load_edge_list(
    path,
    directed: bool = True,
    index_base: int = 0,
    symmetrize: bool = False,
) -> DirectedGraph:
    """Load a whitespace-delimited edge list.

    Lines are "u v" or "u v w" (trailing weight ignored); '#'/'%' lines and
    blank lines are skipped. Node labels are relabeled to dense ids by sorted
    original label, self-loops dropped, duplicates merged. ``symmetrize``
    inserts both directions per input edge (``directed=False`` is an alias).
    """
    if index_base not in (0, 1):
        raise ValueError("index_base must be 0 or 1")
    symmetrize = symmetrize or not directed
    raw: list[tuple[int, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text or text[0] in "#%":
                continue
            parts = text.split()
            if len(parts) not in (2, 3):
                raise GraphParseError(f"{path}:{lineno}: expected 'u v' or 'u v w', got {text!r}")
            try:
                u = int(parts[0]) - index_base
                v = int(parts[1]) - index_base
            except ValueError:
                raise GraphParseError(f"{path}:{lineno}: non-integer node id in {text!r}") from None
            if u < 0 or v < 0:
                raise GraphParseError(f"{path}:{lineno}: node id below index base {index_base}")
            raw.append((u, v))
    if not raw:
        raise GraphParseError(f"{path}: no edges found (empty graph)")
    arr = np.asarray(raw, dtype=np.int64)
    labels = np.unique(arr)
    dense = np.searchsorted(labels, arr)
    if symmetrize:
        dense = np.concatenate([dense, dense[:, ::-1]])
    return DirectedGraph(int(labels.shape[0]), dense)


def write_edge_list(g: DirectedGraph, path) -> None:
    """Write "u v" lines; reloading reproduces the same adjacency structure."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


# ---------------------------------------------------------------------------
# Degree partition (the 20/80 split)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DegreePartition:
    """Top/bottom split by out-degree: |top| = ceil(fraction * n)."""

    top: frozenset
    bottom: frozenset

    @property
    def top_sorted(self) -> list[int]:
        return sorted(self.top)

    @property
    def bottom_sorted(self) -> list[int]:
        return sorted(self.bottom)


def partition_by_outdegree(g: DirectedGraph, top_fraction: float = 0.2) -> DegreePartition:
    """Split nodes by out-degree (descending, ties by ascending id)."""
    if not 0.0 < top_fraction < 1.0:
        raise ValueError("top_fraction must lie in (0, 1)")
    deg = g.out_degrees
    order = np.lexsort((np.arange(g.node_count), -deg))
    cut = math.ceil(top_fraction * g.node_count)
    return DegreePartition(
        top=frozenset(int(v) for v in order[:cut]),
        bottom=frozenset(int(v) for v in order[cut:]),
    )


# ---------------------------------------------------------------------------
# Synthetic power-law graphs
# ---------------------------------------------------------------------------


def generate_powerlaw_graph(
    n: int,
    avg_degree: float,
    max_degree: int,
    exponent: float,
    rng_seed: int,
) -> DirectedGraph:
    """Configuration-model directed graph with truncated power-law degrees.

    Out-degrees are sampled from a truncated continuous power law calibrated
    (by bisection on the lower cutoff) so the mean lands near ``avg_degree``;
    in-degrees are a random permutation of the same sequence. Stubs are
    matched uniformly; self-loops and duplicate edges are repaired by random
    re-pairing passes.
    """
    if n < 10:
        raise ValueError("n must be at least 10")
    if not (1.0 < avg_degree < max_degree < n):
        raise ValueError("need 1 < avg_degree < max_degree < n")
    if exponent <= 1.0:
        raise ValueError("exponent must exceed 1")
    stream = Stream(rng_seed)

    dmin = _calibrate_dmin(avg_degree, max_degree, exponent)
    out_deg = [_sample_degree(stream, dmin, max_degree, exponent) for _ in range(n)]
    in_deg = list(out_deg)
    _shuffle(stream, in_deg)

    src: list[int] = []
    dst: list[int] = []
    for v in range(n):
        src.extend([v] * out_deg[v])
        dst.extend([v] * in_deg[v])
    _shuffle(stream, dst)

    edges = _repair_matching(stream, src, dst)
    return DirectedGraph(n, np.asarray(edges, dtype=np.int64))


def _powerlaw_mean(dmin: float, dmax: float, exponent: float) -> float:
    # mean of the continuous truncated Pareto with density ∝ x^(-exponent)
    a = exponent - 1.0
    if abs(a - 1.0) < 1e-12:
        return a * dmin * math.log(dmax / dmin) / (1.0 - (dmin / dmax) ** a)
    num = (a / (a - 1.0)) * dmin * (1.0 - (dmin / dmax) ** (a - 1.0))
    return num / (1.0 - (dmin / dmax) ** a)


def _calibrate_dmin(avg_degree: float, max_degree: int, exponent: float) -> float:
    lo, hi = 1.0, float(max_degree)
    if _powerlaw_mean(lo, max_degree, exponent) > avg_degree:
        return lo
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _powerlaw_mean(mid, max_degree, exponent) < avg_degree:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _sample_degree(stream: Stream, dmin: float, dmax: int, exponent: float) -> int:
    a = exponent - 1.0
    top = (dmin / dmax) ** a
    u = stream.random()
    # inverse CDF of the truncated Pareto
    x = dmin * (1.0 - u * (1.0 - top)) ** (-1.0 / a)
    d = int(round(x))
    return max(1, min(d, dmax))


def _shuffle(stream: Stream, items: list) -> None:
    for i in range(len(items) - 1, 0, -1):
        j = stream.below(i + 1)
        items[i], items[j] = items[j], items[i]


def _repair_matching(stream: Stream, src: list[int], dst: list[int], max_passes: int = 200):
    """Re-pair bad stubs (self-loops / duplicates) until the matching is simple.

    Swapping the targets of two stub slots preserves both degree sequences, so
    each pass swaps every conflicting slot's target with a random slot and
    re-scans. Raises after ``max_passes`` unsuccessful passes.
    """
    m = len(src)
    for _ in range(max_passes):
        seen: set[tuple[int, int]] = set()
        bad: list[int] = []
        for i in range(m):
            e = (src[i], dst[i])
            if e[0] == e[1] or e in seen:
                bad.append(i)
            else:
                seen.add(e)
        if not bad:
            return list(zip(src, dst))
        for i in bad:
            j = stream.below(m)
            dst[i], dst[j] = dst[j], dst[i]
    raise GraphGenerationError(
        f"could not realize a simple graph after {max_passes} repair passes"
    )
