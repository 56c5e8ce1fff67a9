"""Pure-Python kernels: the reference the compiled extension must match.

Every function here has a bit-identical counterpart in ``_ckern.pyx``; the
cross-backend tests compare them on randomized inputs. Arithmetic order is
therefore deliberate: do not "simplify" accumulations or reorder loops
without updating both backends.

Inputs are CSR adjacency arrays (``indptr`` int64, ``indices`` int32 with
per-node ascending targets), node costs as a float64 array indexed by node id,
and uint64 stream seeds (see :mod:`bimsa.rng`).
"""

from __future__ import annotations

import math
from bisect import insort

import numpy as np

BACKEND = "pure"

_M = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 1.0 / 9007199254740992.0

_UNBOUNDED = 1 << 62


def _mix(z):
    z &= _M
    z ^= z >> 30
    z = (z * _MIX1) & _M
    z ^= z >> 27
    z = (z * _MIX2) & _M
    return z ^ (z >> 31)


def derive2(seed, k):
    """Child seed from (seed, index); must match rng.derive(seed, k)."""
    return _mix((seed * 0xD1342543DE82EF95 + k * _GAMMA + 0x2545F4914F6CDD1D) & _M)


# ---------------------------------------------------------------------------
# Independent cascade simulation
# ---------------------------------------------------------------------------


def _cascade(indptr, indices, seeds, active, p, max_steps, state):
    """One cascade over list-typed CSR; returns (activated count, new rng state).

    ``active`` is a scratch byte list reset by the caller. Newly activated
    nodes attempt activation in ascending node id within each step.
    """
    frontier = list(seeds)
    count = len(frontier)
    for v in frontier:
        active[v] = 1
    steps = 0
    while frontier and steps < max_steps:
        nxt = []
        for u in frontier:
            for j in range(indptr[u], indptr[u + 1]):
                v = indices[j]
                if not active[v]:
                    state = (state + _GAMMA) & _M
                    if (_mix(state) >> 11) * _INV53 < p:
                        active[v] = 1
                        count += 1
                        nxt.append(v)
        nxt.sort()
        frontier = nxt
        steps += 1
    return count, state


def ic_one(indptr, indices, seeds, n, p, max_steps, seed):
    """Single IC cascade; returns the number of activated nodes (seeds included)."""
    if max_steps is None:
        max_steps = _UNBOUNDED
    ip = indptr.tolist()
    ix = indices.tolist()
    active = [0] * n
    count, _ = _cascade(ip, ix, sorted(int(s) for s in seeds), active, p, max_steps, seed & _M)
    return count


def ic_counts(indptr, indices, seeds, n, p, max_steps, reps, base_seed):
    """Per-replication activated counts; replication r uses derive2(base_seed, r)."""
    if max_steps is None:
        max_steps = _UNBOUNDED
    ip = indptr.tolist()
    ix = indices.tolist()
    seed_list = sorted(int(s) for s in seeds)
    active = [0] * n
    out = np.empty(reps, dtype=np.int32)
    base = base_seed & _M
    for r in range(reps):
        count, _ = _cascade(ip, ix, seed_list, active, p, max_steps, derive2(base, r))
        out[r] = count
        for v in range(n):
            active[v] = 0
    return out


# ---------------------------------------------------------------------------
# 2-hop influence indicators
# ---------------------------------------------------------------------------


def sigma2_nodes(indptr, indices, n, p):
    """Per-node 2-hop spread estimate for every node, as a float64 array."""
    ip = indptr.tolist()
    ix = indices.tolist()
    out = np.empty(n, dtype=np.float64)
    p3 = p * p * p
    for v in range(n):
        acc = 0.0
        lo = ip[v]
        hi = ip[v + 1]
        for j in range(lo, hi):
            w = ix[j]
            acc += (1.0 + (ip[w + 1] - ip[w]) * p) * p
        pairs = 0
        for j in range(lo, hi):
            u = ix[j]
            # count |N_out(u) ∩ N_out(v)| by sorted merge
            a = ip[u]
            ahi = ip[u + 1]
            b = lo
            while a < ahi and b < hi:
                x = ix[a]
                y = ix[b]
                if x == y:
                    pairs += 1
                    a += 1
                    b += 1
                elif x < y:
                    a += 1
                else:
                    b += 1
        out[v] = 1.0 + acc - pairs * p3
    return out


def _adj_contains(ip, ix, u, v):
    lo = ip[u]
    hi = ip[u + 1]
    while lo < hi:
        mid = (lo + hi) >> 1
        if ix[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo < ip[u + 1] and ix[lo] == v


def _sigma2_value(members, flag, ip, ix, sig2, p):
    t1 = 0.0
    t2 = 0.0
    triples = 0
    for v in members:
        t1 += sig2[v]
        for j in range(ip[v], ip[v + 1]):
            l = ix[j]
            if flag[l]:
                back = p if _adj_contains(ip, ix, l, v) else 0.0
                t2 += p * ((1.0 + (ip[l + 1] - ip[l]) * p) - back)
                for jj in range(ip[l], ip[l + 1]):
                    d = ix[jj]
                    if flag[d] and d != v:
                        triples += 1
    return t1 - t2 - (p * p) * triples


def _edv_value(members, flag, ip, ix, tau, qpow):
    total = float(len(members))
    touched = []
    for v in members:
        for j in range(ip[v], ip[v + 1]):
            i = ix[j]
            if not flag[i]:
                if tau[i] == 0:
                    touched.append(i)
                tau[i] += 1
    for i in touched:
        total += 1.0 - qpow[tau[i]]
        tau[i] = 0
    return total


def sigma2_set_value(indptr, indices, members, sig2, p):
    """2-hop spread of a seed set (members: sorted int32 node ids)."""
    ip = indptr.tolist()
    ix = indices.tolist()
    mem = sorted(int(v) for v in members)
    flag = [0] * (len(indptr) - 1)
    for v in mem:
        flag[v] = 1
    return _sigma2_value(mem, flag, ip, ix, sig2.tolist(), p)


def edv_set_value(indptr, indices, members, qpow, p):
    """1-hop expected diffusion value of a seed set."""
    ip = indptr.tolist()
    ix = indices.tolist()
    n = len(indptr) - 1
    mem = sorted(int(v) for v in members)
    flag = [0] * n
    for v in mem:
        flag[v] = 1
    tau = [0] * n
    return _edv_value(mem, flag, ip, ix, tau, qpow.tolist())


# ---------------------------------------------------------------------------
# Metropolis machinery
# ---------------------------------------------------------------------------


def metropolis_trials(delta_e, temp, trials, seed):
    """Count acceptances of a fixed ΔE at temperature ``temp`` over ``trials``.

    Uses the identical draw-and-compare the chain uses, so empirical
    calibration of this function calibrates the chain's acceptance rule.
    """
    state = seed & _M
    threshold = math.exp(delta_e / temp)
    accepted = 0
    for _ in range(trials):
        state = (state + _GAMMA) & _M
        if threshold > (_mix(state) >> 11) * _INV53:
            accepted += 1
    return accepted


def sa_chain(
    indptr,
    indices,
    costs,
    cand,
    members,
    budget,
    temp,
    q,
    p,
    objective_id,
    cap_mode,
    sig2,
    qpow,
    seed,
    objective_fn=None,
):
    """Run ``q`` Metropolis replacement steps on a seed set.

    Each step removes one uniformly random member, refills from ``cand`` via a
    lazy Fisher-Yates permutation walk, and accepts/rejects by the Metropolis
    rule at ``temp``. The refill rule depends on ``cap_mode``:

    * 0 - admit every node whose cost fits the remaining ``budget`` (the
      refill may absorb unused slack);
    * 1 - admit every node that fits under the pre-removal total (replacement
      nodes cost no more than the removed node, the total never grows);
    * 2 - admit exactly one node of cost equal to the removed node's (a pure
      swap: the total is preserved bit-for-bit).

    If nothing refills, the removed node is restored and the step is a no-op
    (no acceptance draw). Only the compiled backend restricts ``objective_id``
    to 0 (2-hop spread) / 1 (EDV); here ``objective_fn`` may override it with
    any callable on a frozenset of node ids.

    Returns (sorted member array int32, final objective, objective evals,
    improved flag).
    """
    ip = indptr.tolist()
    ix = indices.tolist()
    cost = costs.tolist()
    sig2_l = sig2.tolist()
    qpow_l = qpow.tolist()
    n = len(indptr) - 1
    cand_l = [int(v) for v in cand]
    mem = sorted(int(v) for v in members)
    flag = [0] * n
    for v in mem:
        flag[v] = 1
    tau = [0] * n

    if objective_fn is not None:
        value = lambda: objective_fn(frozenset(mem))
    elif objective_id == 0:
        value = lambda: _sigma2_value(mem, flag, ip, ix, sig2_l, p)
    elif objective_id == 1:
        value = lambda: _edv_value(mem, flag, ip, ix, tau, qpow_l)
    else:
        raise ValueError(f"unknown objective id {objective_id}")

    total = 0.0
    for v in mem:
        total += cost[v]
    L = len(cand_l)
    min_cost = min((cost[c] for c in cand_l), default=0.0)
    state = seed & _M
    cur = value()
    evals = 1
    improved = False
    buf = [0] * L
    added = []

    for _ in range(q):
        m = len(mem)
        if m == 0:
            break
        state = (state + _GAMMA) & _M
        v = mem.pop(_mix(state) % m)
        flag[v] = 0
        removed_cost = cost[v]
        step_cap = budget if cap_mode == 0 else total
        total -= removed_cost

        buf[:] = cand_l
        added.clear()
        if cap_mode == 2:
            for i in range(L):
                state = (state + _GAMMA) & _M
                j = i + _mix(state) % (L - i)
                buf[i], buf[j] = buf[j], buf[i]
                u = buf[i]
                if u == v or flag[u]:
                    continue
                if cost[u] == removed_cost:
                    insort(mem, u)
                    flag[u] = 1
                    total += cost[u]
                    added.append(u)
                    break
        else:
            for i in range(L):
                rem = step_cap - total
                if rem < min_cost:
                    break
                state = (state + _GAMMA) & _M
                j = i + _mix(state) % (L - i)
                buf[i], buf[j] = buf[j], buf[i]
                u = buf[i]
                if u == v or flag[u]:
                    continue
                if cost[u] <= rem:
                    insort(mem, u)
                    flag[u] = 1
                    total += cost[u]
                    added.append(u)

        if not added:
            insort(mem, v)
            flag[v] = 1
            total += cost[v]
            continue

        new = value()
        evals += 1
        d_e = new - cur
        if d_e > 0:
            cur = new
            improved = True
        else:
            state = (state + _GAMMA) & _M
            if math.exp(d_e / temp) > (_mix(state) >> 11) * _INV53:
                cur = new
            else:
                for u in added:
                    mem.remove(u)
                    flag[u] = 0
                    total -= cost[u]
                insort(mem, v)
                flag[v] = 1
                total += cost[v]

    return np.array(mem, dtype=np.int32), cur, evals, improved
