# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: bit-identical twin of ``_pure``.

Loop structure, accumulation order, and RNG consumption must match the pure
backend exactly; the cross-backend tests enforce it. Compiled without
-ffast-math on purpose (IEEE ordering is part of the contract).
"""

import numpy as np

from libc.math cimport exp
from libc.stdint cimport int32_t, int64_t, uint8_t, uint64_t
from libc.stdlib cimport qsort
from libc.string cimport memcpy, memmove, memset

BACKEND = "cython"

cdef uint64_t _GAMMA = <uint64_t>0x9E3779B97F4A7C15
cdef uint64_t _MIX1 = <uint64_t>0xBF58476D1CE4E5B9
cdef uint64_t _MIX2 = <uint64_t>0x94D049BB133111EB
cdef uint64_t _DERIVE_A = <uint64_t>0xD1342543DE82EF95
cdef uint64_t _DERIVE_C = <uint64_t>0x2545F4914F6CDD1D
cdef double _INV53 = 1.0 / 9007199254740992.0
cdef int64_t _UNBOUNDED = <int64_t>1 << 62


cdef inline uint64_t _mix(uint64_t z) noexcept nogil:
    z ^= z >> 30
    z *= _MIX1
    z ^= z >> 27
    z *= _MIX2
    return z ^ (z >> 31)


cdef inline uint64_t _derive2_c(uint64_t seed, uint64_t k) noexcept nogil:
    return _mix(seed * _DERIVE_A + k * _GAMMA + _DERIVE_C)


def derive2(seed, k):
    """Child seed from (seed, index); must match rng.derive(seed, k)."""
    return int(_derive2_c(<uint64_t>(seed & 0xFFFFFFFFFFFFFFFF), <uint64_t>(k & 0xFFFFFFFFFFFFFFFF)))


cdef int _cmp_int32(const void* a, const void* b) noexcept nogil:
    cdef int32_t ia = (<const int32_t*>a)[0]
    cdef int32_t ib = (<const int32_t*>b)[0]
    return (ia > ib) - (ia < ib)


# ---------------------------------------------------------------------------
# Independent cascade simulation
# ---------------------------------------------------------------------------


cdef int64_t _cascade(const int64_t[::1] indptr, const int32_t[::1] indices,
                      const int32_t[::1] seeds, uint8_t* active,
                      int32_t* frontier, int32_t* nxt,
                      double p, int64_t max_steps, uint64_t state) noexcept nogil:
    cdef int64_t count = 0, steps = 0
    cdef Py_ssize_t flen = 0, nlen, fi
    cdef int64_t j
    cdef int32_t u, v
    cdef Py_ssize_t i
    for i in range(seeds.shape[0]):
        v = seeds[i]
        active[v] = 1
        frontier[flen] = v
        flen += 1
        count += 1
    while flen > 0 and steps < max_steps:
        nlen = 0
        for fi in range(flen):
            u = frontier[fi]
            for j in range(indptr[u], indptr[u + 1]):
                v = indices[j]
                if not active[v]:
                    state += _GAMMA
                    if <double>(_mix(state) >> 11) * _INV53 < p:
                        active[v] = 1
                        count += 1
                        nxt[nlen] = v
                        nlen += 1
        if nlen > 1:
            qsort(nxt, nlen, sizeof(int32_t), _cmp_int32)
        memcpy(frontier, nxt, nlen * sizeof(int32_t))
        flen = nlen
        steps += 1
    return count


def ic_one(indptr, indices, seeds, n, p, max_steps, seed):
    """Single IC cascade; returns the number of activated nodes (seeds included)."""
    cdef int64_t ms = _UNBOUNDED if max_steps is None else <int64_t>max_steps
    cdef const int64_t[::1] ip = indptr
    cdef const int32_t[::1] ix = indices
    seeds_arr = np.sort(np.asarray(seeds, dtype=np.int32))
    cdef const int32_t[::1] sd = seeds_arr
    active_np = np.zeros(n, dtype=np.uint8)
    frontier_np = np.empty(n, dtype=np.int32)
    nxt_np = np.empty(n, dtype=np.int32)
    cdef uint8_t[::1] active = active_np
    cdef int32_t[::1] frontier = frontier_np
    cdef int32_t[::1] nxt = nxt_np
    cdef uint8_t* active_p = &active[0] if n > 0 else NULL
    cdef int64_t cnt
    cnt = _cascade(ip, ix, sd, active_p,
                   &frontier[0] if n > 0 else NULL,
                   &nxt[0] if n > 0 else NULL,
                   p, ms, <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF))
    return int(cnt)


def ic_counts(indptr, indices, seeds, n, p, max_steps, reps, base_seed):
    """Per-replication activated counts; replication r uses derive2(base_seed, r)."""
    cdef int64_t ms = _UNBOUNDED if max_steps is None else <int64_t>max_steps
    cdef const int64_t[::1] ip = indptr
    cdef const int32_t[::1] ix = indices
    seeds_arr = np.sort(np.asarray(seeds, dtype=np.int32))
    cdef const int32_t[::1] sd = seeds_arr
    out_np = np.empty(reps, dtype=np.int32)
    cdef int32_t[::1] out = out_np
    active_np = np.zeros(n, dtype=np.uint8)
    frontier_np = np.empty(n, dtype=np.int32)
    nxt_np = np.empty(n, dtype=np.int32)
    cdef uint8_t[::1] active = active_np
    cdef int32_t[::1] frontier = frontier_np
    cdef int32_t[::1] nxt = nxt_np
    cdef uint64_t base = <uint64_t>(base_seed & 0xFFFFFFFFFFFFFFFF)
    cdef Py_ssize_t r, nreps = reps
    cdef Py_ssize_t nn = n
    cdef double pp = p
    cdef uint8_t* active_p = &active[0] if nn > 0 else NULL
    cdef int32_t* fr = &frontier[0] if nn > 0 else NULL
    cdef int32_t* nx = &nxt[0] if nn > 0 else NULL
    with nogil:
        for r in range(nreps):
            out[r] = <int32_t>_cascade(ip, ix, sd, active_p, fr, nx, pp, ms,
                                       _derive2_c(base, <uint64_t>r))
            memset(active_p, 0, nn)
    return out_np


# ---------------------------------------------------------------------------
# 2-hop influence indicators
# ---------------------------------------------------------------------------


def sigma2_nodes(indptr, indices, n, p):
    """Per-node 2-hop spread estimate for every node, as a float64 array."""
    cdef const int64_t[::1] ip = indptr
    cdef const int32_t[::1] ix = indices
    out_np = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_np
    cdef double pp = p
    cdef double p3 = pp * pp * pp
    cdef double acc
    cdef int64_t lo, hi, j, a, ahi, b, pairs
    cdef int32_t v, w, u, x, y
    cdef Py_ssize_t nn = n
    with nogil:
        for v in range(<int32_t>nn):
            acc = 0.0
            lo = ip[v]
            hi = ip[v + 1]
            for j in range(lo, hi):
                w = ix[j]
                acc += (1.0 + <double>(ip[w + 1] - ip[w]) * pp) * pp
            pairs = 0
            for j in range(lo, hi):
                u = ix[j]
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
            out[v] = 1.0 + acc - <double>pairs * p3
    return out_np


cdef inline bint _adj_contains(const int64_t[::1] ip, const int32_t[::1] ix,
                               int32_t u, int32_t v) noexcept nogil:
    cdef int64_t lo = ip[u]
    cdef int64_t hi = ip[u + 1]
    cdef int64_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if ix[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo < ip[u + 1] and ix[lo] == v


cdef double _sigma2_value(const int32_t* mem, Py_ssize_t mlen, const uint8_t* flag,
                          const int64_t[::1] ip, const int32_t[::1] ix,
                          const double[::1] sig2, double p) noexcept nogil:
    cdef double t1 = 0.0, t2 = 0.0, back
    cdef int64_t triples = 0
    cdef Py_ssize_t k
    cdef int64_t j, jj
    cdef int32_t v, l, d
    for k in range(mlen):
        v = mem[k]
        t1 += sig2[v]
        for j in range(ip[v], ip[v + 1]):
            l = ix[j]
            if flag[l]:
                back = p if _adj_contains(ip, ix, l, v) else 0.0
                t2 += p * ((1.0 + <double>(ip[l + 1] - ip[l]) * p) - back)
                for jj in range(ip[l], ip[l + 1]):
                    d = ix[jj]
                    if flag[d] and d != v:
                        triples += 1
    return t1 - t2 - (p * p) * <double>triples


cdef double _edv_value(const int32_t* mem, Py_ssize_t mlen, const uint8_t* flag,
                       const int64_t[::1] ip, const int32_t[::1] ix,
                       int32_t* tau, int32_t* touched,
                       const double[::1] qpow) noexcept nogil:
    cdef double total = <double>mlen
    cdef Py_ssize_t ntouched = 0, k, t
    cdef int64_t j
    cdef int32_t v, i
    for k in range(mlen):
        v = mem[k]
        for j in range(ip[v], ip[v + 1]):
            i = ix[j]
            if not flag[i]:
                if tau[i] == 0:
                    touched[ntouched] = i
                    ntouched += 1
                tau[i] += 1
    for t in range(ntouched):
        i = touched[t]
        total += 1.0 - qpow[tau[i]]
        tau[i] = 0
    return total


def sigma2_set_value(indptr, indices, members, sig2, p):
    """2-hop spread of a seed set (members: sorted int32 node ids)."""
    cdef const int64_t[::1] ip = indptr
    cdef const int32_t[::1] ix = indices
    cdef const double[::1] s2 = sig2
    mem_arr = np.sort(np.asarray(members, dtype=np.int32))
    cdef const int32_t[::1] mem = mem_arr
    cdef Py_ssize_t n = indptr.shape[0] - 1
    flag_np = np.zeros(n, dtype=np.uint8)
    cdef uint8_t[::1] flag = flag_np
    cdef Py_ssize_t k
    for k in range(mem.shape[0]):
        flag[mem[k]] = 1
    if mem.shape[0] == 0:
        return 0.0
    return _sigma2_value(&mem[0], mem.shape[0], &flag[0], ip, ix, s2, p)


def edv_set_value(indptr, indices, members, qpow, p):
    """1-hop expected diffusion value of a seed set."""
    cdef const int64_t[::1] ip = indptr
    cdef const int32_t[::1] ix = indices
    cdef const double[::1] qp = qpow
    mem_arr = np.sort(np.asarray(members, dtype=np.int32))
    cdef const int32_t[::1] mem = mem_arr
    cdef Py_ssize_t n = indptr.shape[0] - 1
    flag_np = np.zeros(n, dtype=np.uint8)
    tau_np = np.zeros(n, dtype=np.int32)
    touched_np = np.empty(n, dtype=np.int32)
    cdef uint8_t[::1] flag = flag_np
    cdef int32_t[::1] tau = tau_np
    cdef int32_t[::1] touched = touched_np
    cdef Py_ssize_t k
    for k in range(mem.shape[0]):
        flag[mem[k]] = 1
    if mem.shape[0] == 0:
        return 0.0
    if n == 0:
        return 0.0
    return _edv_value(&mem[0], mem.shape[0], &flag[0], ip, ix, &tau[0], &touched[0], qp)


# ---------------------------------------------------------------------------
# Metropolis machinery
# ---------------------------------------------------------------------------


def metropolis_trials(delta_e, temp, trials, seed):
    """Count acceptances of a fixed ΔE at temperature ``temp`` over ``trials``."""
    cdef uint64_t state = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef double threshold = exp(<double>delta_e / <double>temp)
    cdef int64_t accepted = 0
    cdef Py_ssize_t t, nt = trials
    with nogil:
        for t in range(nt):
            state += _GAMMA
            if threshold > <double>(_mix(state) >> 11) * _INV53:
                accepted += 1
    return int(accepted)


cdef inline Py_ssize_t _lower_bound(const int32_t* arr, Py_ssize_t length, int32_t v) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = length, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


cdef inline void _insert_sorted(int32_t* arr, Py_ssize_t* length, int32_t v) noexcept nogil:
    cdef Py_ssize_t pos = _lower_bound(arr, length[0], v)
    memmove(arr + pos + 1, arr + pos, (length[0] - pos) * sizeof(int32_t))
    arr[pos] = v
    length[0] += 1


cdef inline void _remove_value(int32_t* arr, Py_ssize_t* length, int32_t v) noexcept nogil:
    cdef Py_ssize_t pos = _lower_bound(arr, length[0], v)
    memmove(arr + pos, arr + pos + 1, (length[0] - pos - 1) * sizeof(int32_t))
    length[0] -= 1


def sa_chain(indptr, indices, costs, cand, members, budget, temp, q, p,
             objective_id, cap_mode, sig2, qpow, seed):
    """Run ``q`` Metropolis replacement steps on a seed set.

    Same semantics as the pure backend's sa_chain, restricted to the built-in
    objectives (0 = 2-hop spread, 1 = EDV).
    """
    cdef const int64_t[::1] ip = indptr
    cdef const int32_t[::1] ix = indices
    cdef const double[::1] cost = costs
    cdef const double[::1] s2 = sig2
    cdef const double[::1] qp = qpow
    cand_arr = np.ascontiguousarray(np.asarray(cand, dtype=np.int32))
    cdef const int32_t[::1] cd = cand_arr
    mem_in = np.sort(np.asarray(members, dtype=np.int32))
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t L = cd.shape[0]
    cdef Py_ssize_t cap = mem_in.shape[0] + L + 1
    mem_np = np.empty(cap, dtype=np.int32)
    mem_np[: mem_in.shape[0]] = mem_in
    flag_np = np.zeros(n, dtype=np.uint8)
    tau_np = np.zeros(n, dtype=np.int32)
    touched_np = np.empty(n if n > 0 else 1, dtype=np.int32)
    buf_np = np.empty(L if L > 0 else 1, dtype=np.int32)
    added_np = np.empty(L if L > 0 else 1, dtype=np.int32)
    cdef int32_t[::1] mem = mem_np
    cdef uint8_t[::1] flag = flag_np
    cdef int32_t[::1] tau = tau_np
    cdef int32_t[::1] touched = touched_np
    cdef int32_t[::1] buf = buf_np
    cdef int32_t[::1] added = added_np

    cdef Py_ssize_t mlen = mem_in.shape[0]
    cdef Py_ssize_t k, i, n_add, t
    cdef int obj = objective_id
    if obj != 0 and obj != 1:
        raise ValueError(f"unknown objective id {objective_id}")
    cdef int mode = cap_mode
    if mode not in (0, 1, 2):
        raise ValueError(f"unknown cap mode {cap_mode}")
    cdef double B = budget
    cdef double T = temp
    cdef double pp = p
    cdef Py_ssize_t nq = q
    cdef uint64_t state = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    cdef double total = 0.0, min_cost = 0.0, cur, new, d_e, rem, step_cap, removed_cost
    cdef int64_t evals = 1
    cdef bint improved = False
    cdef int32_t v, u, tmp
    cdef Py_ssize_t j

    for k in range(mlen):
        flag[mem[k]] = 1
    for k in range(mlen):
        total += cost[mem[k]]
    if L > 0:
        min_cost = cost[cd[0]]
        for k in range(1, L):
            if cost[cd[k]] < min_cost:
                min_cost = cost[cd[k]]

    cdef int32_t* mem_p = &mem[0]
    cdef uint8_t* flag_p = &flag[0] if n > 0 else NULL
    cdef int32_t* tau_p = &tau[0] if n > 0 else NULL
    cdef int32_t* touched_p = &touched[0]
    cdef int32_t* buf_p = &buf[0]
    cdef int32_t* added_p = &added[0]

    with nogil:
        if obj == 0:
            cur = _sigma2_value(mem_p, mlen, flag_p, ip, ix, s2, pp)
        else:
            cur = _edv_value(mem_p, mlen, flag_p, ip, ix, tau_p, touched_p, qp)
        for t in range(nq):
            if mlen == 0:
                break
            state += _GAMMA
            k = <Py_ssize_t>(_mix(state) % <uint64_t>mlen)
            v = mem_p[k]
            memmove(mem_p + k, mem_p + k + 1, (mlen - k - 1) * sizeof(int32_t))
            mlen -= 1
            flag_p[v] = 0
            removed_cost = cost[v]
            step_cap = B if mode == 0 else total
            total -= removed_cost

            if L > 0:
                memcpy(buf_p, &cd[0], L * sizeof(int32_t))
            n_add = 0
            if mode == 2:
                for i in range(L):
                    state += _GAMMA
                    j = i + <Py_ssize_t>(_mix(state) % <uint64_t>(L - i))
                    tmp = buf_p[i]
                    buf_p[i] = buf_p[j]
                    buf_p[j] = tmp
                    u = buf_p[i]
                    if u == v or flag_p[u]:
                        continue
                    if cost[u] == removed_cost:
                        _insert_sorted(mem_p, &mlen, u)
                        flag_p[u] = 1
                        total += cost[u]
                        added_p[n_add] = u
                        n_add += 1
                        break
            else:
                for i in range(L):
                    rem = step_cap - total
                    if rem < min_cost:
                        break
                    state += _GAMMA
                    j = i + <Py_ssize_t>(_mix(state) % <uint64_t>(L - i))
                    tmp = buf_p[i]
                    buf_p[i] = buf_p[j]
                    buf_p[j] = tmp
                    u = buf_p[i]
                    if u == v or flag_p[u]:
                        continue
                    if cost[u] <= rem:
                        _insert_sorted(mem_p, &mlen, u)
                        flag_p[u] = 1
                        total += cost[u]
                        added_p[n_add] = u
                        n_add += 1

            if n_add == 0:
                _insert_sorted(mem_p, &mlen, v)
                flag_p[v] = 1
                total += cost[v]
                continue

            if obj == 0:
                new = _sigma2_value(mem_p, mlen, flag_p, ip, ix, s2, pp)
            else:
                new = _edv_value(mem_p, mlen, flag_p, ip, ix, tau_p, touched_p, qp)
            evals += 1
            d_e = new - cur
            if d_e > 0:
                cur = new
                improved = True
            else:
                state += _GAMMA
                if exp(d_e / T) > <double>(_mix(state) >> 11) * _INV53:
                    cur = new
                else:
                    for k in range(n_add):
                        u = added_p[k]
                        _remove_value(mem_p, &mlen, u)
                        flag_p[u] = 0
                        total -= cost[u]
                    _insert_sorted(mem_p, &mlen, v)
                    flag_p[v] = 1
                    total += cost[v]

    return mem_np[:mlen].copy(), float(cur), int(evals), bool(improved)
