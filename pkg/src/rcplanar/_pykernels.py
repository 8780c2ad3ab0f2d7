"""Pure-Python reference versions of the hot kernels.

Every function here has a twin of the same name and signature in the
compiled ``_ckernels`` extension and must return identical results,
including bit-identical random streams.  Graphs are passed as CSR arrays
``(indptr, nbr, nbr_edge)``; ``nbr_edge[j]`` is the edge id of the j-th
adjacency entry.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_EDGE_MULT = 0xD1B54A32D192ED03
_INV53 = 1.0 / 9007199254740992.0

NO_COALESCENCE = -1


def mix64(z: int) -> int:
    """splitmix64 step: a bijection on 64-bit words with good avalanche."""
    z = (z + _GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def sweep_key(seed: int, stream: int, t: int) -> int:
    return mix64(mix64(mix64(seed & MASK64) ^ (stream & MASK64)) ^ (t & MASK64))


def edge_uniform(key: int, e: int) -> float:
    return (mix64(key ^ ((e * _EDGE_MULT) & MASK64)) >> 11) * _INV53


def stream_uniforms(seed: int, stream: int, t: int, n_edges: int) -> np.ndarray:
    """Uniforms consumed by sweep ``t`` (counted back from time 0) of a stream."""
    key = sweep_key(seed, stream, t)
    return np.array([edge_uniform(key, e) for e in range(n_edges)])


def stream_block(seed: int, stream: int, t0: int, n_sweeps: int, n_edges: int) -> np.ndarray:
    """Rows ``t0 .. t0 + n_sweeps - 1`` of :func:`stream_uniforms`."""
    out = np.empty((n_sweeps, n_edges))
    for i in range(n_sweeps):
        out[i] = stream_uniforms(seed, stream, (t0 + i) & MASK64, n_edges)
    return out


# ---------------------------------------------------------------------------
# connectivity helpers


def _connected_off(indptr, nbr, nbr_edge, state, u, v, skip):
    """Is there an open path u -> v avoiding edge ``skip``?"""
    if u == v:
        return True
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        for j in range(indptr[x], indptr[x + 1]):
            e = nbr_edge[j]
            if e == skip or not state[e]:
                continue
            y = nbr[j]
            if y == v:
                return True
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


# ---------------------------------------------------------------------------
# heat-bath dynamics


def heat_bath_sweeps(indptr, nbr, nbr_edge, eu, ev, thr_conn, thr_disc, state, uniforms):
    """Apply ``len(uniforms)`` sweeps in edge-id order; ``state`` is updated in place.

    Row ``i`` of ``uniforms`` drives sweep ``i``.
    """
    n_e = len(eu)
    for row in uniforms:
        for e in range(n_e):
            conn = _connected_off(indptr, nbr, nbr_edge, state, eu[e], ev[e], e)
            state[e] = 1 if row[e] < (thr_conn[e] if conn else thr_disc[e]) else 0
    return state


def coupled_sweeps(indptr, nbr, nbr_edge, eu, ev, thr_lo_conn, thr_lo_disc,
                   thr_hi_conn, thr_hi_disc, lo, hi, uniforms):
    """Two chains with their own thresholds driven by the same uniforms.

    Returns the number of single-edge updates after which ``lo <= hi`` failed.
    """
    n_e = len(eu)
    violations = 0
    for row in uniforms:
        for e in range(n_e):
            c_lo = _connected_off(indptr, nbr, nbr_edge, lo, eu[e], ev[e], e)
            c_hi = _connected_off(indptr, nbr, nbr_edge, hi, eu[e], ev[e], e)
            lo[e] = 1 if row[e] < (thr_lo_conn[e] if c_lo else thr_lo_disc[e]) else 0
            hi[e] = 1 if row[e] < (thr_hi_conn[e] if c_hi else thr_hi_disc[e]) else 0
            if lo[e] > hi[e]:
                violations += 1
    return violations


def cftp_batch(indptr, nbr, nbr_edge, eu, ev, thr_conn, thr_disc, seed, first_stream,
               n_draws, max_doublings):
    """Monotone coupling from the past, one independent stream per draw.

    Returns ``(configs, horizons, violations)``.  ``horizons[i]`` is the number
    of sweeps that draw ``i`` needed, or ``NO_COALESCENCE`` (and the batch stops
    there) if ``2**max_doublings`` sweeps did not suffice.
    """
    n_e = len(eu)
    configs = np.zeros((n_draws, n_e), dtype=np.uint8)
    horizons = np.zeros(n_draws, dtype=np.int64)
    violations = 0
    for i in range(n_draws):
        stream = first_stream + i
        T = 1
        done = False
        for _ in range(max_doublings + 1):
            lo = [0] * n_e
            hi = [1] * n_e
            for t in range(T, 0, -1):
                key = sweep_key(seed, stream, t)
                for e in range(n_e):
                    u = edge_uniform(key, e)
                    c_lo = _connected_off(indptr, nbr, nbr_edge, lo, eu[e], ev[e], e)
                    c_hi = _connected_off(indptr, nbr, nbr_edge, hi, eu[e], ev[e], e)
                    lo[e] = 1 if u < (thr_conn[e] if c_lo else thr_disc[e]) else 0
                    hi[e] = 1 if u < (thr_conn[e] if c_hi else thr_disc[e]) else 0
                    if lo[e] > hi[e]:
                        violations += 1
            if lo == hi:
                configs[i, :] = lo
                horizons[i] = T
                done = True
                break
            T *= 2
        if not done:
            horizons[i] = NO_COALESCENCE
            return configs[: i + 1], horizons[: i + 1], violations
    return configs, horizons, violations


def batch_connectivity(indptr, nbr, nbr_edge, configs, source, target_mask, allowed_mask):
    """For each config row: is ``source`` joined to a target through allowed open edges?"""
    out = np.zeros(len(configs), dtype=np.uint8)
    n_v = len(indptr) - 1
    for i, state in enumerate(configs):
        if target_mask[source]:
            out[i] = 1
            continue
        seen = [False] * n_v
        seen[source] = True
        stack = [source]
        hit = False
        while stack and not hit:
            x = stack.pop()
            for j in range(indptr[x], indptr[x + 1]):
                e = nbr_edge[j]
                if not state[e] or not allowed_mask[e]:
                    continue
                y = nbr[j]
                if target_mask[y]:
                    hit = True
                    break
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        out[i] = hit
    return out


# ---------------------------------------------------------------------------
# exhaustive random-cluster enumeration


def rc_enumerate(n_vertices, eu, ev, edge_class, marks, ev_source, ev_targets, ev_allowed,
                 keep_kappa):
    """Enumerate all 2**E configurations.

    Tallies configurations by ``(open edges of class 0, open edges of class 1,
    number of unmarked components)``.  Returns ``(table, edge_table,
    event_table, kappa)`` where ``edge_table[e]`` only counts configurations
    with ``e`` open and ``event_table[j]`` those in which event ``j`` occurs.
    ``kappa`` holds the per-configuration component count when requested.
    """
    n_e = len(eu)
    n0 = int(sum(1 for c in edge_class if c == 0))
    n1 = n_e - n0
    n_ev = len(ev_source)
    shape = (n0 + 1, n1 + 1, n_vertices + 1)
    table = np.zeros(shape, dtype=np.int64)
    edge_table = np.zeros((n_e,) + shape, dtype=np.int64)
    event_table = np.zeros((n_ev,) + shape, dtype=np.int64)
    kappa_out = np.zeros(1 << n_e if keep_kappa else 0, dtype=np.uint8)
    for mask in range(1 << n_e):
        parent = list(range(n_vertices))
        k0 = k1 = 0
        for e in range(n_e):
            if mask >> e & 1:
                if edge_class[e]:
                    k1 += 1
                else:
                    k0 += 1
                a, b = _find(parent, eu[e]), _find(parent, ev[e])
                if a != b:
                    parent[a] = b
        marked_root = [False] * n_vertices
        for v in range(n_vertices):
            if marks[v]:
                marked_root[_find(parent, v)] = True
        kappa = 0
        for v in range(n_vertices):
            if parent[v] == v and not marked_root[v]:
                kappa += 1
        table[k0, k1, kappa] += 1
        for e in range(n_e):
            if mask >> e & 1:
                edge_table[e, k0, k1, kappa] += 1
        for j in range(n_ev):
            par = list(range(n_vertices))
            for e in range(n_e):
                if mask >> e & 1 and ev_allowed[j][e]:
                    a, b = _find(par, eu[e]), _find(par, ev[e])
                    if a != b:
                        par[a] = b
            rs = _find(par, ev_source[j])
            if any(ev_targets[j][t] and _find(par, t) == rs for t in range(n_vertices)):
                event_table[j, k0, k1, kappa] += 1
        if keep_kappa:
            kappa_out[mask] = kappa
    return table, edge_table, event_table, kappa_out


# ---------------------------------------------------------------------------
# connected-set enumeration (Redelmeier)


def redelmeier(indptr, nbr, root, max_size, degree, budget, track_best):
    """Enumerate connected vertex sets containing ``root`` of size <= max_size.

    Returns ``(counts, best_boundary, best_sets, status)``.  ``counts[m]`` is the
    number of sets of size ``m``.  When ``track_best`` is set,
    ``best_boundary[m]`` is the minimum of ``degree*m - 2|E(K)|`` over those
    sets and ``best_sets[m]`` the lexicographically smallest sorted vertex
    tuple attaining it.  ``status`` is 0, or 1 if ``budget`` sets were exceeded.
    """
    counts = np.zeros(max_size + 1, dtype=np.int64)
    best_b = np.full(max_size + 1, -1, dtype=np.int64)
    best_sets = np.full((max_size + 1, max_size), -1, dtype=np.int64)
    in_set = set()
    seen = {root}
    current = []
    total = [0]

    def rec(untried, n_inner):
        while untried:
            v = untried.pop()
            inner = n_inner
            for j in range(indptr[v], indptr[v + 1]):
                if nbr[j] in in_set:
                    inner += 1
            current.append(v)
            in_set.add(v)
            m = len(current)
            counts[m] += 1
            total[0] += 1
            if total[0] > budget:
                return 1
            if track_best:
                b = degree * m - 2 * inner
                if best_b[m] < 0 or b < best_b[m]:
                    best_b[m] = b
                    best_sets[m, :m] = sorted(current)
                elif b == best_b[m]:
                    cand = sorted(current)
                    if cand < list(best_sets[m, :m]):
                        best_sets[m, :m] = cand
            if m < max_size:
                new = []
                for j in range(indptr[v], indptr[v + 1]):
                    w = nbr[j]
                    if w not in seen:
                        seen.add(w)
                        new.append(w)
                if rec(list(untried) + new, inner):
                    return 1
                for w in new:
                    seen.discard(w)
            current.pop()
            in_set.discard(v)
        return 0

    status = rec([root], 0)
    return counts, best_b, best_sets, status
