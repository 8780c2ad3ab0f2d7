# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot kernels; semantics match ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int64_t, uint8_t
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef uint64_t _GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t _EDGE_MULT = 0xD1B54A32D192ED03ULL
cdef double _INV53 = 1.0 / 9007199254740992.0

NO_COALESCENCE = -1


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = z + _GOLDEN
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t _key(uint64_t seed, uint64_t stream, uint64_t t) nogil:
    return _mix(_mix(_mix(seed) ^ stream) ^ t)


cdef inline double _unif(uint64_t key, uint64_t e) nogil:
    return <double>(_mix(key ^ (e * _EDGE_MULT)) >> 11) * _INV53


def mix64(z):
    return int(_mix(<uint64_t>(int(z) & 0xFFFFFFFFFFFFFFFF)))


def sweep_key(seed, stream, t):
    m = 0xFFFFFFFFFFFFFFFF
    return int(_key(<uint64_t>(int(seed) & m), <uint64_t>(int(stream) & m),
                    <uint64_t>(int(t) & m)))


def edge_uniform(key, e):
    return _unif(<uint64_t>(int(key) & 0xFFFFFFFFFFFFFFFF), <uint64_t>e)


def stream_uniforms(seed, stream, t, Py_ssize_t n_edges):
    cdef uint64_t k = <uint64_t>sweep_key(seed, stream, t)
    cdef cnp.ndarray[double, ndim=1] out = np.empty(n_edges)
    cdef Py_ssize_t e
    for e in range(n_edges):
        out[e] = _unif(k, <uint64_t>e)
    return out


def stream_block(seed, stream, t0, Py_ssize_t n_sweeps, Py_ssize_t n_edges):
    """Rows ``t0 .. t0 + n_sweeps - 1`` of ``stream_uniforms``."""
    cdef uint64_t m = 0xFFFFFFFFFFFFFFFF
    cdef uint64_t useed = <uint64_t>(int(seed) & m)
    cdef uint64_t ustream = <uint64_t>(int(stream) & m)
    cdef uint64_t ut0 = <uint64_t>(int(t0) & m)
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n_sweeps, n_edges))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, e
    cdef uint64_t k
    with nogil:
        for i in range(n_sweeps):
            k = _key(useed, ustream, ut0 + <uint64_t>i)
            for e in range(n_edges):
                o[i, e] = _unif(k, <uint64_t>e)
    return out


cdef struct Graph:
    int64_t n_v
    int64_t n_e
    int64_t* indptr
    int64_t* nbr
    int64_t* nbr_edge
    int64_t* eu
    int64_t* ev
    int64_t* stamp
    int64_t* stack
    int64_t cur


cdef inline bint _connected_off(Graph* g, uint8_t* state, int64_t u, int64_t v,
                                int64_t skip) nogil:
    cdef int64_t top, x, y, j, e
    if u == v:
        return True
    g.cur += 1
    g.stamp[u] = g.cur
    g.stack[0] = u
    top = 1
    while top > 0:
        top -= 1
        x = g.stack[top]
        for j in range(g.indptr[x], g.indptr[x + 1]):
            e = g.nbr_edge[j]
            if e == skip or not state[e]:
                continue
            y = g.nbr[j]
            if y == v:
                return True
            if g.stamp[y] != g.cur:
                g.stamp[y] = g.cur
                g.stack[top] = y
                top += 1
    return False


cdef class _GraphHolder:
    cdef Graph g
    cdef object refs

    def __cinit__(self, indptr, nbr, nbr_edge, eu, ev):
        a = np.ascontiguousarray(indptr, dtype=np.int64)
        b = np.ascontiguousarray(nbr, dtype=np.int64)
        c = np.ascontiguousarray(nbr_edge, dtype=np.int64)
        d = np.ascontiguousarray(eu, dtype=np.int64)
        f = np.ascontiguousarray(ev, dtype=np.int64)
        n_v = a.shape[0] - 1
        st = np.zeros(max(n_v, 1), dtype=np.int64)
        sk = np.zeros(max(n_v, 1), dtype=np.int64)
        self.refs = (a, b, c, d, f, st, sk)
        self.g.n_v = n_v
        self.g.n_e = d.shape[0]
        self.g.indptr = <int64_t*>cnp.PyArray_DATA(a)
        self.g.nbr = <int64_t*>cnp.PyArray_DATA(b)
        self.g.nbr_edge = <int64_t*>cnp.PyArray_DATA(c)
        self.g.eu = <int64_t*>cnp.PyArray_DATA(d)
        self.g.ev = <int64_t*>cnp.PyArray_DATA(f)
        self.g.stamp = <int64_t*>cnp.PyArray_DATA(st)
        self.g.stack = <int64_t*>cnp.PyArray_DATA(sk)
        self.g.cur = 0


def heat_bath_sweeps(indptr, nbr, nbr_edge, eu, ev, thr_conn, thr_disc, state, uniforms):
    cdef _GraphHolder h = _GraphHolder(indptr, nbr, nbr_edge, eu, ev)
    cdef Graph* g = &h.g
    cdef double[::1] tc = np.ascontiguousarray(thr_conn, dtype=np.float64)
    cdef double[::1] td = np.ascontiguousarray(thr_disc, dtype=np.float64)
    cdef double[:, ::1] U = np.ascontiguousarray(uniforms, dtype=np.float64).reshape(-1, g.n_e)
    cdef cnp.ndarray[uint8_t, ndim=1] st = np.ascontiguousarray(state, dtype=np.uint8)
    cdef uint8_t* s = <uint8_t*>cnp.PyArray_DATA(st)
    cdef Py_ssize_t r, e
    cdef bint c
    with nogil:
        for r in range(U.shape[0]):
            for e in range(g.n_e):
                c = _connected_off(g, s, g.eu[e], g.ev[e], e)
                s[e] = 1 if U[r, e] < (tc[e] if c else td[e]) else 0
    if isinstance(state, np.ndarray) and state.dtype == np.uint8 and state.flags.c_contiguous:
        if st is not state:
            state[:] = st
        return state
    for e in range(g.n_e):
        state[e] = int(st[e])
    return state


def coupled_sweeps(indptr, nbr, nbr_edge, eu, ev, thr_lo_conn, thr_lo_disc,
                   thr_hi_conn, thr_hi_disc, lo, hi, uniforms):
    cdef _GraphHolder h = _GraphHolder(indptr, nbr, nbr_edge, eu, ev)
    cdef Graph* g = &h.g
    cdef double[::1] lc = np.ascontiguousarray(thr_lo_conn, dtype=np.float64)
    cdef double[::1] ld = np.ascontiguousarray(thr_lo_disc, dtype=np.float64)
    cdef double[::1] hc = np.ascontiguousarray(thr_hi_conn, dtype=np.float64)
    cdef double[::1] hd = np.ascontiguousarray(thr_hi_disc, dtype=np.float64)
    cdef double[:, ::1] U = np.ascontiguousarray(uniforms, dtype=np.float64).reshape(-1, g.n_e)
    cdef cnp.ndarray[uint8_t, ndim=1] a = np.array(lo, dtype=np.uint8)
    cdef cnp.ndarray[uint8_t, ndim=1] b = np.array(hi, dtype=np.uint8)
    cdef uint8_t* sa = <uint8_t*>cnp.PyArray_DATA(a)
    cdef uint8_t* sb = <uint8_t*>cnp.PyArray_DATA(b)
    cdef Py_ssize_t r, e
    cdef int64_t viol = 0
    cdef bint c1, c2
    with nogil:
        for r in range(U.shape[0]):
            for e in range(g.n_e):
                c1 = _connected_off(g, sa, g.eu[e], g.ev[e], e)
                c2 = _connected_off(g, sb, g.eu[e], g.ev[e], e)
                sa[e] = 1 if U[r, e] < (lc[e] if c1 else ld[e]) else 0
                sb[e] = 1 if U[r, e] < (hc[e] if c2 else hd[e]) else 0
                if sa[e] > sb[e]:
                    viol += 1
    for e in range(g.n_e):
        lo[e] = int(a[e])
        hi[e] = int(b[e])
    return int(viol)


def cftp_batch(indptr, nbr, nbr_edge, eu, ev, thr_conn, thr_disc, seed, first_stream,
               Py_ssize_t n_draws, int max_doublings):
    cdef _GraphHolder h = _GraphHolder(indptr, nbr, nbr_edge, eu, ev)
    cdef Graph* g = &h.g
    cdef double[::1] tc = np.ascontiguousarray(thr_conn, dtype=np.float64)
    cdef double[::1] td = np.ascontiguousarray(thr_disc, dtype=np.float64)
    cdef Py_ssize_t n_e = g.n_e
    cdef cnp.ndarray[uint8_t, ndim=2] configs = np.zeros((n_draws, n_e), dtype=np.uint8)
    cdef cnp.ndarray[int64_t, ndim=1] horizons = np.zeros(n_draws, dtype=np.int64)
    cdef cnp.ndarray[uint8_t, ndim=1] lo_a = np.zeros(max(n_e, 1), dtype=np.uint8)
    cdef cnp.ndarray[uint8_t, ndim=1] hi_a = np.zeros(max(n_e, 1), dtype=np.uint8)
    cdef uint8_t* lo = <uint8_t*>cnp.PyArray_DATA(lo_a)
    cdef uint8_t* hi = <uint8_t*>cnp.PyArray_DATA(hi_a)
    cdef uint64_t useed = <uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t stream0 = <uint64_t>(int(first_stream) & 0xFFFFFFFFFFFFFFFF)
    cdef uint64_t key
    cdef int64_t T, t, viol = 0
    cdef Py_ssize_t i, e, k
    cdef int attempt
    cdef bint c1, c2, same, done
    cdef double u
    cdef Py_ssize_t stop = n_draws
    with nogil:
        for i in range(n_draws):
            T = 1
            done = False
            for attempt in range(max_doublings + 1):
                for e in range(n_e):
                    lo[e] = 0
                    hi[e] = 1
                t = T
                while t >= 1:
                    key = _key(useed, stream0 + <uint64_t>i, <uint64_t>t)
                    for e in range(n_e):
                        u = _unif(key, <uint64_t>e)
                        c1 = _connected_off(g, lo, g.eu[e], g.ev[e], e)
                        c2 = _connected_off(g, hi, g.eu[e], g.ev[e], e)
                        lo[e] = 1 if u < (tc[e] if c1 else td[e]) else 0
                        hi[e] = 1 if u < (tc[e] if c2 else td[e]) else 0
                        if lo[e] > hi[e]:
                            viol += 1
                    t -= 1
                same = True
                for e in range(n_e):
                    if lo[e] != hi[e]:
                        same = False
                        break
                if same:
                    for e in range(n_e):
                        configs[i, e] = lo[e]
                    horizons[i] = T
                    done = True
                    break
                T *= 2
            if not done:
                horizons[i] = -1
                stop = i + 1
                break
    return configs[:stop], horizons[:stop], int(viol)


def batch_connectivity(indptr, nbr, nbr_edge, configs, Py_ssize_t source, target_mask,
                       allowed_mask):
    cdef int64_t[::1] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef int64_t[::1] nb = np.ascontiguousarray(nbr, dtype=np.int64)
    cdef int64_t[::1] ne = np.ascontiguousarray(nbr_edge, dtype=np.int64)
    cdef uint8_t[:, ::1] C = np.ascontiguousarray(configs, dtype=np.uint8)
    cdef uint8_t[::1] tm = np.ascontiguousarray(target_mask, dtype=np.uint8)
    cdef uint8_t[::1] am = np.ascontiguousarray(allowed_mask, dtype=np.uint8)
    cdef Py_ssize_t n_v = ip.shape[0] - 1
    cdef Py_ssize_t n_c = C.shape[0]
    cdef cnp.ndarray[uint8_t, ndim=1] out = np.zeros(n_c, dtype=np.uint8)
    cdef cnp.ndarray[int64_t, ndim=1] stamp_a = np.zeros(max(n_v, 1), dtype=np.int64)
    cdef cnp.ndarray[int64_t, ndim=1] stack_a = np.zeros(max(n_v, 1), dtype=np.int64)
    cdef int64_t* stamp = <int64_t*>cnp.PyArray_DATA(stamp_a)
    cdef int64_t* stack = <int64_t*>cnp.PyArray_DATA(stack_a)
    cdef Py_ssize_t i, j, top, x, y, e
    cdef bint hit
    with nogil:
        for i in range(n_c):
            if tm[source]:
                out[i] = 1
                continue
            stamp[source] = i + 1
            stack[0] = source
            top = 1
            hit = False
            while top > 0 and not hit:
                top -= 1
                x = stack[top]
                for j in range(ip[x], ip[x + 1]):
                    e = ne[j]
                    if not C[i, e] or not am[e]:
                        continue
                    y = nb[j]
                    if tm[y]:
                        hit = True
                        break
                    if stamp[y] != i + 1:
                        stamp[y] = i + 1
                        stack[top] = y
                        top += 1
            out[i] = hit
    return out


cdef inline int64_t _find(int64_t* parent, int64_t x) nogil:
    cdef int64_t root = x, nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def rc_enumerate(Py_ssize_t n_vertices, eu, ev, edge_class, marks, ev_source, ev_targets,
                 ev_allowed, bint keep_kappa):
    cdef int64_t[::1] U = np.ascontiguousarray(eu, dtype=np.int64)
    cdef int64_t[::1] V = np.ascontiguousarray(ev, dtype=np.int64)
    cdef uint8_t[::1] cls = np.ascontiguousarray(edge_class, dtype=np.uint8)
    cdef uint8_t[::1] mk = np.ascontiguousarray(marks, dtype=np.uint8)
    cdef Py_ssize_t n_e = U.shape[0]
    cdef Py_ssize_t n_ev = len(ev_source)
    cdef int64_t[::1] src = np.ascontiguousarray(ev_source, dtype=np.int64).reshape(-1)
    cdef uint8_t[:, ::1] tgt = np.ascontiguousarray(ev_targets, dtype=np.uint8).reshape(n_ev, n_vertices)
    cdef uint8_t[:, ::1] alw = np.ascontiguousarray(ev_allowed, dtype=np.uint8).reshape(n_ev, n_e)
    cdef Py_ssize_t n1 = 0, e, v, j
    for e in range(n_e):
        if cls[e]:
            n1 += 1
    cdef Py_ssize_t n0 = n_e - n1
    shape = (n0 + 1, n1 + 1, n_vertices + 1)
    table_a = np.zeros(shape, dtype=np.int64)
    edge_a = np.zeros((n_e,) + shape, dtype=np.int64)
    event_a = np.zeros((n_ev,) + shape, dtype=np.int64)
    kappa_a = np.zeros((1 << n_e) if keep_kappa else 0, dtype=np.uint8)
    cdef int64_t[:, :, ::1] table = table_a
    cdef int64_t[:, :, :, ::1] etab = edge_a
    cdef int64_t[:, :, :, ::1] evtab = event_a
    cdef uint8_t[::1] kap = kappa_a
    cdef int64_t* parent = <int64_t*>malloc(max(n_vertices, 1) * sizeof(int64_t))
    cdef uint8_t* mroot = <uint8_t*>malloc(max(n_vertices, 1))
    cdef uint64_t mask, total = (<uint64_t>1) << n_e
    cdef int64_t a, b, k0, k1, kappa, rs
    cdef bint hit
    try:
        with nogil:
            mask = 0
            while mask < total:
                for v in range(n_vertices):
                    parent[v] = v
                    mroot[v] = 0
                k0 = 0
                k1 = 0
                for e in range(n_e):
                    if (mask >> e) & 1:
                        if cls[e]:
                            k1 += 1
                        else:
                            k0 += 1
                        a = _find(parent, U[e])
                        b = _find(parent, V[e])
                        if a != b:
                            parent[a] = b
                for v in range(n_vertices):
                    if mk[v]:
                        mroot[_find(parent, v)] = 1
                kappa = 0
                for v in range(n_vertices):
                    if parent[v] == v and not mroot[v]:
                        kappa += 1
                table[k0, k1, kappa] += 1
                for e in range(n_e):
                    if (mask >> e) & 1:
                        etab[e, k0, k1, kappa] += 1
                for j in range(n_ev):
                    for v in range(n_vertices):
                        parent[v] = v
                    for e in range(n_e):
                        if (mask >> e) & 1 and alw[j, e]:
                            a = _find(parent, U[e])
                            b = _find(parent, V[e])
                            if a != b:
                                parent[a] = b
                    rs = _find(parent, src[j])
                    hit = False
                    for v in range(n_vertices):
                        if tgt[j, v] and _find(parent, v) == rs:
                            hit = True
                            break
                    if hit:
                        evtab[j, k0, k1, kappa] += 1
                if keep_kappa:
                    kap[mask] = <uint8_t>kappa
                mask += 1
    finally:
        free(parent)
        free(mroot)
    return table_a, edge_a, event_a, kappa_a


cdef struct RState:
    int64_t* indptr
    int64_t* nbr
    int64_t max_size
    int64_t degree
    int64_t budget
    int64_t total
    bint track
    uint8_t* in_set
    uint8_t* seen
    int64_t* current
    int64_t* counts
    int64_t* best_b
    int64_t* best_sets
    int64_t* scratch
    int64_t* pool


cdef void _sort_small(int64_t* a, int64_t n) nogil:
    cdef int64_t i, j, x
    for i in range(1, n):
        x = a[i]
        j = i - 1
        while j >= 0 and a[j] > x:
            a[j + 1] = a[j]
            j -= 1
        a[j + 1] = x


cdef int _rec(RState* S, int64_t* untried, int64_t n_untried, int64_t m, int64_t n_inner) nogil:
    # ``untried`` is owned by this level; children get a fresh slice of the pool
    cdef int64_t v, w, j, inner, b, i, n_new, k
    cdef int64_t* child = untried + n_untried + S.degree * 2 + 8
    cdef bint less
    while n_untried > 0:
        n_untried -= 1
        v = untried[n_untried]
        inner = n_inner
        for j in range(S.indptr[v], S.indptr[v + 1]):
            if S.in_set[S.nbr[j]]:
                inner += 1
        S.current[m] = v
        S.in_set[v] = 1
        S.counts[m + 1] += 1
        S.total += 1
        if S.total > S.budget:
            return 1
        if S.track:
            b = S.degree * (m + 1) - 2 * inner
            for i in range(m + 1):
                S.scratch[i] = S.current[i]
            _sort_small(S.scratch, m + 1)
            if S.best_b[m + 1] < 0 or b < S.best_b[m + 1]:
                S.best_b[m + 1] = b
                for i in range(m + 1):
                    S.best_sets[(m + 1) * S.max_size + i] = S.scratch[i]
            elif b == S.best_b[m + 1]:
                less = False
                for i in range(m + 1):
                    k = S.best_sets[(m + 1) * S.max_size + i]
                    if S.scratch[i] != k:
                        less = S.scratch[i] < k
                        break
                if less:
                    for i in range(m + 1):
                        S.best_sets[(m + 1) * S.max_size + i] = S.scratch[i]
        if m + 1 < S.max_size:
            for i in range(n_untried):
                child[i] = untried[i]
            n_new = 0
            for j in range(S.indptr[v], S.indptr[v + 1]):
                w = S.nbr[j]
                if not S.seen[w]:
                    S.seen[w] = 1
                    child[n_untried + n_new] = w
                    n_new += 1
            if _rec(S, child, n_untried + n_new, m + 1, inner):
                return 1
            for i in range(n_new):
                S.seen[child[n_untried + i]] = 0
        S.in_set[v] = 0
    return 0


def redelmeier(indptr, nbr, Py_ssize_t root, Py_ssize_t max_size, Py_ssize_t degree,
               budget, bint track_best):
    ip = np.ascontiguousarray(indptr, dtype=np.int64)
    nb = np.ascontiguousarray(nbr, dtype=np.int64)
    n_v = ip.shape[0] - 1
    max_deg = int(np.max(np.diff(ip))) if n_v else 0
    width = max_deg + degree * 2 + 8
    counts = np.zeros(max_size + 1, dtype=np.int64)
    best_b = np.full(max_size + 1, -1, dtype=np.int64)
    best_sets = np.full((max_size + 1, max_size), -1, dtype=np.int64)
    in_set = np.zeros(n_v, dtype=np.uint8)
    seen = np.zeros(n_v, dtype=np.uint8)
    current = np.zeros(max_size + 1, dtype=np.int64)
    scratch = np.zeros(max_size + 1, dtype=np.int64)
    # level k holds at most 1 + k * max_deg untried entries
    pool = np.zeros((max_size + 2) * (max_size * max_deg + width + 2), dtype=np.int64)
    cdef RState S
    S.indptr = <int64_t*>cnp.PyArray_DATA(ip)
    S.nbr = <int64_t*>cnp.PyArray_DATA(nb)
    S.max_size = max_size
    S.degree = degree
    S.budget = min(int(budget), 2 ** 62)
    S.total = 0
    S.track = track_best
    S.in_set = <uint8_t*>cnp.PyArray_DATA(in_set)
    S.seen = <uint8_t*>cnp.PyArray_DATA(seen)
    S.current = <int64_t*>cnp.PyArray_DATA(current)
    S.counts = <int64_t*>cnp.PyArray_DATA(counts)
    S.best_b = <int64_t*>cnp.PyArray_DATA(best_b)
    S.best_sets = <int64_t*>cnp.PyArray_DATA(best_sets)
    S.scratch = <int64_t*>cnp.PyArray_DATA(scratch)
    S.pool = <int64_t*>cnp.PyArray_DATA(pool)
    cdef int status
    if max_size < 1:
        return counts, best_b, best_sets, 0
    seen[root] = 1
    S.pool[0] = root
    with nogil:
        status = _rec(&S, S.pool, 1, 0, 0)
    return counts, best_b, best_sets, int(status)
