"""Single-edge heat-bath dynamics and synchronously coupled chains."""

from __future__ import annotations

import numpy as np

from .. import kernels as K
from ..errors import DomainError
from .instance import RCInstance, csr

# stream ids used by forward chains; CFTP draws use streams 0, 1, 2, ...
CHAIN_STREAM_BASE = 1 << 62


class EdgeConfig:
    """Edge states of an instance with a cached count of unmarked components.

    Connectivity is taken on the instance's chain graph, where marked
    vertices are one vertex, so ``kappa`` is the weighted component count
    of the measure (free count, or wired count avoiding the boundary).
    """

    def __init__(self, inst: RCInstance, state=None):
        self.inst = inst
        self.graph = inst.chain_graph()
        self.state = (np.zeros(inst.n_edges, dtype=np.uint8) if state is None
                      else np.array(state, dtype=np.uint8))
        if self.state.shape != (inst.n_edges,):
            raise DomainError("state length does not match the instance")
        self.kappa = self.recount()

    def recount(self) -> int:
        """Component count from scratch (union-find)."""
        g = self.graph
        parent = list(range(g.n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in np.flatnonzero(self.state):
            parent[find(int(g.eu[e]))] = find(int(g.ev[e]))
        roots = {find(v) for v in range(g.n_vertices)}
        if g.super_node is not None:
            roots.discard(find(g.super_node))
        return len(roots)

    def connected_off(self, e: int) -> bool:
        g = self.graph
        return K.py._connected_off(g.indptr, g.nbr, g.nbr_edge, self.state,
                                   int(g.eu[e]), int(g.ev[e]), e)

    def copy(self) -> "EdgeConfig":
        return EdgeConfig(self.inst, self.state)


def heat_bath_step(config: EdgeConfig, e: int, u: float) -> EdgeConfig:
    """Resample edge ``e`` from its conditional law given the rest, using uniform ``u``.

    Opens with probability ``p_e`` if the endpoints are joined off ``e``,
    else ``p_e / (p_e + (1 - p_e) q)``.  Updates ``config`` in place.
    """
    inst = config.inst
    pe = float(inst.p_edge[e])
    q = float(inst.q)
    conn = config.connected_off(e)
    new = 1 if u < (pe if conn else pe / (pe + (1 - pe) * q)) else 0
    old = int(config.state[e])
    if new != old:
        config.state[e] = new
        if not conn:
            config.kappa += -1 if new else 1
    return config


def chain_uniforms(seed: int, stream: int, t0: int, n_sweeps: int, n_edges: int) -> np.ndarray:
    """Uniforms of sweeps ``t0 .. t0 + n_sweeps - 1`` of a forward stream."""
    return K.stream_block(seed, CHAIN_STREAM_BASE + stream, t0, n_sweeps, n_edges)


def run_chain(inst: RCInstance, n_sweeps: int, seed: int, state=None, stream: int = 0,
              record_every: int = 0, t0: int = 0):
    """Systematic-scan heat bath: ``n_sweeps`` sweeps in edge-id order.

    Returns the final state, and if ``record_every > 0`` also the array of
    states after every ``record_every``-th sweep.
    """
    g = inst.chain_graph()
    tc, td = inst.thresholds()
    st = np.zeros(inst.n_edges, dtype=np.uint8) if state is None else np.array(state, dtype=np.uint8)
    rec = []
    block = record_every if record_every > 0 else max(1, min(n_sweeps, 4096))
    done = 0
    while done < n_sweeps:
        m = min(block, n_sweeps - done)
        U = chain_uniforms(seed, stream, t0 + done, m, inst.n_edges)
        K.heat_bath_sweeps(g.indptr, g.nbr, g.nbr_edge, g.eu, g.ev, tc, td, st, U)
        done += m
        if record_every > 0 and m == record_every:
            rec.append(st.copy())
    if record_every > 0:
        return st, np.array(rec, dtype=np.uint8).reshape(-1, inst.n_edges)
    return st


def hub_graph(inst: RCInstance):
    """The instance's base graph plus a hub joined to every boundary vertex.

    Heat-bath updates depend only on connectivity, so a wired chain equals a
    chain on this graph with hub edges held open, and a free chain one with
    them held closed.  Returns ``(n_vertices, eu, ev, indptr, nbr, nbr_edge)``.
    """
    if inst.bc == "apex":
        raise DomainError("hub coupling is not defined for apex instances")
    n = inst.n_vertices
    bnd = sorted(inst.boundary)
    eu = np.concatenate([inst.eu, np.full(len(bnd), n, dtype=np.int64)])
    ev = np.concatenate([inst.ev, np.array(bnd, dtype=np.int64)])
    return (n + 1, eu, ev, *csr(n + 1, eu, ev))


def _hub_thresholds(inst: RCInstance, n_hub: int):
    tc, td = inst.thresholds()
    fill = 1.0 if inst.marks else 0.0
    hub = np.full(n_hub, fill)
    return np.concatenate([tc, hub]), np.concatenate([td, hub])


def coupled_chains(lo_inst: RCInstance, hi_inst: RCInstance, n_sweeps: int, seed: int,
                   stream: int = 0, check_monotone: bool = True):
    """Run ``lo`` from all-closed and ``hi`` from all-open with shared uniforms.

    Both instances must share their base graph and boundary.  Returns
    ``(lo_state, hi_state, violations)`` on the base edges, where
    ``violations`` counts single-edge updates after which ``lo <= hi`` failed.
    With ``check_monotone`` a DomainError is raised unless the thresholds are
    ordered, i.e. unless the coupling is monotone.
    """
    if lo_inst.edges[: lo_inst.base_edges] != hi_inst.edges[: hi_inst.base_edges] or \
            lo_inst.boundary != hi_inst.boundary:
        raise DomainError("coupled instances must share graph and boundary")
    n, eu, ev, indptr, nbr, nbr_edge = hub_graph(lo_inst)
    n_hub = len(eu) - lo_inst.n_edges
    lc, ld = _hub_thresholds(lo_inst, n_hub)
    hc, hd = _hub_thresholds(hi_inst, n_hub)
    if check_monotone and (np.any(lc > hc) or np.any(ld > hd)):
        raise DomainError("thresholds are not ordered; the coupling is not monotone")
    lo = np.zeros(len(eu), dtype=np.uint8)
    hi = np.ones(len(eu), dtype=np.uint8)
    viol = 0
    block = 4096
    done = 0
    while done < n_sweeps:
        m = min(block, n_sweeps - done)
        U = chain_uniforms(seed, stream, done, m, len(eu))
        viol += K.coupled_sweeps(indptr, nbr, nbr_edge, eu, ev, lc, ld, hc, hd, lo, hi, U)
        done += m
    k = lo_inst.n_edges
    return lo[:k], hi[:k], int(viol)
