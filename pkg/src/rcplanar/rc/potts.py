"""Potts spins from a random-cluster configuration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..critical_bounds import p_to_beta
from ..errors import BadSpin, DomainError
from .instance import RCInstance


@dataclass
class PottsResult:
    spins: np.ndarray  # values in 1..q, one per instance vertex
    beta: float | None  # -log(1 - p) / 2, None when p = 1
    q: int
    r: int | None


def _integer_q(q) -> int:
    if q != int(q) or q < 2:
        raise DomainError(f"Potts colouring needs integer q >= 2, got {q}")
    return int(q)


def cluster_labels(inst: RCInstance, state) -> np.ndarray:
    """Cluster id per instance vertex, numbered in order of first vertex."""
    parent = list(range(inst.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in np.flatnonzero(np.asarray(state)):
        u, v = inst.edges[e]
        parent[find(u)] = find(v)
    ids: dict[int, int] = {}
    return np.array([ids.setdefault(find(v), len(ids)) for v in range(inst.n_vertices)])


def potts_coloring(inst: RCInstance, state, seed: int = 0, r: int | None = 1) -> PottsResult:
    """Assign one uniform spin per open cluster.

    For wired and weakened instances every cluster meeting the boundary gets
    spin ``r`` instead.  Spins are drawn in cluster order from
    ``numpy.random.default_rng(seed)``.
    """
    q = _integer_q(inst.q)
    wired = bool(inst.marks)
    if wired and (r is None or not 1 <= r <= q):
        raise BadSpin(f"boundary spin must lie in 1..{q}, got {r}")
    lab = cluster_labels(inst, state)
    n_cl = int(lab.max()) + 1 if len(lab) else 0
    col = np.random.default_rng(seed).integers(1, q + 1, size=n_cl)
    if wired:
        col[np.unique(lab[list(inst.marks)])] = r
    p = float(inst.p)
    beta = None if p >= 1 else p_to_beta(p)
    return PottsResult(col[lab], beta, q, r if wired else None)
