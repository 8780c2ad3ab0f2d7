"""Exact random-cluster laws by exhaustive enumeration, in rational arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .. import kernels as K
from ..errors import BudgetExceeded, DomainError
from .instance import RCInstance

MAX_EDGES = 24
MAX_DISTRIBUTION_EDGES = 16


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Event:
    """``source`` joined to some vertex of ``targets`` by open edges in ``allowed``.

    ``allowed=None`` means every edge.  Vertices are instance vertices.
    """

    name: str
    source: int
    targets: frozenset
    allowed: frozenset | None = None


@dataclass
class ExactResult:
    """Normalising constant and marginals; all values are Fractions."""

    Z: Fraction
    edge_marginals: tuple
    events: dict
    n_configs: int
    distribution: dict | None = field(default=None, repr=False)

    def edge_floats(self) -> list[float]:
        return [float(x) for x in self.edge_marginals]

    def event(self, name: str = "connect") -> Fraction:
        return self.events[name]


def connect_event(inst: RCInstance) -> Event:
    if inst.origin is None or not inst.boundary:
        raise DomainError("connectivity event needs an origin and a boundary")
    allowed = None if inst.base_edges == inst.n_edges else frozenset(range(inst.base_edges))
    return Event("connect", inst.origin, inst.boundary, allowed)


def exact_rc(inst: RCInstance, events: Sequence[Event] | None = None,
             distribution: bool = False, max_edges: int = MAX_EDGES) -> ExactResult:
    """Enumerate all ``2**E`` configurations of ``inst``.

    Weights are ``prod p_e^x (1-p_e)^(1-x) q^kappa`` with ``kappa`` counting
    components that avoid ``inst.marks``.  Float parameters are converted to
    their exact binary Fractions.  ``events`` defaults to the instance's
    connectivity event when it has an origin and a boundary.
    ``distribution=True`` also returns ``{config_bits: probability}``
    (bit ``e`` of the key is edge ``e``).
    """
    n_e = inst.n_edges
    if n_e > max_edges:
        raise BudgetExceeded(f"{n_e} edges exceed the enumeration cap of {max_edges}")
    if distribution and n_e > MAX_DISTRIBUTION_EDGES:
        raise BudgetExceeded(f"full distribution limited to {MAX_DISTRIBUTION_EDGES} edges")
    values = sorted(set(_frac(x) for x in inst.p_edge))
    if len(values) > 2:
        raise DomainError("exact enumeration supports at most two distinct edge probabilities")
    pv = values + [Fraction(0)] * (2 - len(values))
    cls = np.array([values.index(_frac(x)) for x in inst.p_edge], dtype=np.int64)
    if events is None:
        events = [connect_event(inst)] if inst.origin is not None and inst.boundary else []
    n_v = inst.n_vertices
    src = np.array([ev.source for ev in events], dtype=np.int64)
    tgt = np.zeros((len(events), n_v), dtype=np.uint8)
    alw = np.ones((len(events), n_e), dtype=np.uint8)
    for j, ev in enumerate(events):
        tgt[j, list(ev.targets)] = 1
        if ev.allowed is not None:
            alw[j] = 0
            alw[j, list(ev.allowed)] = 1
    marks = np.zeros(n_v, dtype=np.uint8)
    marks[list(inst.marks)] = 1
    table, edge_table, event_table, kappa = K.rc_enumerate(
        n_v, inst.eu, inst.ev, cls, marks, src, tgt, alw, distribution
    )
    n0 = int((cls == 0).sum())
    n1 = n_e - n0
    q = _frac(inst.q)
    qpow = [q**k for k in range(n_v + 1)]
    w = {}

    def weight(k0, k1, kap):
        key = k0, k1, kap = int(k0), int(k1), int(kap)
        if key not in w:
            w[key] = (pv[0] ** k0 * (1 - pv[0]) ** (n0 - k0)
                      * pv[1] ** k1 * (1 - pv[1]) ** (n1 - k1) * qpow[kap])
        return w[key]

    def total(tab):
        return sum((int(tab[k]) * weight(*k) for k in zip(*np.nonzero(tab))), Fraction(0))

    Z = total(table)
    if Z == 0:
        raise DomainError("all configurations have zero weight")
    edges = tuple(total(edge_table[e]) / Z for e in range(n_e))
    evs = {ev.name: total(event_table[j]) / Z for j, ev in enumerate(events)}
    dist = None
    if distribution:
        masks = np.arange(1 << n_e, dtype=np.int64)
        bits = (masks[:, None] >> np.arange(n_e)) & 1
        k0s = bits[:, cls == 0].sum(axis=1)
        k1s = bits[:, cls == 1].sum(axis=1)
        dist = {int(m): weight(int(a), int(b), int(k)) / Z
                for m, a, b, k in zip(masks, k0s, k1s, kappa)}
    return ExactResult(Z, edges, evs, 1 << n_e, dist)


def config_kappa(inst: RCInstance, bits: Sequence[int]) -> int:
    """Components of the open subgraph that avoid ``inst.marks``."""
    parent = list(range(inst.n_vertices))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, b in enumerate(bits):
        if b:
            u, v = inst.edges[e]
            parent[find(u)] = find(v)
    roots = {find(v) for v in range(inst.n_vertices)}
    return len(roots - {find(v) for v in inst.marks})
