"""Exact sampling by coupling from the past and Monte Carlo estimates."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .. import kernels as K
from ..errors import DomainError, NoCoalescence
from .exact import Event
from .instance import RCInstance

Z95 = 1.959963984540054
DEFAULT_MAX_DOUBLINGS = 16


def wilson_interval(k: int, n: int, z: float = Z95) -> tuple[float, float]:
    if n <= 0:
        raise DomainError("Wilson interval needs n > 0")
    ph = k / n
    den = 1 + z * z / n
    c = (ph + z * z / (2 * n)) / den
    h = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / den
    lo = 0.0 if k == 0 else max(0.0, c - h)
    hi = 1.0 if k == n else min(1.0, c + h)
    return lo, hi


@dataclass
class SampleBatch:
    configs: np.ndarray  # (n, E) uint8, instance edge order
    horizons: np.ndarray  # sweeps needed per draw
    seed: int
    first_stream: int
    violations: int  # sandwich order failures; always 0 for a monotone update

    @property
    def n(self) -> int:
        return len(self.configs)


def sample_exact(inst: RCInstance, n: int = 1, seed: int = 0, first_stream: int = 0,
                 max_doublings: int = DEFAULT_MAX_DOUBLINGS, workers: int = 1) -> SampleBatch:
    """``n`` independent exact draws by monotone coupling from the past.

    Draw ``i`` uses stream ``first_stream + i`` only, so the output does not
    depend on ``workers``.  Raises NoCoalescence if some draw does not
    coalesce within ``2**max_doublings`` sweeps; no partial batch is returned.
    """
    if inst.q < 1:
        raise DomainError("coupling from the past needs q >= 1")
    if n < 0:
        raise DomainError("n must be >= 0")
    g = inst.chain_graph()
    tc, td = inst.thresholds()

    def run(start, size):
        return K.cftp_batch(g.indptr, g.nbr, g.nbr_edge, g.eu, g.ev, tc, td, seed,
                            first_stream + start, size, max_doublings)

    workers = max(1, int(workers))
    if workers == 1 or n < 2 * workers:
        parts = [run(0, n)]
        starts = [0]
    else:
        step = -(-n // workers)
        starts = list(range(0, n, step))
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda s: run(s, min(step, n - s)), starts))
    for s, (_, hz, _) in zip(starts, parts):
        bad = np.flatnonzero(hz == K.NO_COALESCENCE)
        if len(bad):
            raise NoCoalescence(
                f"draw {s + int(bad[0])} did not coalesce within 2**{max_doublings} sweeps"
            )
    configs = np.concatenate([p[0] for p in parts]) if parts else np.zeros((0, inst.n_edges))
    horizons = np.concatenate([p[1] for p in parts])
    viol = sum(p[2] for p in parts)
    return SampleBatch(configs.astype(np.uint8).reshape(n, inst.n_edges), horizons, seed,
                       first_stream, int(viol))


@dataclass
class Estimate:
    """Monte Carlo or exact probability with its 95% interval.

    ``method`` is ``"cftp"``, ``"exact"`` (enumeration) or ``"degenerate"``
    (all edge probabilities 0 or 1); for the last two ``n`` is 0 and the
    interval has zero width.
    """

    estimate: float
    ci_lo: float
    ci_hi: float
    n: int
    k: int
    seed: int
    method: str

    def as_dict(self) -> dict:
        return asdict(self)


def event_hits(inst: RCInstance, configs: np.ndarray, event: Event | str = "connect") -> np.ndarray:
    """Indicator of the event for each configuration row."""
    configs = np.ascontiguousarray(configs, dtype=np.uint8).reshape(-1, inst.n_edges)
    if isinstance(event, str):
        if event != "connect":
            raise DomainError(f"unknown event {event!r}")
        g = inst.chain_graph()
        src, tgt, alw = inst.connect_event()
        return K.batch_connectivity(g.indptr, g.nbr, g.nbr_edge, configs, src, tgt, alw)
    g = inst.chain_graph()
    tgt = np.zeros(g.n_vertices, dtype=np.uint8)
    tgt[g.vertex_map[list(event.targets)]] = 1
    alw = np.ones(inst.n_edges, dtype=np.uint8)
    if event.allowed is not None:
        alw[:] = 0
        alw[list(event.allowed)] = 1
    return K.batch_connectivity(g.indptr, g.nbr, g.nbr_edge, configs,
                                int(g.vertex_map[event.source]), tgt, alw)


def _from_hits(hits, seed, method="cftp") -> Estimate:
    n = len(hits)
    k = int(np.sum(hits))
    lo, hi = wilson_interval(k, n)
    return Estimate(k / n, lo, hi, n, k, seed, method)


def _point(x, seed, method) -> Estimate:
    x = float(x)
    return Estimate(x, x, x, 0, 0, seed, method)


def _connect_closed(inst: RCInstance) -> bool:
    """Every edge the connectivity event may use is closed almost surely."""
    return all(inst.p_edge[e] == 0 for e in range(inst.base_edges))


def estimate_event(inst: RCInstance, n_samples: int, seed: int = 0, event="connect",
                   workers: int = 1, max_doublings: int = DEFAULT_MAX_DOUBLINGS) -> Estimate:
    """Probability of ``event`` (``"connect"``, ``("edge", e)`` or an Event)."""
    if isinstance(event, tuple) and event[0] == "edge":
        e = int(event[1])
        if not 0 <= e < inst.n_edges:
            raise DomainError(f"edge {e} out of range")
        if inst.p_edge[e] in (0, 1):
            return _point(inst.p_edge[e] == 1, seed, "degenerate")
        batch = sample_exact(inst, n_samples, seed, 0, max_doublings, workers)
        return _from_hits(batch.configs[:, e], seed)
    if inst.is_degenerate():
        state = np.array([[1 if x == 1 else 0 for x in inst.p_edge]], dtype=np.uint8)
        return _point(event_hits(inst, state, event)[0], seed, "degenerate")
    if event == "connect" and _connect_closed(inst):
        return _point(inst.origin in inst.boundary, seed, "degenerate")
    if n_samples <= 0:
        raise DomainError("n_samples must be positive")
    batch = sample_exact(inst, n_samples, seed, 0, max_doublings, workers)
    return _from_hits(event_hits(inst, batch.configs, event), seed)


def estimate_connectivity(inst: RCInstance, n_samples: int, seed: int = 0, workers: int = 1,
                          max_doublings: int = DEFAULT_MAX_DOUBLINGS) -> Estimate:
    """Estimate of P(origin joined to the boundary) from exact draws."""
    return estimate_event(inst, n_samples, seed, "connect", workers, max_doublings)
