"""Stochastic-domination checks and the boundary-weakening sweep over radii."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..errors import DominationViolated, DomainError
from .dynamics import coupled_chains
from .exact import MAX_EDGES, connect_event, exact_rc
from .instance import RCInstance
from .sampling import DEFAULT_MAX_DOUBLINGS, Estimate, estimate_connectivity


@dataclass
class DominationReport:
    """Pairs ``(name, lower, upper)``; ``ok`` when every lower <= upper."""

    mode: str
    pairs: list = field(default_factory=list)
    violations: int = 0

    @property
    def ok(self) -> bool:
        return self.violations == 0 and all(a <= b for _, a, b in self.pairs)

    @property
    def failures(self) -> list:
        return [(n, a, b) for n, a, b in self.pairs if a > b]


def domination_check(lower: RCInstance, upper: RCInstance, mode: str = "exact",
                     n_sweeps: int = 2000, seed: int = 0, strict: bool = True) -> DominationReport:
    """Check ``lower`` is stochastically below ``upper``.

    ``exact`` compares every single-edge marginal of the shared base edges
    and the connectivity event by enumeration.  ``sampling`` runs the two
    heat-bath chains synchronously from all-closed and all-open starts and
    counts order failures.  With ``strict`` a failure raises DominationViolated.
    """
    if lower.edges[: lower.base_edges] != upper.edges[: upper.base_edges]:
        raise DomainError("instances must share their base graph")
    rep = DominationReport(mode)
    if mode == "exact":
        a, b = exact_rc(lower), exact_rc(upper)
        for e in range(lower.base_edges):
            rep.pairs.append((f"edge {e}", a.edge_marginals[e], b.edge_marginals[e]))
        if "connect" in a.events and "connect" in b.events:
            rep.pairs.append(("connect", a.events["connect"], b.events["connect"]))
    elif mode == "sampling":
        lo, hi, viol = coupled_chains(lower, upper, n_sweeps, seed)
        rep.violations = viol
        rep.pairs.append(("final open edges", int(lo.sum()), int(hi.sum())))
    else:
        raise DomainError(f"unknown mode {mode!r}")
    if strict and not rep.ok:
        raise DominationViolated(f"{mode}: {rep.failures or rep.violations}")
    return rep


# ---------------------------------------------------------------------------
# boundary-weakening sweep


def _measure(inst: RCInstance, mode: str, n_samples: int, seed: int, workers: int,
             max_doublings: int) -> Estimate:
    use_exact = mode == "exact" or (mode == "auto" and inst.n_edges <= 20)
    if use_exact:
        if inst.n_edges > MAX_EDGES:
            raise DomainError(f"{inst.n_edges} edges: too many for exact mode")
        v = float(exact_rc(inst, [connect_event(inst)]).events["connect"])
        return Estimate(v, v, v, 0, 0, seed, "exact")
    return estimate_connectivity(inst, n_samples, seed, workers, max_doublings)


@dataclass
class HarnessRow:
    radius: int
    n_vertices: int
    n_edges: int
    apex: Estimate  # P(A_i) on the apex graph with weight s
    weakened: Estimate  # wired measure with boundary edges at s
    wired: Estimate

    def as_dict(self) -> dict:
        out = {"radius": self.radius, "n_vertices": self.n_vertices, "n_edges": self.n_edges}
        for key in ("apex", "weakened", "wired"):
            for k, v in getattr(self, key).as_dict().items():
                out[f"{key}_{k}"] = v
        return out


def robust_harness(d: int, codegree: int, radii: Sequence[int], p, q, s, n_samples: int,
                   seed: int = 0, mode: str = "auto", workers: int = 1,
                   max_doublings: int = DEFAULT_MAX_DOUBLINGS) -> list[HarnessRow]:
    """Connectivity of the origin to the ball boundary under three boundary treatments.

    For each radius the apex graph with edge weight ``s`` is compared with
    the weakened wired measure and the wired measure at ``p``.  Output is a
    trend table; nothing is asserted about its limit.
    """
    rows = []
    for i, r in enumerate(radii):
        base = RCInstance.from_spec(d, codegree, r, "free", p, q)
        sd = seed + i
        rows.append(HarnessRow(
            r, base.n_vertices, base.n_edges,
            _measure(base.with_params(bc="apex", s=s), mode, n_samples, sd, workers, max_doublings),
            _measure(base.with_params(bc="weakened", s=s), mode, n_samples, sd, workers,
                     max_doublings),
            _measure(base.with_params(bc="wired"), mode, n_samples, sd, workers, max_doublings),
        ))
    return rows


def apex_bernoulli_value(inst: RCInstance) -> Fraction:
    """P(A_i) for an apex instance with ``s = 1``: every base edge is i.i.d. Bernoulli(p).

    With all apex edges open there is one cluster whatever the base edges do,
    so the factor ``q`` is constant.  Computed exactly by enumeration at q = 1.
    """
    if inst.bc != "apex":
        raise DomainError("needs an apex instance")
    plain = inst.with_params(bc="free", q=1)
    return exact_rc(plain, [connect_event(plain)]).events["connect"]
