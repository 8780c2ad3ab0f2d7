"""Duality transforms and critical-value bounds for random-cluster models.

All threshold conditions are strict inequalities; a computed boundary
equality is reported as ``"undetermined"`` rather than decided.  Logarithms
are natural.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, Inapplicable
from .isoperimetry import beta_delta_exact, iso_exact

__all__ = [
    "ModelParams",
    "ThresholdResult",
    "SeparationResult",
    "CoexistenceResult",
    "RobustInterval",
    "h",
    "h_inv",
    "dual_parameter",
    "self_dual_point",
    "p_to_beta",
    "beta_to_p",
    "pcpu_relation",
    "free_death_threshold",
    "wired_uniqueness_threshold",
    "separation_threshold",
    "coexistence_bound",
    "sep_condition",
    "sep_condition_from_iso",
    "robust_interval",
    "bounds_report",
    "bounds_table",
]

_REL_TIE = 1e-12


def _compare(lhs: float, rhs: float) -> str:
    """Strict ``lhs > rhs`` with a relative tie band."""
    if math.isinf(rhs):
        return "fails"
    if abs(lhs - rhs) <= _REL_TIE * max(1.0, abs(lhs), abs(rhs)):
        return "undetermined"
    return "holds" if lhs > rhs else "fails"


# ---------------------------------------------------------------------------
# parameter maps


def h(x):
    """Odds ratio ``x / (1 - x)``; exact for Fractions."""
    if x == 1:
        raise DomainError("h(1) is undefined")
    if x < 0 or x > 1:
        raise DomainError(f"h needs x in [0, 1), got {x}")
    return x / (1 - x)


def h_inv(y):
    if y < 0:
        raise DomainError(f"h_inv needs y >= 0, got {y}")
    return y / (1 + y)


def _check_pq(p, q):
    if not 0 <= p <= 1:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")


def dual_parameter(p, q):
    """``p' = (1-p) q / (p + (1-p) q)``, the parameter of the dual model.

    An involution with ``h(p) h(p') = q``; exact for Fraction input.
    """
    _check_pq(p, q)
    return (1 - p) * q / (p + (1 - p) * q)


def self_dual_point(q) -> float:
    """``sqrt(q) / (sqrt(q) + 1)``, the fixed point of ``dual_parameter(., q)``."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    s = math.isqrt(q) if isinstance(q, int) and math.isqrt(q) ** 2 == q else None
    if s is not None:
        return Fraction(s, s + 1)
    r = math.sqrt(q)
    return r / (r + 1)


def p_to_beta(p: float) -> float:
    """Potts inverse temperature ``-log(1 - p) / 2``."""
    if not 0 <= p < 1:
        raise DomainError(f"p must lie in [0, 1), got {p}")
    return -0.5 * math.log1p(-p)


def beta_to_p(beta: float) -> float:
    """Edge probability ``1 - exp(-2 beta)``."""
    if beta < 0:
        raise DomainError(f"beta must be >= 0, got {beta}")
    return -math.expm1(-2.0 * beta)


@dataclass(frozen=True)
class ModelParams:
    """Edge probability, cluster weight and the derived ``beta``, ``b``, ``b+``."""

    p: float
    q: float

    def __post_init__(self):
        _check_pq(self.p, self.q)

    @classmethod
    def from_beta(cls, beta: float, q: float) -> "ModelParams":
        return cls(beta_to_p(beta), q)

    @property
    def beta(self) -> float:
        return p_to_beta(self.p)

    @property
    def b(self) -> float | None:
        """``log(p/(1-p)) / log q``; None when q = 1 or p is 0 or 1."""
        if self.q == 1 or self.p in (0, 1):
            return None
        return math.log(self.p / (1 - self.p)) / math.log(self.q)

    @property
    def b_plus(self) -> float | None:
        b = self.b
        return None if b is None else max(b, 0.0)

    def as_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "beta": self.beta, "b": self.b, "b_plus": self.b_plus}


# partner of each critical value under h(x) h(y) = q
_PCPU_PARTNER = {
    "pc_wired": "pu_free_dual",
    "pu_free_dual": "pc_wired",
    "pc_free": "pu_wired_dual",
    "pu_wired_dual": "pc_free",
}


def pcpu_relation(q, value, known: str = "pc_free") -> tuple[str, float]:
    """Partner critical value from ``h(known) h(partner) = q``.

    ``known`` is one of ``pc_wired``, ``pu_free_dual``, ``pc_free`` or
    ``pu_wired_dual`` (the ``_dual`` ones refer to the dual graph).
    """
    if known not in _PCPU_PARTNER:
        raise ValueError(f"unknown critical value {known!r}")
    if not 0 < value < 1:
        raise DomainError(f"critical value must lie in (0, 1), got {value}")
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    return _PCPU_PARTNER[known], h_inv(q / h(value))


# ---------------------------------------------------------------------------
# single-phase bounds


@dataclass(frozen=True)
class ThresholdResult:
    """Outcome of a sufficient condition at one ``(p, q)``.

    ``q_range`` is the open interval of ``q`` on which the condition holds
    at this ``p`` (upper end ``inf`` if unbounded); ``q_min`` is its lower
    end.
    """

    status: str  # "holds", "fails" or "undetermined"
    b: float | None
    log_q: float
    required_log_q: float | None
    q_range: tuple[float, float] | None

    @property
    def holds(self) -> bool:
        return self.status == "holds"

    @property
    def q_min(self) -> float | None:
        return None if self.q_range is None else self.q_range[0]


def _logit(p: float) -> float:
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    return math.log(p / (1 - p))


def free_death_threshold(d: int, beta_G: float, p: float, q: float) -> ThresholdResult:
    """No infinite cluster for the free measure when ``b < beta_G`` and
    ``log q > (1 + log(d-1)) / (beta_G - b+)``.

    At fixed ``p`` the condition holds exactly for
    ``log q > (1 + log(d-1) + max(logit p, 0)) / beta_G``.
    Raises Inapplicable when ``b >= beta_G`` at the given ``q``.
    """
    if d < 3 or not 0 < beta_G < 1:
        raise DomainError("need d >= 3 and beta_G in (0, 1)")
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    ell = _logit(p)
    C = 1 + math.log(d - 1)
    q_range = (math.exp((C + max(ell, 0.0)) / beta_G), math.inf)
    if q == 1:
        return ThresholdResult("fails", None, 0.0, None, q_range)
    L = math.log(q)
    b = ell / L
    if b >= beta_G:
        raise Inapplicable(f"b = {b:.6g} >= beta(G) = {beta_G:.6g}")
    rhs = C / (beta_G - max(b, 0.0))
    return ThresholdResult(_compare(L, rhs), b, L, rhs, q_range)


def wired_uniqueness_threshold(dcode: int, beta_dual: float, p: float, q: float) -> ThresholdResult:
    """Unique infinite cluster for the wired measure when ``b > 1 - beta_dual`` and
    ``log q > (1 + log(dcode-1)) / (min(b, 1) - 1 + beta_dual)``.

    At fixed ``p`` (with ``logit p = l > 0``) the condition holds for
    ``log q`` strictly between ``C / beta_dual`` and ``(l - C) / (1 - beta_dual)``,
    ``C = 1 + log(dcode-1)``; the range is empty when ``l beta_dual <= C``.
    Raises Inapplicable when ``b <= 1 - beta_dual`` at the given ``q``.
    """
    if dcode < 3 or not 0 < beta_dual < 1:
        raise DomainError("need dcode >= 3 and beta_dual in (0, 1)")
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    ell = _logit(p)
    C = 1 + math.log(dcode - 1)
    if ell * beta_dual > C:
        q_range = (math.exp(C / beta_dual), math.exp((ell - C) / (1 - beta_dual)))
    else:
        q_range = None
    if q == 1:
        return ThresholdResult("fails", None, 0.0, None, q_range)
    L = math.log(q)
    b = ell / L
    if b <= 1 - beta_dual:
        raise Inapplicable(f"b = {b:.6g} <= 1 - beta(dual) = {1 - beta_dual:.6g}")
    rhs = C / (min(b, 1.0) - 1 + beta_dual)
    return ThresholdResult(_compare(L, rhs), b, L, rhs, q_range)


# ---------------------------------------------------------------------------
# two-phase bounds


@dataclass(frozen=True)
class SeparationResult:
    """Threshold above which ``p_c^free(q) > p_u^wired(q)``.

    ``q_star`` is the closed-form threshold as stated.  The argument behind
    it compares the same expression with ``log q``, so ``q_sufficient =
    exp(q_star)`` is the value the argument actually supports.
    """

    d: int
    codegree: int
    q_star: float
    q_sufficient: float
    b0: float
    beta: float
    beta_dual: float
    free_side: float  # (1 + log(d-1)) / (beta - b0+)
    wired_side: float  # (1 + log(dcode-1)) / (min(b0, 1) - 1 + beta_dual)

    @property
    def identity_error(self) -> float:
        return max(abs(self.free_side - self.q_star), abs(self.wired_side - self.q_star))

    @property
    def b0_ordered(self) -> bool:
        """``0 < 1 - beta_dual < b0 < beta < 1``."""
        return 0 < 1 - self.beta_dual < self.b0 < self.beta < 1

    def as_dict(self) -> dict:
        out = asdict(self)
        out["identity_error"] = self.identity_error
        out["b0_ordered"] = self.b0_ordered
        return out


def separation_threshold(d: int, dcode: int) -> SeparationResult:
    """``(2 + log((d-1)(dcode-1))) (d dcode - d - dcode) / sqrt((d-2)(dcode-2)(d dcode - 2d - 2dcode))``."""
    rep = beta_delta_exact(d, dcode)
    m = d * dcode - 2 * d - 2 * dcode
    if m <= 0:
        raise Inapplicable(f"d*dcode - 2d - 2dcode = {m} <= 0 (amenable)")
    q_star = (
        (2 + math.log((d - 1) * (dcode - 1)))
        * (d * dcode - d - dcode)
        / math.sqrt((d - 2) * (dcode - 2) * m)
    )
    C1, C2 = 1 + math.log(d - 1), 1 + math.log(dcode - 1)
    beta, beta_dual = rep.beta, rep.beta_dual
    b0 = (C1 * (1 - beta_dual) + C2 * beta) / (C1 + C2)
    free_side = C1 / (beta - max(b0, 0.0))
    wired_side = C2 / (min(b0, 1.0) - 1 + beta_dual)
    return SeparationResult(
        d, dcode, q_star, math.exp(q_star), b0, beta, beta_dual, free_side, wired_side
    )


@dataclass(frozen=True)
class CoexistenceResult:
    """``p_c^free(q) < p_u^wired(q)`` for ``q < q_max = d dcode - 2d - 2dcode``."""

    d: int
    codegree: int
    q_max: int

    @property
    def vacuous(self) -> bool:
        return self.q_max <= 1

    @property
    def ising_interval(self) -> bool:
        """q = 2 lies in the range, so FRC and WRC differ on an interval of p."""
        return self.q_max > 2

    def as_dict(self) -> dict:
        return {"d": self.d, "codegree": self.codegree, "q_max": self.q_max,
                "vacuous": self.vacuous, "ising_interval": self.ising_interval}


def coexistence_bound(d: int, dcode: int) -> CoexistenceResult:
    return CoexistenceResult(d, dcode, d * dcode - 2 * d - 2 * dcode)


def sep_condition(q: float, pc_G: float, pc_dual: float) -> bool:
    """``h(p_c(G)) h(p_c(dual)) < 1/q`` from user-supplied bond-percolation thresholds."""
    return h(pc_G) * h(pc_dual) < 1 / q


def sep_condition_from_iso(q: float, d: int, dcode: int) -> bool:
    """The same condition with ``p_c <= 1/(1 + iota)`` inserted: ``iota * iota_dual > q``."""
    return iso_exact(d, dcode) * iso_exact(dcode, d) > q


# ---------------------------------------------------------------------------
# robust transition window


@dataclass(frozen=True)
class RobustInterval:
    """Window ``e^{2 beta} - 1 in [q^{2/(d + iota/2)}, q^{2/(d - iota/2)}]``."""

    d: int
    iota: float
    q: float
    exp_low: float
    exp_high: float
    beta_low: float
    beta_high: float

    @property
    def p_low(self) -> float:
        return beta_to_p(self.beta_low)

    @property
    def p_high(self) -> float:
        return beta_to_p(self.beta_high)

    def contains_beta(self, beta: float) -> bool:
        return self.beta_low <= beta <= self.beta_high

    def as_dict(self) -> dict:
        out = asdict(self)
        out.update(p_low=self.p_low, p_high=self.p_high)
        return out


def robust_interval(d: int, iota: float, q: float) -> RobustInterval:
    if iota <= 0:
        raise Inapplicable("iota = 0: amenable graph, no window")
    if q <= 1:
        raise DomainError(f"q must exceed 1, got {q}")
    if d <= iota / 2:
        raise DomainError("need d > iota/2")
    lo, hi = 2 / (d + iota / 2), 2 / (d - iota / 2)
    # e^{2 beta} - 1 = q^x  <=>  beta = log1p(q^x) / 2
    return RobustInterval(d, iota, q, lo, hi, 0.5 * math.log1p(q**lo), 0.5 * math.log1p(q**hi))


# ---------------------------------------------------------------------------
# reports


def bounds_report(d: int, dcode: int) -> dict:
    """Every closed-form quantity for one spec; q-independent fields only."""
    rep = beta_delta_exact(d, dcode)
    out = {"spec": {"d": d, "codegree": dcode}, "iso": rep.as_dict()}
    try:
        out["separation"] = separation_threshold(d, dcode).as_dict()
    except Inapplicable as exc:
        out["separation"] = {"inapplicable": str(exc)}
    out["coexistence"] = coexistence_bound(d, dcode).as_dict()
    out["amenable"] = rep.amenable
    return out


BOUNDS_COLUMNS = [
    "d", "codegree", "p", "q", "self_dual_p", "q_separation", "q_separation_sufficient",
    "q_coexistence", "regime", "robust_beta_low", "robust_beta_high", "free_death",
    "wired_uniqueness",
]


def _regime(q, sep, coex) -> str:
    if coex.q_max > q:
        return "coexistence"
    if sep is not None and q > sep.q_sufficient:
        return "separated"
    if sep is not None and q > sep.q_star:
        return "separated_stated_only"
    return "undetermined"


def bounds_table(d: int, dcode: int, qs: Sequence[float], ps: Sequence[float] = ()) -> list[dict]:
    """One row per ``q`` (and per ``(p, q)`` if ``ps`` is given); missing cells are None."""
    rep = beta_delta_exact(d, dcode)
    try:
        sep = separation_threshold(d, dcode)
    except Inapplicable:
        sep = None
    coex = coexistence_bound(d, dcode)
    rows = []
    for q in qs:
        base = {
            "d": d, "codegree": dcode, "p": None, "q": q,
            "self_dual_p": float(self_dual_point(q)) if q >= 1 else None,
            "q_separation": sep.q_star if sep else None,
            "q_separation_sufficient": sep.q_sufficient if sep else None,
            "q_coexistence": coex.q_max,
            "regime": _regime(q, sep, coex),
            "robust_beta_low": None, "robust_beta_high": None,
            "free_death": None, "wired_uniqueness": None,
        }
        if not rep.amenable and q > 1:
            ri = robust_interval(d, rep.iota, q)
            base["robust_beta_low"], base["robust_beta_high"] = ri.beta_low, ri.beta_high
        if not ps:
            rows.append(base)
            continue
        for p in ps:
            row = dict(base, p=p)
            if not rep.amenable and 0 < p < 1:
                for key, fn, args in (
                    ("free_death", free_death_threshold, (d, rep.beta)),
                    ("wired_uniqueness", wired_uniqueness_threshold, (dcode, rep.beta_dual)),
                ):
                    try:
                        row[key] = fn(*args, p, q).status
                    except Inapplicable:
                        row[key] = "inapplicable"
            rows.append(row)
    return rows
