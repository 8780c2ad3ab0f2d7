"""Isoperimetric constants of {d, codegree} tessellations.

Closed forms for the edge-isoperimetric constant and the two volume ratios,
empirical ratios of finite sets, an exhaustive minimiser over connected sets,
the alternating primal/dual closure iteration that drives finite sets toward
the infimum, and rooted bond-animal counts.

Exact comparisons with ``iota`` go through ``iota**2``, which is rational.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import (
    BudgetExceeded,
    EmptyPatch,
    FrontierContact,
    FrontierVertex,
    NoInternalEdges,
    TruncatedBall,
)
from .tessellation import (
    DualPair,
    Patch,
    PlanarGraph,
    _bfs_distances,
    check_spec,
    patch_edge_sets,
)

__all__ = [
    "IsoReport",
    "IterationStep",
    "IterationTrace",
    "BruteForceResult",
    "AnimalCounts",
    "iso_exact",
    "iso_squared",
    "beta_closed_form",
    "beta_delta_exact",
    "ratio_profile",
    "ratio_at_least_iota",
    "brute_force_iso",
    "peres_iterate",
    "animal_counts",
    "animal_bound",
    "sphere_sizes_series",
    "sphere_size_closed_form",
    "sphere_size_printed",
    "growth_roots",
    "fit_growth_root",
]

DEFAULT_BUDGET = 2_000_000_000


# ---------------------------------------------------------------------------
# closed forms


def iso_squared(d: int, codegree: int) -> Fraction:
    """``iota**2`` as an exact rational: ``(d-2)**2 - 4(d-2)/(codegree-2)``."""
    check_spec(d, codegree)
    return Fraction((d - 2) ** 2) - Fraction(4 * (d - 2), codegree - 2)


def iso_exact(d: int, codegree: int) -> float:
    """Edge-isoperimetric constant of the {d, codegree} tessellation.

    ``(d-2) * sqrt(1 - 4/((d-2)(codegree-2)))``; zero exactly in the three
    euclidean cases.
    """
    sq = iso_squared(d, codegree)
    if sq == 0:
        return 0.0
    # (d-2) * sqrt(...) is better conditioned than sqrt of the rational
    return (d - 2) * math.sqrt(1.0 - 4.0 / ((d - 2) * (codegree - 2)))


def beta_closed_form(d: int, codegree: int) -> float:
    """``beta(G)`` written directly in terms of ``d`` and ``codegree``."""
    check_spec(d, codegree)
    k = codegree
    disc = (d - 2) * (k - 2) * (d * k - 2 * d - 2 * k)
    return (d * (k - 2) + math.sqrt(disc)) / (2 * (d * k - d - k))


@dataclass(frozen=True)
class IsoReport:
    d: int
    codegree: int
    iota: float
    beta: float
    delta: float
    iota_dual: float
    beta_dual: float
    delta_dual: float
    iota_sq: Fraction
    iota_dual_sq: Fraction
    beta_closed: float

    @property
    def amenable(self) -> bool:
        return self.iota_sq == 0

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "codegree": self.codegree,
            "iota": self.iota,
            "iota_squared": str(self.iota_sq),
            "beta": self.beta,
            "delta": self.delta,
            "iota_dual": self.iota_dual,
            "iota_dual_squared": str(self.iota_dual_sq),
            "beta_dual": self.beta_dual,
            "delta_dual": self.delta_dual,
            "beta_closed_form": self.beta_closed,
            "beta_plus_delta_dual": self.beta + self.delta_dual,
            "beta_plus_beta_dual": self.beta + self.beta_dual,
            "amenable": self.amenable,
        }


def beta_delta_exact(d: int, codegree: int) -> IsoReport:
    """``iota``, ``beta = 2/(d - iota)`` and ``delta = 2/(d + iota)`` for G and its dual."""
    io = iso_exact(d, codegree)
    iod = iso_exact(codegree, d)
    return IsoReport(
        d=d,
        codegree=codegree,
        iota=io,
        beta=2.0 / (d - io),
        delta=2.0 / (d + io),
        iota_dual=iod,
        beta_dual=2.0 / (codegree - iod),
        delta_dual=2.0 / (codegree + iod),
        iota_sq=iso_squared(d, codegree),
        iota_dual_sq=iso_squared(codegree, d),
        beta_closed=beta_closed_form(d, codegree),
    )


def ratio_at_least_iota(ratio: Fraction, iota_sq: Fraction) -> bool:
    """Exact test of ``ratio >= sqrt(iota_sq)`` for a nonnegative rational ratio."""
    return ratio >= 0 and ratio * ratio >= iota_sq


# ---------------------------------------------------------------------------
# empirical ratios


def ratio_profile(patch: Patch, require_internal: bool = False):
    """``(|dK|/|K|, |K|/|E(K)|, |K|/|E*(K)|)`` as Fractions.

    The middle entry is ``None`` when ``E(K)`` is empty, unless
    ``require_internal`` is set, in which case that raises NoInternalEdges.
    """
    if patch.size == 0:
        raise EmptyPatch("K is empty")
    n = patch.size
    if patch.n_inside == 0:
        if require_internal:
            raise NoInternalEdges("K spans no edge")
        middle = None
    else:
        middle = Fraction(n, patch.n_inside)
    return Fraction(patch.n_boundary, n), middle, Fraction(n, patch.n_touching)


def _local_csr(g: PlanarGraph, verts: Sequence[int]):
    """CSR adjacency of the subgraph induced on ``verts`` (relabelled in the given order)."""
    index = {v: i for i, v in enumerate(verts)}
    indptr = [0]
    nbr: list[int] = []
    for v in verts:
        for w in g.neighbors[v]:
            j = index.get(w)
            if j is not None:
                nbr.append(j)
        indptr.append(len(nbr))
    return np.asarray(indptr, dtype=np.int64), np.asarray(nbr, dtype=np.int64)


def _require_interior_ball(g: PlanarGraph, o: int, r: int) -> dict[int, int]:
    dist = _bfs_distances(g.neighbors, o, r + 1)
    if any(not g.interior[v] for v, dv in dist.items() if dv <= r):
        raise TruncatedBall(f"ball of radius {r} about {o} reaches the frontier")
    return dist


@dataclass(frozen=True)
class BruteForceResult:
    """Exhaustive minimum of ``|dK|/|K|`` over connected ``K`` containing ``o``."""

    value: Fraction
    argmin: tuple[int, ...]
    best_by_size: tuple[Fraction, ...]  # best ratio among sets of exactly m vertices
    counts: tuple[int, ...]  # number of connected sets of each size

    def running_minimum(self) -> list[Fraction]:
        """Minimum over sizes ``<= m`` for ``m = 1..max_size``."""
        out, cur = [], None
        for r in self.best_by_size:
            cur = r if cur is None or r < cur else cur
            out.append(cur)
        return out


def brute_force_iso(
    g: PlanarGraph, o: int, max_size: int, budget: int = DEFAULT_BUDGET
) -> BruteForceResult:
    """Minimise ``|dK|/|K|`` over connected vertex sets ``K`` with ``o in K``, ``|K| <= max_size``.

    Boundary sizes use ``|dK| = d|K| - 2|E(K)|``; this is exact as long as
    the ball of radius ``max_size - 2`` about ``o`` is interior, which is
    checked.  Ties are broken by the lexicographically smallest sorted
    vertex tuple.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    if not g.interior[o]:
        raise FrontierVertex(f"root {o} lies on the frontier")
    dist = _require_interior_ball(g, o, max(max_size - 2, 0))
    verts = sorted(v for v, dv in dist.items() if dv <= max_size - 1)
    indptr, nbr = _local_csr(g, verts)
    root = verts.index(o)
    counts, best_b, best_sets, status = kernels.redelmeier(
        indptr, nbr, root, max_size, g.spec.d, budget, True
    )
    if status:
        raise BudgetExceeded(f"more than {budget} connected sets")
    best_by_size = []
    value, argmin = None, None
    for m in range(1, max_size + 1):
        r = Fraction(int(best_b[m]), m)
        best_by_size.append(r)
        cand = tuple(verts[int(i)] for i in best_sets[m, :m])
        if value is None or r < value or (r == value and cand < argmin):
            value, argmin = r, cand
    return BruteForceResult(
        value=value,
        argmin=argmin,
        best_by_size=tuple(best_by_size),
        counts=tuple(int(c) for c in counts[1:]),
    )


# ---------------------------------------------------------------------------
# alternating closure iteration


@dataclass
class IterationStep:
    n: int
    K: frozenset
    size: int
    boundary: int
    edges: int
    ratio: Fraction
    kappa: float
    kappa_nonneg: bool
    # filled once the dual half-step for this n has been taken
    L: frozenset | None = None
    L_size: int | None = None
    L_boundary: int | None = None
    L_edges: int | None = None
    L_ratio: Fraction | None = None
    lam: float | None = None
    lam_nonneg: bool | None = None
    b: float | None = None
    contraction_lhs: float | None = None  # 2 kappa_{n+1}
    contraction_rhs: float | None = None  # a 2 kappa_n + b_n
    contraction_holds: bool | None = None


@dataclass
class IterationTrace:
    d: int
    codegree: int
    iota: float
    iota_dual: float
    a: float
    steps: list[IterationStep] = field(default_factory=list)
    truncated: bool = False
    note: str = ""

    @property
    def kappas(self) -> list[float]:
        return [s.kappa for s in self.steps]

    @property
    def ratios(self) -> list[Fraction]:
        return [s.ratio for s in self.steps]

    def strictly_decreasing(self) -> bool:
        r = self.ratios
        return all(x > y for x, y in zip(r, r[1:]))

    def all_nonnegative(self) -> bool:
        return all(s.kappa_nonneg for s in self.steps) and all(
            s.lam_nonneg for s in self.steps if s.lam_nonneg is not None
        )

    def contraction_ok(self) -> bool:
        return all(s.contraction_holds for s in self.steps if s.contraction_holds is not None)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "size", "boundary", "ratio", "kappa"])
        for s in self.steps:
            w.writerow([s.n, s.size, s.boundary, repr(float(s.ratio)), repr(s.kappa)])
        return buf.getvalue()


def _measure(pair: DualPair, side: str, K: frozenset):
    p = patch_edge_sets(pair.graph(side), K)
    return p.size, p.n_boundary, p.n_inside, Fraction(p.n_boundary, p.size)


def peres_iterate(pair: DualPair, K0: Iterable[int], steps: int) -> IterationTrace:
    """Alternate hole-filling and face/vertex exchange between G and its dual.

    From ``K_n`` in G: ``L_n = prime(hat(K_n))`` in the dual, then
    ``K_{n+1} = prime(hat(L_n))`` back in G.  Records the gaps ``kappa_n``,
    ``lambda_n`` to the isoperimetric constants and checks
    ``2 kappa_{n+1} <= a 2 kappa_n + b_n`` at each step.  If a closure would
    leave the built patch the trace is returned so far, flagged ``truncated``.
    """
    g = pair.primal
    d, k = g.spec.d, g.spec.codegree
    io, iod = iso_exact(d, k), iso_exact(k, d)
    io_sq, iod_sq = iso_squared(d, k), iso_squared(k, d)
    a = ((d - io) * (k - iod) / ((d + io) * (k + iod))) ** 2
    trace = IterationTrace(d, k, io, iod, a)

    K = frozenset(K0)
    if not K:
        raise EmptyPatch("K0 is empty")
    try:
        size, bnd, edges, ratio = _measure(pair, "primal", K)
    except FrontierVertex as exc:
        raise FrontierContact(str(exc)) from exc
    trace.steps.append(
        IterationStep(0, K, size, bnd, edges, ratio, float(ratio) - io,
                      ratio_at_least_iota(ratio, io_sq))
    )
    for n in range(steps):
        cur = trace.steps[-1]
        try:
            L = pair.prime("primal", pair.hat("primal", cur.K))
            l_size, l_bnd, l_edges, l_ratio = _measure(pair, "dual", L)
            K_next = pair.prime("dual", pair.hat("dual", L))
            size, bnd, edges, ratio = _measure(pair, "primal", K_next)
        except (FrontierContact, FrontierVertex) as exc:
            trace.truncated = True
            trace.note = f"step {n}: {exc}"
            break
        cur.L, cur.L_size, cur.L_boundary, cur.L_edges, cur.L_ratio = (
            L, l_size, l_bnd, l_edges, l_ratio
        )
        cur.lam = float(l_ratio) - iod
        cur.lam_nonneg = ratio_at_least_iota(l_ratio, iod_sq)
        kappa_next = float(ratio) - io
        cur.b = ((d - io) * (k - iod) / (k + iod)) ** 2 / l_edges + (d - io) ** 2 / edges
        cur.contraction_lhs = 2 * kappa_next
        cur.contraction_rhs = a * 2 * cur.kappa + cur.b
        cur.contraction_holds = cur.contraction_lhs <= cur.contraction_rhs
        trace.steps.append(
            IterationStep(n + 1, K_next, size, bnd, edges, ratio, kappa_next,
                          ratio_at_least_iota(ratio, io_sq))
        )
    return trace


# ---------------------------------------------------------------------------
# bond animals


def animal_bound(d: int, n: int) -> Fraction:
    """``(d-1)**n * (1 - 1/(d-1))**(-((d-2)n + d))`` as an exact rational."""
    return Fraction(d - 1) ** n * Fraction(d - 1, d - 2) ** ((d - 2) * n + d)


@dataclass(frozen=True)
class AnimalCounts:
    d: int
    counts: tuple[int, ...]  # b_1 .. b_nmax
    bounds: tuple[Fraction, ...]

    @property
    def within_bound(self) -> list[bool]:
        return [b <= B for b, B in zip(self.counts, self.bounds)]

    @property
    def root_growth(self) -> float:
        """``b_n ** (1/n)`` at the largest computed ``n``."""
        n = len(self.counts)
        return self.counts[-1] ** (1.0 / n)

    @property
    def growth_below_e_dm1(self) -> bool:
        return self.root_growth < math.e * (self.d - 1)


def animal_counts(
    g: PlanarGraph, o: int, n_max: int, budget: int = DEFAULT_BUDGET
) -> AnimalCounts:
    """Number ``b_n`` of connected edge sets with ``n`` edges touching ``o``, ``n <= n_max``.

    Counted as connected vertex sets of the line graph, extended by a virtual
    root joined to the edges at ``o``, that contain the root.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    dist = _require_interior_ball(g, o, n_max - 1)
    near = {v for v, dv in dist.items() if dv <= n_max - 1}
    eids = sorted({g.edge_id(u, w) for u in near for w in g.neighbors[u]})
    index = {e: i + 1 for i, e in enumerate(eids)}  # 0 is the virtual root
    by_vertex: dict[int, list[int]] = {}
    for e in eids:
        for x in g.edges[e]:
            by_vertex.setdefault(x, []).append(index[e])
    adj: list[list[int]] = [[] for _ in range(len(eids) + 1)]
    adj[0] = [index[g.edge_id(o, w)] for w in g.neighbors[o]]
    for i in adj[0]:
        adj[i].append(0)
    for e in eids:
        i = index[e]
        for x in g.edges[e]:
            adj[i].extend(j for j in by_vertex[x] if j != i)
    indptr = np.cumsum([0] + [len(a) for a in adj]).astype(np.int64)
    nbr = np.asarray([j for a in adj for j in a], dtype=np.int64)
    counts, _, _, status = kernels.redelmeier(indptr, nbr, 0, n_max + 1, 0, budget, False)
    if status:
        raise BudgetExceeded(f"more than {budget} animals")
    d = g.spec.d
    b = tuple(int(c) for c in counts[2:])
    return AnimalCounts(d, b, tuple(animal_bound(d, n) for n in range(1, n_max + 1)))


# ---------------------------------------------------------------------------
# sphere growth for codegree 6


def sphere_sizes_series(d: int, N: int) -> list[int]:
    """Coefficients of ``(z^2+z+1)/(z^2+(1-d)z+1)`` up to ``z^N`` (integer recurrence)."""
    out: list[int] = []
    num = [1, 1, 1]
    for n in range(N + 1):
        a = num[n] if n < 3 else 0
        if n >= 1:
            a += (d - 1) * out[n - 1]
        if n >= 2:
            a -= out[n - 2]
        out.append(a)
    return out


def growth_roots(d: int) -> tuple[float, float]:
    """Both roots of ``z^2 + (1-d) z + 1``, smaller first (they are reciprocal)."""
    s = math.sqrt((d - 1) ** 2 - 4)
    return ((d - 1) - s) / 2, ((d - 1) + s) / 2


def sphere_size_closed_form(d: int, n: int, gamma: float) -> float:
    """``gamma^n (d - gamma^(-2n-1) - gamma^(-2n) - gamma^(-2n+1)) / (gamma - 1/gamma)``, n >= 1.

    Partial-fraction expansion of the series; symmetric under
    ``gamma -> 1/gamma``, so it holds for either root.
    """
    gi = 1.0 / gamma
    return gamma**n * (d - gi ** (2 * n + 1) - gi ** (2 * n) - gi ** (2 * n - 1)) / (gamma - gi)


def sphere_size_printed(n: int, gamma: float) -> float:
    """The explicit form ``gamma^n (3 - gamma^(-2n-2) - gamma^(-2n) - gamma^(-2n+2)) / (1 - gamma^-2)``.

    Kept only to document that it disagrees with the series for both roots.
    """
    gi = 1.0 / gamma
    return gamma**n * (3 - gi ** (2 * n + 2) - gi ** (2 * n) - gi ** (2 * n - 2)) / (1 - gi**2)


def fit_growth_root(sizes: Sequence[int], d: int) -> dict:
    """Decide empirically which root of ``z^2 + (1-d) z + 1`` governs ``sizes``.

    Returns the observed ratio ``sizes[-1]/sizes[-2]`` and, per root, the
    largest relative error of the closed form and of the printed form over
    ``n >= 1``.
    """
    small, large = growth_roots(d)
    res = {"observed_ratio": sizes[-1] / sizes[-2], "roots": {"smaller": small, "larger": large}}
    for name, gm in (("smaller", small), ("larger", large)):
        errs = [abs(sphere_size_closed_form(d, n, gm) - s) / s for n, s in enumerate(sizes) if n]
        perr = [abs(sphere_size_printed(n, gm) - s) / s for n, s in enumerate(sizes) if n]
        res[name] = {
            "ratio_error": abs(res["observed_ratio"] - gm) / gm,
            "closed_form_max_rel_error": max(errs),
            "printed_form_max_rel_error": max(perr),
        }
    res["growth_root"] = min(("smaller", "larger"), key=lambda k: res[k]["ratio_error"])
    return res
