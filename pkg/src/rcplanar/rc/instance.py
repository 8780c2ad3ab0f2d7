"""Finite-volume random-cluster instances and their boundary conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..errors import DomainError
from ..tessellation import ball, build_ball_patch

BOUNDARY_CONDITIONS = ("free", "wired", "weakened", "apex")


def _check_prob(name, x):
    if not 0 <= x <= 1:
        raise DomainError(f"{name} must lie in [0, 1], got {x}")


def csr(n_vertices: int, eu: Sequence[int], ev: Sequence[int]):
    """CSR adjacency ``(indptr, nbr, nbr_edge)``; a loop is listed once."""
    deg = np.zeros(n_vertices, dtype=np.int64)
    for u, v in zip(eu, ev):
        deg[u] += 1
        if v != u:
            deg[v] += 1
    indptr = np.zeros(n_vertices + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    fill = indptr[:-1].copy()
    nbr = np.empty(indptr[-1], dtype=np.int64)
    nbr_edge = np.empty(indptr[-1], dtype=np.int64)
    for e, (u, v) in enumerate(zip(eu, ev)):
        nbr[fill[u]], nbr_edge[fill[u]] = v, e
        fill[u] += 1
        if v != u:
            nbr[fill[v]], nbr_edge[fill[v]] = u, e
            fill[v] += 1
    return indptr, nbr, nbr_edge


@dataclass(frozen=True)
class ChainGraph:
    """Graph the dynamics run on: marked vertices contracted to ``super_node``.

    Edge ids are those of the instance; an edge between two marked vertices
    becomes a loop.
    """

    n_vertices: int
    eu: np.ndarray
    ev: np.ndarray
    indptr: np.ndarray
    nbr: np.ndarray
    nbr_edge: np.ndarray
    vertex_map: np.ndarray  # instance vertex -> chain vertex
    super_node: int | None

    @property
    def csr(self):
        return self.indptr, self.nbr, self.nbr_edge


@dataclass(frozen=True, eq=False)
class RCInstance:
    """Random-cluster measure on a finite graph.

    Components meeting ``marks`` carry no factor ``q``: empty for free and
    apex instances, the boundary for wired and weakened ones.  For apex
    instances the last vertex is the apex and edges ``base_edges..`` join it
    to every other vertex.  The connectivity event is ``origin`` joined to
    ``boundary`` through open edges among the first ``base_edges`` edges.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    p_edge: tuple
    q: float | Fraction
    bc: str
    boundary: frozenset
    marks: frozenset
    origin: int | None
    base_edges: int
    p: float | Fraction
    s: float | Fraction | None = None
    meta: dict = field(default_factory=dict)

    # -- construction --------------------------------------------------------

    @classmethod
    def build(cls, n_vertices: int, edges, bc: str = "free", p=0.5, q=1, s=None,
              boundary=(), origin: int | None = None, meta: dict | None = None) -> "RCInstance":
        if bc not in BOUNDARY_CONDITIONS:
            raise DomainError(f"unknown boundary condition {bc!r}")
        _check_prob("p", p)
        if q < 1:
            raise DomainError(f"q must be >= 1, got {q}")
        edges = tuple((int(u), int(v)) for u, v in edges)
        boundary = frozenset(int(v) for v in boundary)
        if any(not 0 <= v < n_vertices for v in boundary):
            raise DomainError("boundary vertex out of range")
        if bc in ("weakened", "apex"):
            if s is None:
                raise DomainError(f"bc={bc} needs s")
            _check_prob("s", s)
        if bc in ("wired", "weakened") and not boundary:
            raise DomainError(f"bc={bc} needs a nonempty boundary")
        marks = boundary if bc in ("wired", "weakened") else frozenset()
        base = len(edges)
        if bc == "weakened":
            p_edge = tuple(s if (u in boundary or v in boundary) else p for u, v in edges)
        else:
            p_edge = (p,) * base
        n = n_vertices
        if bc == "apex":
            edges = edges + tuple((n, v) for v in range(n_vertices))
            p_edge = p_edge + (s,) * n_vertices
            n += 1
        return cls(n, edges, p_edge, q, bc, boundary, marks, origin, base, p,
                   s if bc in ("weakened", "apex") else None, dict(meta or {}))

    @classmethod
    def from_ball(cls, g, o: int, radius: int, bc: str = "free", p=0.5, q=1, s=None) -> "RCInstance":
        """Induced subgraph on the ball ``B_radius(o)``; boundary = vertices with an edge leaving it.

        Vertices are relabelled in BFS order so ``o`` becomes 0.
        """
        patch = ball(g, o, radius)  # raises TruncatedBall
        dist = {o: 0}
        order = [o]
        for v in order:
            for w in g.neighbors[v]:
                if w in patch.K and w not in dist:
                    dist[w] = dist[v] + 1
                    order.append(w)
        idx = {v: i for i, v in enumerate(order)}
        edges = sorted(tuple(sorted((idx[g.edges[e][0]], idx[g.edges[e][1]])))
                       for e in patch.edges_inside)
        bnd = [idx[v] for v in order if any(w not in idx for w in g.neighbors[v])]
        meta = {"d": g.spec.d, "codegree": g.spec.codegree, "radius": radius}
        return cls.build(len(order), edges, bc, p, q, s, bnd, 0, meta)

    @classmethod
    def from_spec(cls, d: int, codegree: int, radius: int, bc: str = "free", p=0.5, q=1,
                  s=None) -> "RCInstance":
        return cls.from_ball(_ball_patch(d, codegree, radius), 0, radius, bc, p, q, s)

    def with_params(self, p=None, q=None, s=None, bc=None) -> "RCInstance":
        """Same base graph and boundary with new parameters."""
        n = self.n_vertices - (1 if self.bc == "apex" else 0)
        return RCInstance.build(
            n, self.edges[: self.base_edges], bc or self.bc,
            self.p if p is None else p, self.q if q is None else q,
            self.s if s is None else s, self.boundary, self.origin, self.meta,
        )

    # -- derived quantities --------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def apex(self) -> int | None:
        return self.n_vertices - 1 if self.bc == "apex" else None

    @property
    def eu(self) -> np.ndarray:
        return np.array([u for u, _ in self.edges], dtype=np.int64).reshape(-1)

    @property
    def ev(self) -> np.ndarray:
        return np.array([v for _, v in self.edges], dtype=np.int64).reshape(-1)

    def thresholds(self) -> tuple[np.ndarray, np.ndarray]:
        """Heat-bath opening thresholds ``(p_e, p_e / (p_e + (1 - p_e) q))``."""
        pe = np.array([float(x) for x in self.p_edge])
        q = float(self.q)
        return pe, pe / (pe + (1 - pe) * q)

    def chain_graph(self) -> ChainGraph:
        return _chain_graph(self)

    def connect_event(self):
        """``(source, target_mask, allowed_mask)`` of the event on the chain graph."""
        if self.origin is None or not self.boundary:
            raise DomainError("connectivity event needs an origin and a boundary")
        cg = self.chain_graph()
        tgt = np.zeros(cg.n_vertices, dtype=np.uint8)
        for v in self.boundary:
            tgt[cg.vertex_map[v]] = 1
        allowed = np.zeros(self.n_edges, dtype=np.uint8)
        allowed[: self.base_edges] = 1
        return int(cg.vertex_map[self.origin]), tgt, allowed

    def is_degenerate(self) -> bool:
        """Every edge probability is 0 or 1, so the measure is a point mass."""
        return all(x in (0, 1) for x in self.p_edge)

    def describe(self) -> dict:
        return {
            "bc": self.bc, "n_vertices": self.n_vertices, "n_edges": self.n_edges,
            "n_boundary": len(self.boundary), "p": float(self.p), "q": float(self.q),
            "s": None if self.s is None else float(self.s), **self.meta,
        }


@lru_cache(maxsize=16)
def _ball_patch(d, codegree, radius):
    return build_ball_patch(d, codegree, radius)


def _chain_graph(inst: RCInstance) -> ChainGraph:
    cached = inst.__dict__.get("_chain")
    if cached is not None:
        return cached
    vmap = np.arange(inst.n_vertices, dtype=np.int64)
    sup = None
    if inst.marks:
        # unmarked vertices keep their order; all marks become one last vertex
        keep = [v for v in range(inst.n_vertices) if v not in inst.marks]
        vmap = np.empty(inst.n_vertices, dtype=np.int64)
        vmap[keep] = np.arange(len(keep))
        sup = len(keep)
        vmap[list(inst.marks)] = sup
    n = inst.n_vertices if sup is None else sup + 1
    eu, ev = vmap[inst.eu], vmap[inst.ev]
    cg = ChainGraph(n, eu, ev, *csr(n, eu, ev), vmap, sup)
    object.__setattr__(inst, "_chain", cg)
    return cg


# -- small fixtures -----------------------------------------------------------


def triangle(bc: str = "free", p=Fraction(1, 2), q=2, s=None, boundary=(0, 1)) -> RCInstance:
    """Triangle on vertices 0, 1, 2; origin is the first non-boundary vertex."""
    origin = min(set(range(3)) - set(boundary))
    return RCInstance.build(3, [(0, 1), (1, 2), (0, 2)], bc, p, q, s, boundary, origin,
                            meta={"fixture": "triangle"})


def path3(bc: str = "wired", p=Fraction(1, 2), q=2, s=None) -> RCInstance:
    """Path v1 - v2 - v3 (vertices 0, 1, 2) with boundary ``{0, 2}`` and origin ``1``."""
    return RCInstance.build(3, [(0, 1), (1, 2)], bc, p, q, s, (0, 2), origin=1,
                            meta={"fixture": "path3"})


FIXTURES = {"triangle": triangle, "path3": path3}
