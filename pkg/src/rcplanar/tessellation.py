"""Finite patches of {d, codegree} planar tessellations and their duals.

A patch is grown outward from a seed face.  The region built so far is a
topological disk whose frontier is kept as a cyclic doubly linked list of
vertices, each carrying the number of complete faces already incident to it.
A new face is glued onto a frontier edge; frontier vertices that the new face
saturates (they reach ``d`` faces) are swallowed, and the remaining sides of
the face are fresh vertices.

Faces are stored as counter-clockwise vertex cycles.  The single unbounded
region outside the patch is stored as one incomplete face whose cycle runs
clockwise, so Euler's formula ``V - E + F = 2`` holds with it included.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DegenerateSpec,
    FrontierContact,
    FrontierVertex,
    GeometryError,
    NoFaces,
    SphericalSpec,
    TruncatedBall,
)

__all__ = [
    "TessellationSpec",
    "PlanarGraph",
    "Patch",
    "DualPair",
    "check_spec",
    "geometry_class",
    "build_tessellation",
    "build_ball_patch",
    "dual_graph",
    "ball",
    "growth_sequence",
    "patch_edge_sets",
    "graph_to_json",
    "graph_from_json",
]


def check_spec(d: int, codegree: int) -> None:
    """Raise unless {d, codegree} is a euclidean or hyperbolic tessellation."""
    if d < 3 or codegree < 3:
        raise DegenerateSpec(f"need d >= 3 and codegree >= 3, got ({d}, {codegree})")
    if (d - 2) * (codegree - 2) < 4:
        raise SphericalSpec(
            f"({d}-2)({codegree}-2) = {(d - 2) * (codegree - 2)} < 4: spherical tessellation"
        )


def geometry_class(d: int, codegree: int) -> str:
    check_spec(d, codegree)
    return "euclidean" if (d - 2) * (codegree - 2) == 4 else "hyperbolic"


@dataclass(frozen=True)
class TessellationSpec:
    """Vertex degree ``d``, face size ``codegree`` and number of face rings.

    If ``ball_radius`` is given the patch is instead grown until every vertex
    within that graph distance of vertex 0 is interior; ``depth`` is then
    ignored.  Ball growth is much cheaper than face rings when only a
    neighbourhood of one vertex is needed.
    """

    d: int
    codegree: int
    depth: int = 0
    ball_radius: int | None = None

    def __post_init__(self):
        check_spec(self.d, self.codegree)
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.ball_radius is not None and self.ball_radius < 0:
            raise ValueError("ball_radius must be >= 0")

    @property
    def geometry(self) -> str:
        return geometry_class(self.d, self.codegree)

    def as_dict(self) -> dict:
        out = {"d": self.d, "codegree": self.codegree, "depth": self.depth}
        if self.ball_radius is not None:
            out["ball_radius"] = self.ball_radius
        return out


class PlanarGraph:
    """Immutable planar map of a finite patch.

    Attributes
    ----------
    n_vertices : int
    ring : list of int
        Construction ring of each vertex.
    edges : list of (u, v)
    faces : list of tuple
        Vertex cycles; complete faces are counter-clockwise.
    face_complete : list of bool
    face_ring : list of int
        Ring of each face (-1 for incomplete faces).
    face_edges : list of tuple
        ``face_edges[f][i]`` joins ``faces[f][i]`` and ``faces[f][i + 1]``.
    edge_faces : list of (left, right)
        Faces to the left and right of each edge traversed from ``u`` to ``v``.
    rotation : list of tuple
        Incident edge ids of each vertex in counter-clockwise order.
    interior : list of bool
        True when every face around the vertex is complete.
    edge_dual : list or None
        Edge id of the crossing dual edge (``None`` where a side is incomplete),
        filled in by :func:`dual_graph`.
    vertex_origin, face_origin : list or None
        For a dual graph: the parent face of each vertex and the parent vertex
        of each complete face.
    """

    def __init__(
        self,
        spec: TessellationSpec,
        n_vertices: int,
        edges: Sequence[tuple[int, int]],
        faces: Sequence[Sequence[int]],
        face_complete: Sequence[bool],
        ring: Sequence[int] | None = None,
        face_ring: Sequence[int] | None = None,
    ):
        self.spec = spec
        self.n_vertices = n_vertices
        self.edges = [tuple(e) for e in edges]
        self.ring = list(ring) if ring is not None else [0] * n_vertices
        self.faces = [tuple(f) for f in faces]
        self.face_complete = list(face_complete)
        self.face_ring = (
            list(face_ring)
            if face_ring is not None
            else [0 if c else -1 for c in self.face_complete]
        )
        self.edge_dual: list[int | None] | None = None
        self.vertex_origin: list[int] | None = None
        self.face_origin: list[int | None] | None = None

        self.edge_index = {}
        for i, (u, v) in enumerate(self.edges):
            key = (u, v) if u < v else (v, u)
            if key in self.edge_index or u == v:
                raise GeometryError(f"multi-edge or loop at {key}")
            self.edge_index[key] = i
        self.neighbors: list[list[int]] = [[] for _ in range(n_vertices)]
        for u, v in self.edges:
            self.neighbors[u].append(v)
            self.neighbors[v].append(u)
        self._derive_incidence()

    def edge_id(self, u: int, v: int) -> int:
        return self.edge_index[(u, v) if u < v else (v, u)]

    def _derive_incidence(self) -> None:
        n_e = len(self.edges)
        left = [-1] * n_e
        right = [-1] * n_e
        # succ[v][e_out] = e_in: around v, the edge after e_out (ccw) is e_in
        succ: list[dict[int, int]] = [dict() for _ in range(self.n_vertices)]
        face_edges = []
        for fid, cyc in enumerate(self.faces):
            k = len(cyc)
            fe = []
            for i in range(k):
                a, b = cyc[i], cyc[(i + 1) % k]
                e = self.edge_id(a, b)
                fe.append(e)
                if self.edges[e][0] == a:
                    if left[e] != -1:
                        raise GeometryError(f"edge {e} has two faces on its left")
                    left[e] = fid
                else:
                    if right[e] != -1:
                        raise GeometryError(f"edge {e} has two faces on its right")
                    right[e] = fid
            face_edges.append(tuple(fe))
            for i in range(k):
                e_in = fe[i - 1]
                e_out = fe[i]
                v = cyc[i]
                if e_out in succ[v]:
                    raise GeometryError(f"inconsistent rotation at vertex {v}")
                succ[v][e_out] = e_in
        if -1 in left or -1 in right:
            raise GeometryError("some edge is missing a face on one side")
        self.face_edges = face_edges
        self.edge_faces = list(zip(left, right))

        rotation = []
        for v in range(self.n_vertices):
            s = succ[v]
            if not s:
                rotation.append(())
                continue
            start = min(s)
            order = [start]
            e = s[start]
            while e != start:
                order.append(e)
                e = s[e]
                if len(order) > len(s):
                    raise GeometryError(f"rotation at {v} is not a cycle")
            if len(order) != len(s) or len(order) != len(self.neighbors[v]):
                raise GeometryError(f"rotation at {v} does not cover its edges")
            rotation.append(tuple(order))
        self.rotation = rotation

        interior = [True] * self.n_vertices
        for fid, cyc in enumerate(self.faces):
            if not self.face_complete[fid]:
                for v in cyc:
                    interior[v] = False
        self.interior = interior

    # -- small conveniences -------------------------------------------------

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def complete_faces(self) -> list[int]:
        return [f for f, c in enumerate(self.face_complete) if c]

    def interior_vertices(self) -> list[int]:
        return [v for v in range(self.n_vertices) if self.interior[v]]

    def frontier_vertices(self) -> list[int]:
        return [v for v in range(self.n_vertices) if not self.interior[v]]

    def faces_around(self, v: int) -> list[int]:
        """Faces incident to ``v`` in counter-clockwise order."""
        out = []
        for e in self.rotation[v]:
            a, b = self.edges[e]
            # the face after e (ccw) is the one for which e is the outgoing edge at v
            out.append(self.edge_faces[e][0] if a == v else self.edge_faces[e][1])
        return out

    def euler_characteristic(self) -> int:
        return self.n_vertices - self.n_edges + self.n_faces

    def __repr__(self) -> str:
        return (
            f"PlanarGraph({{{self.spec.d},{self.spec.codegree}}}, V={self.n_vertices}, "
            f"E={self.n_edges}, F={self.n_faces})"
        )


# ---------------------------------------------------------------------------
# construction


class _DiskBuilder:
    def __init__(self, d: int, codegree: int):
        self.d = d
        self.k = codegree
        self.ring: list[int] = []
        self.count: list[int] = []  # complete faces at each vertex
        self.nxt: list[int] = []
        self.prv: list[int] = []
        self.on_frontier: list[bool] = []
        self.adj: list[list[int]] = []
        self.edges: list[tuple[int, int]] = []
        self.edge_set: set[tuple[int, int]] = set()
        self.faces: list[tuple[int, ...]] = []
        self.face_ring: list[int] = []
        self.frontier_size = 0
        self.current_ring = 0

    def _new_vertex(self) -> int:
        v = len(self.ring)
        self.ring.append(self.current_ring)
        self.count.append(0)
        self.nxt.append(-1)
        self.prv.append(-1)
        self.on_frontier.append(True)
        self.adj.append([])
        return v

    def _add_edge(self, u: int, v: int) -> None:
        key = (u, v) if u < v else (v, u)
        if key in self.edge_set:
            raise GeometryError(f"edge {key} created twice")
        self.edge_set.add(key)
        self.edges.append((u, v))
        self.adj[u].append(v)
        self.adj[v].append(u)

    def seed(self) -> None:
        vs = [self._new_vertex() for _ in range(self.k)]
        for i in range(self.k):
            self._add_edge(vs[i], vs[(i + 1) % self.k])
            self.nxt[vs[i]] = vs[(i + 1) % self.k]
            self.prv[vs[(i + 1) % self.k]] = vs[i]
            self.count[vs[i]] = 1
        self.faces.append(tuple(vs))
        self.face_ring.append(0)
        self.frontier_size = self.k

    def glue(self, a: int) -> None:
        """Glue a face onto the frontier edge leaving ``a``."""
        d, k = self.d, self.k
        path = deque([a, self.nxt[a]])
        while self.count[path[0]] == d - 1:
            path.appendleft(self.prv[path[0]])
            if len(path) > self.frontier_size:
                raise GeometryError("face would close the whole frontier")
        while self.count[path[-1]] == d - 1:
            path.append(self.nxt[path[-1]])
            if len(path) > self.frontier_size:
                raise GeometryError("face would close the whole frontier")
        if path[0] == path[-1]:
            raise GeometryError("face would close the whole frontier")
        n_sides = len(path) - 1
        n_new = k - n_sides - 1
        if n_new < 0:
            raise GeometryError(f"frontier path of {n_sides} edges exceeds a {k}-gon")
        x0, xk = path[0], path[-1]
        fresh = [self._new_vertex() for _ in range(n_new)]
        chain = [x0] + fresh + [xk]
        for u, v in zip(chain, chain[1:]):
            self._add_edge(u, v)
        self.faces.append(tuple(reversed(path)) + tuple(fresh))
        self.face_ring.append(self.current_ring)
        for v in path:
            self.count[v] += 1
        for v in fresh:
            self.count[v] = 1
        for i in range(1, len(path) - 1):
            v = path[i]
            if self.count[v] != d:
                raise GeometryError(f"swallowed vertex {v} has {self.count[v]} faces")
            self.on_frontier[v] = False
            self.nxt[v] = self.prv[v] = -1
        for u, v in zip(chain, chain[1:]):
            self.nxt[u] = v
            self.prv[v] = u
        self.frontier_size += n_new - (len(path) - 2)

    def frontier_cycle(self) -> list[int]:
        start = min(v for v in range(len(self.ring)) if self.on_frontier[v])
        cyc = [start]
        v = self.nxt[start]
        while v != start:
            cyc.append(v)
            v = self.nxt[v]
        return cyc

    def saturate(self, targets: Iterable[int]) -> None:
        for v in targets:
            while self.on_frontier[v] and self.count[v] < self.d:
                self.glue(v)

    def finish(self, spec: TessellationSpec) -> PlanarGraph:
        outer = tuple(reversed(self.frontier_cycle()))
        faces = self.faces + [outer]
        complete = [True] * len(self.faces) + [False]
        g = PlanarGraph(
            spec,
            len(self.ring),
            self.edges,
            faces,
            complete,
            ring=self.ring,
            face_ring=self.face_ring + [-1],
        )
        _check_regularity(g)
        return g


def _check_regularity(g: PlanarGraph) -> None:
    d, k = g.spec.d, g.spec.codegree
    for v in range(g.n_vertices):
        if g.interior[v] and g.degree(v) != d:
            raise GeometryError(f"interior vertex {v} has degree {g.degree(v)} != {d}")
        if g.degree(v) > d:
            raise GeometryError(f"vertex {v} has degree {g.degree(v)} > {d}")
    for f, cyc in enumerate(g.faces):
        if g.face_complete[f] and len(cyc) != k:
            raise GeometryError(f"face {f} has {len(cyc)} sides != {k}")
    if g.euler_characteristic() != 2:
        raise GeometryError(f"Euler characteristic {g.euler_characteristic()} != 2")


def build_tessellation(spec: TessellationSpec) -> PlanarGraph:
    """Build a finite patch of the {d, codegree} tessellation.

    Ring ``n + 1`` consists of every face sharing a vertex with the patch
    after ring ``n``; ring 0 is a single seed face.  With ``ball_radius`` set
    the patch is grown around vertex 0 instead, see :class:`TessellationSpec`.
    Vertex and face ids are assigned in construction order, which is fully
    deterministic.
    """
    check_spec(spec.d, spec.codegree)
    b = _DiskBuilder(spec.d, spec.codegree)
    b.seed()
    if spec.ball_radius is None:
        for r in range(1, spec.depth + 1):
            b.current_ring = r
            b.saturate(b.frontier_cycle())
    else:
        r = 0
        while True:
            dist = _bfs_distances(b.adj, 0, spec.ball_radius)
            todo = [v for v in b.frontier_cycle() if dist.get(v, spec.ball_radius + 1) <= spec.ball_radius]
            if not todo:
                break
            r += 1
            b.current_ring = r
            b.saturate(todo)
    return b.finish(spec)


def build_ball_patch(d: int, codegree: int, radius: int) -> PlanarGraph:
    """Patch in which every vertex within ``radius`` of vertex 0 is interior."""
    return build_tessellation(TessellationSpec(d, codegree, 0, ball_radius=radius))


def _bfs_distances(adj, source: int, limit: int | None = None) -> dict[int, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if limit is not None and du >= limit:
            continue
        for w in adj[u]:
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return dist


# ---------------------------------------------------------------------------
# dual


def _faces_from_rotation(n_vertices, edges, rotation):
    """Trace faces of a rotation system; each face keeps its left side inside."""
    pos = [dict() for _ in range(n_vertices)]
    for v, rot in enumerate(rotation):
        for i, e in enumerate(rot):
            pos[v][e] = i
    seen = set()
    faces = []
    for e0, (u0, v0) in enumerate(edges):
        for start in ((u0, v0, e0), (v0, u0, e0)):
            if (start[0], start[2]) in seen:
                continue
            cyc = []
            dart_edges = []
            a, b, e = start
            while (a, e) not in seen:
                seen.add((a, e))
                cyc.append(a)
                dart_edges.append(e)
                rot = rotation[b]
                e = rot[(pos[b][e] - 1) % len(rot)]
                x, y = edges[e]
                a, b = b, (y if x == b else x)
            faces.append((tuple(cyc), frozenset(dart_edges)))
    return faces


def dual_graph(g: PlanarGraph) -> PlanarGraph:
    """Planar dual of the complete part of ``g``.

    Dual vertices are the complete faces of ``g`` (in face-id order); a dual
    edge crosses every edge of ``g`` whose two sides are complete faces.
    Complete dual faces correspond to interior vertices of ``g``.  The
    edge/dual-edge bijection is recorded on both graphs.
    """
    complete = g.complete_faces()
    if not complete:
        raise NoFaces("graph has no complete face")
    dv = {f: i for i, f in enumerate(complete)}
    d_edges = []
    edge_dual: list[int | None] = [None] * g.n_edges
    dual_edge_origin = []
    for e, (fl, fr) in enumerate(g.edge_faces):
        if g.face_complete[fl] and g.face_complete[fr]:
            edge_dual[e] = len(d_edges)
            # left face of u->v becomes the tail: the dual edge then points
            # across (u, v) from left to right
            d_edges.append((dv[fl], dv[fr]))
            dual_edge_origin.append(e)
    # rotation at a dual vertex: the face's own edges in ccw order
    d_rot = []
    for f in complete:
        d_rot.append(tuple(edge_dual[e] for e in g.face_edges[f] if edge_dual[e] is not None))

    traced = _faces_from_rotation(len(complete), d_edges, d_rot)
    by_edges = {}
    for cyc, es in traced:
        by_edges.setdefault(es, []).append(cyc)
    faces, flags, origin, fring = [], [], [], []
    used = set()
    for v in range(g.n_vertices):
        if not g.interior[v]:
            continue
        es = frozenset(edge_dual[e] for e in g.rotation[v])
        if None in es or es not in by_edges:
            raise GeometryError(f"no dual face found around interior vertex {v}")
        cyc = by_edges[es][0]
        faces.append(cyc)
        flags.append(True)
        origin.append(v)
        fring.append(g.ring[v])
        used.add(id(cyc))
    rest = [cyc for cyc, _ in traced if id(cyc) not in used]
    rest.sort(key=lambda c: min(c))
    for cyc in rest:
        faces.append(cyc)
        flags.append(False)
        origin.append(None)
        fring.append(-1)

    dspec = TessellationSpec(g.spec.codegree, g.spec.d, g.spec.depth, g.spec.ball_radius)
    dual = PlanarGraph(
        dspec,
        len(complete),
        d_edges,
        faces,
        flags,
        ring=[g.face_ring[f] for f in complete],
        face_ring=fring,
    )
    dual.vertex_origin = list(complete)
    dual.face_origin = origin
    dual.edge_dual = list(dual_edge_origin)
    g.edge_dual = edge_dual
    return dual


class DualPair:
    """A patch together with its dual, with the face/vertex closure operators.

    Sets are always given as vertex ids of one of the two graphs, named by
    ``side`` ("primal" or "dual").  A vertex of one graph is a face of the
    other, which is how both operators are phrased.
    """

    def __init__(self, primal: PlanarGraph):
        self.primal = primal
        self.dual = dual_graph(primal)
        self._face_to_dual_vertex = {f: i for i, f in enumerate(self.dual.vertex_origin)}
        self._vertex_to_dual_face = {
            v: f for f, v in enumerate(self.dual.face_origin) if v is not None
        }

    def graph(self, side: str) -> PlanarGraph:
        if side == "primal":
            return self.primal
        if side == "dual":
            return self.dual
        raise ValueError(f"side must be 'primal' or 'dual', not {side!r}")

    @staticmethod
    def other(side: str) -> str:
        return "dual" if side == "primal" else "primal"

    def faces_as_vertices(self, face_ids: Iterable[int]) -> frozenset[int]:
        """Complete faces of the primal graph as vertex ids of the dual."""
        return frozenset(self._face_to_dual_vertex[f] for f in face_ids)

    def _face_to_vertex(self, side: str, f: int) -> int:
        # a complete face of graph(side) as a vertex of the other graph
        if side == "primal":
            return self._face_to_dual_vertex[f]
        return self.dual.face_origin[f]

    def prime(self, side: str, K: Iterable[int]) -> frozenset[int]:
        """Vertices of the other graph bounding the faces that ``K`` stands for.

        Each ``k`` in ``K`` (a vertex of ``graph(side)``) is a face of the
        other graph; the result is the set of all its corners.
        """
        g = self.graph(side)
        out = set()
        for k in K:
            if not g.interior[k]:
                raise FrontierContact(f"vertex {k} of the {side} graph touches the frontier")
            for f in g.faces_around(k):
                out.add(self._face_to_vertex(side, f))
        return frozenset(out)

    def hat(self, side: str, K: Iterable[int]) -> frozenset[int]:
        """Hole-filled version of ``K``.

        All faces of the other graph enclosed by the outer boundary of the
        subgraph spanned by ``prime(side, K)``, returned as vertices of
        ``graph(side)``.  Enclosed means not reachable from the outside face
        without crossing an edge of that subgraph.
        """
        K = frozenset(K)
        S = self.prime(side, K)
        x = self.graph(self.other(side))
        span = {x.edge_id(u, v) for u in S for v in x.neighbors[u] if v in S and u < v}
        reached = [False] * x.n_faces
        queue = deque()
        for f, c in enumerate(x.face_complete):
            if not c:
                reached[f] = True
                queue.append(f)
        while queue:
            f = queue.popleft()
            for e in x.face_edges[f]:
                if e in span:
                    continue
                fl, fr = x.edge_faces[e]
                h = fr if fl == f else fl
                if not reached[h]:
                    reached[h] = True
                    queue.append(h)
        inside = frozenset(
            self._face_to_vertex(self.other(side), f)
            for f in range(x.n_faces)
            if not reached[f]
        )
        if not K <= inside:
            raise FrontierContact("closure lost part of the original set")
        g = self.graph(side)
        if any(not g.interior[v] for v in inside):
            raise FrontierContact("closure reaches the frontier")
        return inside


# ---------------------------------------------------------------------------
# balls and edge-set calculus


@dataclass(frozen=True)
class Patch:
    """Finite vertex set ``K`` with its induced, incident and boundary edges."""

    graph: PlanarGraph
    K: frozenset
    edges_inside: frozenset  # E(K)
    edges_touching: frozenset  # E*(K)
    boundary: frozenset  # boundary edges, E*(K) minus E(K)

    @property
    def size(self) -> int:
        return len(self.K)

    @property
    def n_inside(self) -> int:
        return len(self.edges_inside)

    @property
    def n_touching(self) -> int:
        return len(self.edges_touching)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary)

    def boundary_vertices(self) -> frozenset:
        """Vertices of ``K`` incident to a boundary edge (inner vertex boundary)."""
        g = self.graph
        out = set()
        for e in self.boundary:
            u, v = g.edges[e]
            out.add(u if u in self.K else v)
        return frozenset(out)


def patch_edge_sets(g: PlanarGraph, K: Iterable[int]) -> Patch:
    """E(K), E*(K) and the edge boundary of ``K`` (all vertices interior)."""
    K = frozenset(K)
    bad = [v for v in K if not g.interior[v]]
    if bad:
        raise FrontierVertex(f"vertices {sorted(bad)[:5]} lie on the frontier")
    inside, touching = set(), set()
    for u in K:
        for w in g.neighbors[u]:
            e = g.edge_id(u, w)
            touching.add(e)
            if w in K:
                inside.add(e)
    return Patch(g, K, frozenset(inside), frozenset(touching), frozenset(touching - inside))


def ball(g: PlanarGraph, o: int, r: int) -> Patch:
    """Graph-metric ball of radius ``r`` about ``o``."""
    dist = _bfs_distances(g.neighbors, o, r)
    K = [v for v, dv in dist.items() if dv <= r]
    if any(not g.interior[v] for v in K):
        raise TruncatedBall(f"ball of radius {r} about {o} reaches the frontier")
    return patch_edge_sets(g, K)


def growth_sequence(g: PlanarGraph, o: int, N: int) -> list[int]:
    """Sphere sizes ``|B_n \\ B_{n-1}|`` for ``n = 0..N``.

    Exact as long as the ball of radius ``N - 1`` avoids the frontier.
    """
    dist = _bfs_distances(g.neighbors, o, N)
    if any(not g.interior[v] for v, dv in dist.items() if dv <= N - 1):
        raise TruncatedBall(f"ball of radius {N - 1} about {o} reaches the frontier")
    sizes = [0] * (N + 1)
    for dv in dist.values():
        sizes[dv] += 1
    return sizes


# ---------------------------------------------------------------------------
# JSON


def graph_to_json(g: PlanarGraph) -> str:
    doc = {
        "spec": g.spec.as_dict(),
        "vertices": [{"id": v, "ring": g.ring[v]} for v in range(g.n_vertices)],
        "edges": [
            {
                "id": i,
                "u": u,
                "v": v,
                "dual": None if g.edge_dual is None else g.edge_dual[i],
            }
            for i, (u, v) in enumerate(g.edges)
        ],
        "faces": [
            {"id": f, "cycle": list(c), "complete": g.face_complete[f]}
            for f, c in enumerate(g.faces)
        ],
    }
    return json.dumps(doc, separators=(",", ":"))


def graph_from_json(text: str) -> PlanarGraph:
    doc = json.loads(text)
    s = doc["spec"]
    spec = TessellationSpec(s["d"], s["codegree"], s.get("depth", 0), s.get("ball_radius"))
    verts = sorted(doc["vertices"], key=lambda v: v["id"])
    edges = sorted(doc["edges"], key=lambda e: e["id"])
    faces = sorted(doc["faces"], key=lambda f: f["id"])
    g = PlanarGraph(
        spec,
        len(verts),
        [(e["u"], e["v"]) for e in edges],
        [f["cycle"] for f in faces],
        [f["complete"] for f in faces],
        ring=[v["ring"] for v in verts],
    )
    if any(e.get("dual") is not None for e in edges):
        g.edge_dual = [e.get("dual") for e in edges]
    return g
