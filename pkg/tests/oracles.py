"""Independent reference computations used only by the tests.

Nothing here imports the package's construction code: tilings are
generated from the reflection group of their fundamental triangle, and
connected sets are enumerated by naive set growth with hashing.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from fractions import Fraction

import numpy as np


class CoxeterTiling:
    """The {d, k} tiling as orbits of the triangle group with angles pi/d, pi/2, pi/k.

    Generators: ``a`` swaps the two ends of the fundamental edge (fixes the
    face centre and edge midpoint), ``b`` fixes the vertex and face centre,
    ``c`` is the edge line itself.  So ``m(a,b) = k``, ``m(b,c) = d``,
    ``m(a,c) = 2``.  Vertices, edges and faces are the orbits of the three
    fundamental weights, dual to ``a``, ``b`` and ``c``.  Weights are row
    vectors; a group element ``M`` (a product of reflection matrices) sends
    ``w`` to ``w @ M``.
    """

    def __init__(self, d: int, k: int):
        self.d, self.k = d, k
        m = np.array([[1, k, 2], [k, 1, d], [2, d, 1]], dtype=float)
        B = -np.cos(np.pi / m)
        np.fill_diagonal(B, 1.0)
        self.S = []
        for i in range(3):
            M = np.eye(3)
            M[i, :] -= 2 * B[i, :]
            self.S.append(M)
        self.w = np.eye(3)
        self.stab_vertex = self._finite_group([1, 2])
        self.stab_face = self._finite_group([0, 1])

    def _finite_group(self, gens):
        seen = {self._key(np.eye(3).ravel())}
        out = [np.eye(3)]
        queue = deque(out)
        while queue:
            g = queue.popleft()
            for i in gens:
                h = g @ self.S[i]
                key = self._key(h.ravel())
                if key not in seen:
                    seen.add(key)
                    out.append(h)
                    queue.append(h)
        return out

    @staticmethod
    def _key(x) -> tuple:
        return tuple(int(round(v * 1e6)) for v in x)

    def vertex_bfs(self, radius: int) -> list[int]:
        """Sphere sizes about a vertex for ``n = 0..radius``."""
        wa = self.w[0]
        seen = {self._key(wa)}
        frontier = [np.eye(3)]
        sizes = [1]
        for _ in range(radius):
            nxt = []
            for M in frontier:
                for H in self.stab_vertex:
                    M2 = self.S[0] @ H @ M
                    key = self._key(wa @ M2)
                    if key not in seen:
                        seen.add(key)
                        nxt.append(M2)
            sizes.append(len(nxt))
            frontier = nxt
        return sizes

    def face_ring_counts(self, depth: int) -> tuple[int, int, int]:
        """``(V, E, F)`` of the patch of ``depth`` face rings about a seed face.

        Ring 0 is one face; ring ``n + 1`` adds every face sharing a vertex with
        ring ``n``.  ``F`` counts the outer region as one face.
        """
        wa, wb, wc = self.w
        faces = {self._key(wc): np.eye(3)}
        ring = [np.eye(3)]
        for _ in range(depth):
            nxt = []
            for M in ring:
                for H in self.stab_face:  # corners of this face
                    for H2 in self.stab_vertex:  # faces around that corner
                        M2 = H2 @ H @ M
                        key = self._key(wc @ M2)
                        if key not in faces:
                            faces[key] = M2
                            nxt.append(M2)
            ring = nxt
        verts, edges = set(), set()
        for M in faces.values():
            for H in self.stab_face:
                verts.add(self._key(wa @ H @ M))
                edges.add(self._key(wb @ H @ M))
        return len(verts), len(edges), len(faces) + 1


def connected_sets_naive(adj: dict, root, max_size: int) -> dict[int, set[frozenset]]:
    """All connected vertex sets containing ``root`` by size, grown one vertex at a time."""
    levels = {1: {frozenset([root])}}
    for m in range(2, max_size + 1):
        cur = set()
        for s in levels[m - 1]:
            for v in s:
                for w in adj[v]:
                    if w not in s:
                        cur.add(s | {w})
        levels[m] = cur
    return levels


def connected_edge_sets_naive(edges_at: dict, endpoints: dict, root, n_max: int) -> list[int]:
    """Counts of connected edge sets with ``n`` edges having ``root`` as an endpoint."""
    level = {frozenset([e]) for e in edges_at[root]}
    out = [len(level)]
    for _ in range(2, n_max + 1):
        cur = set()
        for s in level:
            touched = {x for e in s for x in endpoints[e]}
            for x in touched:
                for f in edges_at[x]:
                    if f not in s:
                        cur.add(s | {f})
        level = cur
        out.append(len(level))
    return out


def rc_bruteforce(n_vertices, edges, p_of_edge, q, marks=()):
    """Exact random-cluster law by listing configurations, with Fractions.

    Returns ``(Z, weight)`` where ``weight[config_tuple]`` is the unnormalised
    weight; components meeting ``marks`` are not counted.
    """
    marks = set(marks)
    weights = {}
    for bits in itertools.product((0, 1), repeat=len(edges)):
        parent = list(range(n_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        w = Fraction(1)
        for e, b in enumerate(bits):
            pe = p_of_edge[e]
            w *= pe if b else 1 - pe
            if b:
                u, v = edges[e]
                parent[find(u)] = find(v)
        roots = {find(v) for v in range(n_vertices)}
        marked = {find(v) for v in marks}
        w *= Fraction(q) ** len(roots - marked)
        weights[bits] = w
    return sum(weights.values()), weights


def wilson(k: int, n: int, z: float = 1.959963984540054):
    ph = k / n
    den = 1 + z * z / n
    c = (ph + z * z / (2 * n)) / den
    h = z * math.sqrt(ph * (1 - ph) / n + z * z / (4 * n * n)) / den
    return c - h, c + h
