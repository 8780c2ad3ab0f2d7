import json
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import CoxeterTiling
from rcplanar.errors import (
    DegenerateSpec,
    FrontierContact,
    FrontierVertex,
    NoFaces,
    SphericalSpec,
    TruncatedBall,
)
from rcplanar.tessellation import (
    DualPair,
    TessellationSpec,
    ball,
    build_ball_patch,
    build_tessellation,
    dual_graph,
    geometry_class,
    graph_from_json,
    graph_to_json,
    growth_sequence,
    patch_edge_sets,
)

SPECS = [(4, 4), (3, 6), (6, 3), (5, 5), (3, 7), (7, 3), (4, 5), (5, 4), (7, 6), (3, 8), (8, 3)]


def build(d, k, depth):
    return build_tessellation(TessellationSpec(d, k, depth))


@pytest.fixture(scope="module")
def g55():
    return build(5, 5, 3)


@pytest.fixture(scope="module")
def pair44():
    return DualPair(build(4, 4, 3))


# -- spec validation ---------------------------------------------------------


def test_spherical_rejected():
    with pytest.raises(SphericalSpec):
        build(3, 5, 1)
    with pytest.raises(SphericalSpec):
        TessellationSpec(4, 3)


def test_degenerate_rejected():
    with pytest.raises(DegenerateSpec):
        TessellationSpec(2, 8)
    with pytest.raises(DegenerateSpec):
        TessellationSpec(9, 2)


@pytest.mark.parametrize("d,k,cls", [(4, 4, "euclidean"), (3, 6, "euclidean"), (6, 3, "euclidean"),
                                     (5, 5, "hyperbolic"), (3, 7, "hyperbolic")])
def test_geometry_class(d, k, cls):
    assert geometry_class(d, k) == cls


# -- construction ------------------------------------------------------------


@pytest.mark.parametrize("d,k", SPECS)
@pytest.mark.parametrize("depth", [0, 1, 2])
def test_counts_match_reflection_group(d, k, depth):
    g = build(d, k, depth)
    assert (g.n_vertices, g.n_edges, g.n_faces) == CoxeterTiling(d, k).face_ring_counts(depth)


def test_55_depth3_counts_and_ring_recurrence():
    g = build(5, 5, 3)
    assert (g.n_vertices, g.n_edges, g.n_faces) == CoxeterTiling(5, 5).face_ring_counts(3)
    # vertices added per ring obey a two-term linear recurrence; fit it on
    # rings 1..4 and predict ring 5
    sizes = [build(5, 5, n).n_vertices for n in range(6)]
    new = np.diff(sizes)
    A = np.array([[new[1], new[0]], [new[2], new[1]]], dtype=float)
    c = np.linalg.solve(A, [new[2], new[3]])
    assert np.allclose(c, np.round(c))
    assert round(c[0] * new[3] + c[1] * new[2]) == new[4]
    assert sizes == [5, 45, 320, 2205, 15125, 103680]


@pytest.mark.parametrize("d,k", SPECS)
def test_regularity_and_euler(d, k):
    for depth in range(3):
        g = build(d, k, depth)
        for v in g.interior_vertices():
            assert g.degree(v) == d
            assert len(g.faces_around(v)) == d
        for f in g.complete_faces():
            assert len(g.faces[f]) == k
        assert g.euler_characteristic() == 2
        assert sum(not c for c in g.face_complete) == 1


@pytest.mark.parametrize("d,k", SPECS)
def test_rotation_is_consistent_with_faces(d, k):
    g = build(d, k, 2)
    for v in range(g.n_vertices):
        assert sorted(g.rotation[v]) == sorted(g.edge_id(v, w) for w in g.neighbors[v])
    for f, cyc in enumerate(g.faces):
        for i, e in enumerate(g.face_edges[f]):
            assert set(g.edges[e]) == {cyc[i], cyc[(i + 1) % len(cyc)]}
            assert f in g.edge_faces[e]


def test_depth_advances_frontier_distance():
    for n in range(4):
        g = build(5, 5, n)
        dist = nx.single_source_shortest_path_length(nx.Graph(g.edges), 0)
        assert min(dist[v] for v in g.frontier_vertices()) == n


def test_determinism_and_json_roundtrip():
    a, b = build(5, 4, 2), build(5, 4, 2)
    assert graph_to_json(a) == graph_to_json(b)
    doc = json.loads(graph_to_json(a))
    assert doc["spec"] == {"d": 5, "codegree": 4, "depth": 2}
    assert set(doc["edges"][0]) == {"id", "u", "v", "dual"}
    back = graph_from_json(graph_to_json(a))
    assert back.edges == a.edges and back.faces == a.faces
    assert back.face_complete == a.face_complete and back.ring == a.ring


def test_json_records_dual_cross_reference():
    g = build(4, 4, 2)
    dual_graph(g)
    doc = json.loads(graph_to_json(g))
    assert any(e["dual"] is not None for e in doc["edges"])
    assert any(e["dual"] is None for e in doc["edges"])


# -- dual --------------------------------------------------------------------


def test_square_lattice_dual_is_square():
    g = build(4, 4, 3)
    h = dual_graph(g)
    assert (h.spec.d, h.spec.codegree) == (4, 4)
    for v in h.interior_vertices():
        assert h.degree(v) == 4
    for f in h.complete_faces():
        assert len(h.faces[f]) == 4


def test_54_dual_degrees_and_face_pair_scan():
    g = build(5, 4, 2)
    h = dual_graph(g)
    assert all(h.degree(v) == 4 for v in h.interior_vertices())
    # face-adjacency scan, independent of the incidence tables
    sides = {}
    for f in g.complete_faces():
        cyc = g.faces[f]
        for i in range(len(cyc)):
            sides.setdefault(frozenset((cyc[i], cyc[(i + 1) % len(cyc)])), []).append(f)
    shared = sum(1 for fs in sides.values() if len(fs) == 2)
    assert h.n_edges == shared


def test_edge_bijection():
    g = build(5, 5, 2)
    h = dual_graph(g)
    both_complete = [
        e for e, (l, r) in enumerate(g.edge_faces) if g.face_complete[l] and g.face_complete[r]
    ]
    assert h.n_edges == len(both_complete)
    for e in both_complete:
        ed = g.edge_dual[e]
        assert h.edge_dual[ed] == e
        # the dual edge joins the two faces on either side
        assert {h.vertex_origin[x] for x in h.edges[ed]} == set(g.edge_faces[e])


@pytest.mark.parametrize("d,k", [(5, 5), (4, 4), (3, 7), (7, 3), (4, 6)])
def test_dual_of_dual_is_interior(d, k):
    g = build(d, k, 3)
    dd = dual_graph(dual_graph(g))
    h = dual_graph(g)
    origin = [h.face_origin[f] for f in dd.vertex_origin]
    interior = nx.Graph()
    interior.add_nodes_from(g.interior_vertices())
    interior.add_edges_from((u, v) for u, v in g.edges if g.interior[u] and g.interior[v])
    mapped = nx.Graph()
    mapped.add_nodes_from(origin)
    mapped.add_edges_from((origin[u], origin[v]) for u, v in dd.edges)
    assert sorted(origin) == sorted(g.interior_vertices())
    assert set(map(frozenset, mapped.edges)) == set(map(frozenset, interior.edges))
    assert nx.is_isomorphic(nx.Graph(dd.edges), interior)


def test_dual_of_faceless_graph():
    with pytest.raises(NoFaces):
        dual_graph(dual_graph(build(5, 5, 0)))


# -- balls -------------------------------------------------------------------


def test_ball_radius_zero():
    g = build_ball_patch(5, 5, 2)
    p = ball(g, 0, 0)
    assert p.K == frozenset([0]) and p.n_boundary == 5


def test_square_ball_sizes():
    g = build_ball_patch(4, 4, 7)
    for n in range(7):
        assert ball(g, 0, n).size == 2 * n * n + 2 * n + 1


@pytest.mark.parametrize("d,k,N", [(5, 5, 6), (7, 6, 5), (4, 5, 6), (3, 7, 8), (6, 4, 5)])
def test_growth_matches_reflection_group(d, k, N):
    g = build_ball_patch(d, k, N)
    assert growth_sequence(g, 0, N) == CoxeterTiling(d, k).vertex_bfs(N)


def test_truncated_ball():
    g = build(5, 5, 2)
    with pytest.raises(TruncatedBall):
        ball(g, 0, 3)
    with pytest.raises(TruncatedBall):
        growth_sequence(g, 0, 4)


# -- edge-set calculus -------------------------------------------------------


def test_patch_examples(g55):
    p = patch_edge_sets(g55, [0])
    assert (p.n_inside, p.n_boundary) == (0, 5)
    p = patch_edge_sets(g55, g55.faces[0])
    assert (p.n_inside, p.n_boundary, p.n_touching) == (5, 15, 20)
    # triangular lattice: degree 6, triangular faces
    g63 = build(6, 3, 3)
    p = patch_edge_sets(g63, g63.faces[0])
    assert (p.n_inside, p.n_touching, p.n_boundary) == (3, 15, 12)


def test_patch_rejects_frontier(g55):
    with pytest.raises(FrontierVertex):
        patch_edge_sets(g55, [g55.frontier_vertices()[0]])


def random_connected(g, start, size, rng, ok=None):
    ok = ok or (lambda v: g.interior[v])
    K = {start}
    cand = [w for w in g.neighbors[start] if ok(w)]
    while len(K) < size and cand:
        w = cand.pop(rng.randrange(len(cand)))
        if w in K:
            continue
        K.add(w)
        cand.extend(x for x in g.neighbors[w] if ok(x) and x not in K)
    return K


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 60), st.integers(0, 10**6))
def test_handshake_identity(size, seed):
    g = _G55
    K = random_connected(g, 0, size, random.Random(seed))
    p = patch_edge_sets(g, K)
    assert p.n_touching == p.n_inside + p.n_boundary
    assert sum(g.degree(v) for v in K) == 2 * p.n_inside + p.n_boundary
    assert p.boundary_vertices() <= p.K


_G55 = build(5, 5, 3)
_PAIR55 = DualPair(_G55)


# -- closure operators -------------------------------------------------------


def test_prime_and_hat_of_single_face(pair44):
    pr = pair44.primal
    f = pr.complete_faces()[0]
    fv = pair44.faces_as_vertices([f])
    assert pair44.prime("dual", fv) == frozenset(pr.faces[f])
    assert pair44.hat("dual", fv) == fv


def test_square_ring_hole_filled(pair44):
    pr, du = pair44.primal, pair44.dual
    ring = [f for f in pr.complete_faces() if pr.face_ring[f] == 1]
    assert len(ring) == 8
    K = pair44.faces_as_vertices(ring)
    Kh = pair44.hat("dual", K)
    assert len(Kh) == 9 and pair44.faces_as_vertices([0]) <= Kh
    before, after = patch_edge_sets(du, K).n_boundary, patch_edge_sets(du, Kh).n_boundary
    assert (before, after) == (16, 12)


def test_annulus_hole_filled():
    pr = _PAIR55.primal
    ring = [f for f in pr.complete_faces() if pr.face_ring[f] == 1]
    K = _PAIR55.faces_as_vertices(ring)
    assert _PAIR55.hat("dual", K) == K | _PAIR55.faces_as_vertices([0])


def test_prime_of_vertex_is_its_faces():
    pr = _PAIR55.primal
    assert _PAIR55.prime("primal", [0]) == _PAIR55.faces_as_vertices(pr.faces_around(0))
    assert _PAIR55.hat("primal", [0]) == frozenset([0])


def test_closure_escaping_patch():
    pair = DualPair(build(5, 5, 1))
    with pytest.raises(FrontierContact):
        pair.prime("primal", [pair.primal.frontier_vertices()[0]])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 25), st.integers(0, 10**6))
def test_hole_filling_monotone(size, seed):
    pair = _PAIR55
    du = pair.dual
    start = pair.faces_as_vertices([0])
    (s0,) = start
    deep = lambda v: du.interior[v] and all(du.interior[w] for w in du.neighbors[v])  # noqa: E731
    K = random_connected(du, s0, size, random.Random(seed), deep)
    try:
        Kh = pair.hat("dual", K)
    except FrontierContact:
        return
    assert Kh >= K
    assert patch_edge_sets(du, Kh).n_boundary <= patch_edge_sets(du, K).n_boundary
