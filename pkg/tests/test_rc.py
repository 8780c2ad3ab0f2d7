import math
import random
import zlib
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from oracles import rc_bruteforce, wilson
from rc_corpus import corpus, grid3, k4
from rcplanar import _pykernels, kernels
from rcplanar.errors import (
    BadSpin,
    BudgetExceeded,
    DomainError,
    DominationViolated,
    NoCoalescence,
    TruncatedBall,
)
from rcplanar.rc import (
    EdgeConfig,
    Event,
    RCInstance,
    config_kappa,
    coupled_chains,
    domination_check,
    estimate_connectivity,
    estimate_event,
    exact_rc,
    heat_bath_step,
    path3,
    potts_coloring,
    robust_harness,
    run_chain,
    sample_exact,
    triangle,
    wilson_interval,
)
from rcplanar.rc.harness import apex_bernoulli_value
from rcplanar.rc.sampling import event_hits
from rcplanar.tessellation import build_ball_patch

CORPUS = corpus()


# -- instances -----------------------------------------------------------------


def test_ball_instances():
    star = RCInstance.from_spec(5, 5, 1, "wired", 0.5, 2)
    assert star.n_vertices == 6 and star.n_edges == 5
    assert star.boundary == frozenset(range(1, 6)) and star.origin == 0
    r2 = RCInstance.from_spec(5, 5, 2, "free")
    assert r2.n_edges == 30 and len(r2.boundary) == 20
    ap = RCInstance.from_spec(5, 5, 1, "apex", 0.5, 2, 0.1)
    assert ap.n_vertices == 7 and ap.n_edges == 11 and ap.base_edges == 5
    with pytest.raises(TruncatedBall):
        RCInstance.from_ball(build_ball_patch(5, 5, 1), 0, 2)


def test_instance_validation():
    with pytest.raises(DomainError):
        triangle("wired", q=F(1, 2))
    with pytest.raises(DomainError):
        triangle("apex")
    with pytest.raises(DomainError):
        triangle("bogus")
    with pytest.raises(DomainError):
        RCInstance.build(3, [(0, 1)], "wired", 0.5, 2)
    w = RCInstance.from_spec(5, 5, 2, "weakened", 0.6, 2, 0.1)
    for (u, v), pe in zip(w.edges, w.p_edge):
        assert pe == (0.1 if (u in w.boundary or v in w.boundary) else 0.6)


# -- exact enumeration ---------------------------------------------------------


def test_exact_examples():
    r = exact_rc(triangle("free", F(1, 2), 2), distribution=True)
    assert r.edge_marginals == (F(5, 14),) * 3
    assert sum(r.distribution.values()) == 1
    r = exact_rc(path3("wired", F(1, 2), 2), distribution=True)
    assert r.edge_marginals[0] == F(2, 5)
    assert sum(r.distribution.values()) == 1
    star = RCInstance.from_spec(5, 5, 1, "wired", F(1, 2), 2)
    assert exact_rc(star).events["connect"] == F(31, 33)


def test_exact_q1_is_bernoulli():
    for inst in (grid3("free", F(2, 7), 1), k4("wired", F(3, 5), 1)):
        r = exact_rc(inst)
        assert all(x == inst.p for x in r.edge_marginals)


@pytest.mark.parametrize("name,inst", CORPUS, ids=[n for n, _ in CORPUS])
def test_exact_matches_bruteforce(name, inst):
    if inst.n_edges > 12:
        pytest.skip("brute force oracle kept to 12 edges")
    r = exact_rc(inst, distribution=True)
    Z, weights = rc_bruteforce(inst.n_vertices, list(inst.edges),
                               [F(x) for x in inst.p_edge], F(inst.q), inst.marks)
    assert r.Z == Z
    for bits, w in weights.items():
        mask = sum(b << e for e, b in enumerate(bits))
        assert r.distribution[mask] == w / Z
    assert sum(r.distribution.values()) == 1


def test_exact_limits():
    big = RCInstance.from_spec(5, 5, 2, "free")
    with pytest.raises(BudgetExceeded):
        exact_rc(big)
    mixed = RCInstance.build(3, [(0, 1), (1, 2), (0, 2)], "free", 0.5, 2)
    object.__setattr__(mixed, "p_edge", (0.1, 0.2, 0.3))
    with pytest.raises(DomainError):
        exact_rc(mixed)


def test_wired_equals_contraction():
    # merging the boundary into one marked vertex leaves the law unchanged
    for inst in (grid3("wired", F(3, 5), 3), k4("wired", F(1, 3), 2), path3("wired", F(1, 2), 5)):
        cg = inst.chain_graph()
        contracted = RCInstance.build(cg.n_vertices, zip(cg.eu, cg.ev), "wired", inst.p, inst.q,
                                      boundary=[cg.super_node],
                                      origin=int(cg.vertex_map[inst.origin]))
        a, b = exact_rc(inst), exact_rc(contracted)
        assert a.edge_marginals == b.edge_marginals
        assert a.events["connect"] == b.events["connect"]


def test_apex_s0_is_free():
    base = RCInstance.from_spec(5, 5, 1, "free", F(1, 2), 3)
    a = exact_rc(base.with_params(bc="apex", s=0))
    b = exact_rc(base)
    assert a.events["connect"] == b.events["connect"]
    assert a.edge_marginals[: base.n_edges] == b.edge_marginals
    assert a.edge_marginals[base.n_edges:] == (0,) * base.n_vertices


def test_weakened_s0_is_free_inside():
    # inner graph {0,1,2,3}; each of 1,2,3 has a pendant boundary vertex
    inner = [(0, 1), (0, 2), (0, 3), (1, 2)]
    edges = inner + [(1, 4), (2, 5), (3, 6)]
    w = RCInstance.build(7, edges, "weakened", F(2, 5), 3, 0, (4, 5, 6), 0)
    free = RCInstance.build(4, inner, "free", F(2, 5), 3, origin=0)
    a = exact_rc(w, [Event("c", 0, frozenset({1}))])
    b = exact_rc(free, [Event("c", 0, frozenset({1}))])
    assert a.edge_marginals[:4] == b.edge_marginals
    assert a.edge_marginals[4:] == (0, 0, 0)
    assert a.events["c"] == b.events["c"]


@pytest.mark.parametrize("q", [1, 2, 8])
def test_apex_s1_bernoulli(q):
    inst = RCInstance.from_spec(5, 5, 1, "apex", F(1, 2), q, 1)
    assert exact_rc(inst).events["connect"] == apex_bernoulli_value(inst) == F(31, 32)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32), st.floats(0.05, 0.95))
def test_cluster_closing_identity(seed, density):
    inst = RCInstance.from_spec(5, 5, 2, "free")
    rng = random.Random(seed)
    bits = [1 if rng.random() < density else 0 for _ in range(inst.n_edges)]
    # component of the origin
    comp = {inst.origin}
    grew = True
    while grew:
        grew = False
        for e, (u, v) in enumerate(inst.edges):
            if bits[e] and (u in comp) != (v in comp):
                comp |= {u, v}
                grew = True
    closed = [0 if (u in comp and v in comp) else b for b, (u, v) in zip(bits, inst.edges)]
    assert config_kappa(inst, closed) == config_kappa(inst, bits) + len(comp) - 1


# -- heat bath -----------------------------------------------------------------


def test_heat_bath_step_branches():
    inst = triangle("free", 0.5, 2)
    c = EdgeConfig(inst, [0, 1, 1])  # 0 and 1 joined through vertex 2
    assert heat_bath_step(c, 0, 0.49).state[0] == 1
    c = EdgeConfig(inst, [0, 1, 1])
    assert heat_bath_step(c, 0, 0.51).state[0] == 0
    c = EdgeConfig(inst, [0, 0, 0])  # disconnected: threshold 1/3
    assert heat_bath_step(c, 0, 0.33).state[0] == 1
    c = EdgeConfig(inst, [0, 0, 0])
    assert heat_bath_step(c, 0, 0.34).state[0] == 0
    one = triangle("free", 0.5, 1)
    for st0 in ([0, 0, 0], [0, 1, 1]):
        assert heat_bath_step(EdgeConfig(one, st0), 0, 0.49).state[0] == 1
        assert heat_bath_step(EdgeConfig(one, st0), 0, 0.51).state[0] == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.sampled_from(["free", "wired"]))
def test_cached_kappa_matches_recount(seed, bc):
    inst = grid3(bc, 0.5, 2)
    c = EdgeConfig(inst)
    rng = random.Random(seed)
    for _ in range(200):
        heat_bath_step(c, rng.randrange(inst.n_edges), rng.random())
        assert c.kappa == c.recount()
        assert c.kappa == config_kappa(inst, c.state)


def test_kernel_sweep_matches_python_steps():
    inst = grid3("wired", 0.6, 3)
    U = np.random.default_rng(0).random((20, inst.n_edges))
    g = inst.chain_graph()
    tc, td = inst.thresholds()
    st_k = np.zeros(inst.n_edges, dtype=np.uint8)
    kernels.heat_bath_sweeps(g.indptr, g.nbr, g.nbr_edge, g.eu, g.ev, tc, td, st_k, U)
    c = EdgeConfig(inst)
    for row in U:
        for e in range(inst.n_edges):
            heat_bath_step(c, e, row[e])
    assert np.array_equal(st_k, c.state)


@pytest.mark.parametrize("inst", [triangle("free", 0.5, 2), path3("wired", 0.5, 8),
                                  k4("wired", 0.4, 1.5)], ids=["triangle", "path", "k4"])
def test_heat_bath_chi_square(inst):
    # pre-registered: 200000 sweeps, thinned by 5, chi-square at the 0.001 level
    _, rec = run_chain(inst, 200_000, seed=11, record_every=5)
    masks = rec @ (1 << np.arange(inst.n_edges))
    obs = np.bincount(masks, minlength=1 << inst.n_edges)
    dist = exact_rc(inst, distribution=True).distribution
    exp = np.array([float(dist[m]) for m in range(1 << inst.n_edges)]) * len(rec)
    assert stats.chisquare(obs, exp).pvalue > 0.001


def test_run_chain_deterministic_and_blocking():
    inst = grid3("free", 0.5, 2)
    a = run_chain(inst, 1000, seed=3)
    b = run_chain(inst, 1000, seed=3)
    c = run_chain(inst, 600, seed=3)
    c = run_chain(inst, 400, seed=3, state=c, t0=600)
    assert np.array_equal(a, b) and np.array_equal(a, c)


# -- coupling from the past ----------------------------------------------------


def test_q1_draw_is_bernoulli_from_stream():
    inst = grid3("free", 0.3, 1)
    b = sample_exact(inst, 50, seed=9)
    assert (b.horizons == 1).all()
    for i in range(50):
        u = kernels.stream_uniforms(9, i, 1, inst.n_edges)
        assert np.array_equal(b.configs[i], (u < 0.3).astype(np.uint8))


def test_sampler_deterministic_and_worker_independent():
    inst = grid3("wired", 0.7, 8)
    a = sample_exact(inst, 3000, seed=5)
    b = sample_exact(inst, 3000, seed=5, workers=4)
    assert np.array_equal(a.configs, b.configs) and np.array_equal(a.horizons, b.horizons)
    c = sample_exact(inst, 1000, seed=5, first_stream=2000)
    assert np.array_equal(a.configs[2000:], c.configs)


@pytest.mark.parametrize("name,inst", CORPUS, ids=[n for n, _ in CORPUS])
def test_sampler_marginals(name, inst):
    n = 20_000
    b = sample_exact(inst, n, seed=zlib.crc32(name.encode()))
    assert b.violations == 0
    ex = exact_rc(inst)
    pairs = list(zip(b.configs.mean(axis=0), ex.edge_floats()))
    if "connect" in ex.events:
        pairs.append((event_hits(inst, b.configs).mean(), float(ex.events["connect"])))
    for est, p in pairs:
        assert abs(est - p) <= 4 * math.sqrt(p * (1 - p) / n) + 1e-12


def test_sampler_backends_agree(monkeypatch):
    inst = grid3("wired", 0.6, 2)
    a = sample_exact(inst, 200, seed=1)
    monkeypatch.setattr(kernels, "cftp_batch", _pykernels.cftp_batch)
    b = sample_exact(inst, 200, seed=1)
    assert np.array_equal(a.configs, b.configs) and np.array_equal(a.horizons, b.horizons)


def test_no_coalescence():
    inst = RCInstance.from_spec(5, 5, 2, "wired", 0.8, 32)
    with pytest.raises(NoCoalescence):
        sample_exact(inst, 5, seed=0, max_doublings=0)


def test_rng_uniformity_across_seeds():
    zs = []
    for seed in range(40):
        u = np.array([kernels.stream_uniforms(seed, s, 1, 8) for s in range(5000)])
        zs.extend(((u < 0.3).mean(0) - 0.3) / math.sqrt(0.21 / 5000))
    assert stats.kstest(zs, "norm").pvalue > 0.001


# -- estimates -----------------------------------------------------------------


def test_estimate_degenerate():
    for bc in ("free", "wired"):
        e0 = estimate_connectivity(RCInstance.from_spec(5, 5, 2, bc, 0, 2), 100, seed=1)
        assert (e0.estimate, e0.ci_lo, e0.ci_hi, e0.method) == (0, 0, 0, "degenerate")
        e1 = estimate_connectivity(RCInstance.from_spec(5, 5, 2, bc, 1, 2), 100, seed=1)
        assert (e1.estimate, e1.ci_lo, e1.ci_hi) == (1, 1, 1)


def test_estimate_star():
    inst = RCInstance.from_spec(5, 5, 1, "wired", 0.5, 2)
    e = estimate_connectivity(inst, 40_000, seed=2)
    assert abs(e.estimate - 31 / 33) <= 3 * math.sqrt((31 / 33) * (2 / 33) / e.n)
    assert e.ci_lo < e.estimate < e.ci_hi and e.n == 40_000 and e.seed == 2


def test_estimate_edge_event():
    e = estimate_event(triangle("free", 0.5, 2), 30_000, seed=4, event=("edge", 1))
    assert abs(e.estimate - 5 / 14) <= 3 * math.sqrt(5 / 14 * 9 / 14 / 30_000)


def test_wilson_matches_oracle():
    for k, n in [(0, 10), (3, 10), (10, 10), (517, 1000)]:
        assert wilson_interval(k, n) == pytest.approx(wilson(k, n))


# -- Potts ---------------------------------------------------------------------


def test_potts_all_open_free():
    inst = grid3("free", 0.5, 3)
    res = potts_coloring(inst, np.ones(inst.n_edges), seed=1)
    assert len(set(res.spins)) == 1 and 1 <= res.spins[0] <= 3
    assert res.beta == pytest.approx(-0.5 * math.log(0.5))


def test_potts_p0_uniform():
    inst = grid3("free", 0.0, 4)
    spins = np.concatenate([potts_coloring(inst, np.zeros(inst.n_edges), seed=s).spins
                            for s in range(2000)])
    obs = np.bincount(spins, minlength=5)[1:]
    assert stats.chisquare(obs).pvalue > 0.001


def test_potts_wired_path():
    inst = path3("wired", F(1, 2), 3)
    ex = exact_rc(inst)
    p_conn = float(ex.events["connect"])
    target = p_conn + (1 - p_conn) / 3
    b = sample_exact(inst, 30_000, seed=8)
    hits = 0
    for i, cfg in enumerate(b.configs):
        s = potts_coloring(inst, cfg, seed=i, r=2).spins
        assert s[0] == s[2] == 2
        hits += s[1] == 2
    assert abs(hits / 30_000 - target) <= 3 * math.sqrt(target * (1 - target) / 30_000)


def test_potts_errors():
    with pytest.raises(BadSpin):
        potts_coloring(path3("wired", 0.5, 3), [0, 0], r=4)
    with pytest.raises(DomainError):
        potts_coloring(path3("wired", 0.5, F(3, 2)), [0, 0])


# -- domination ----------------------------------------------------------------


@pytest.mark.parametrize("name,inst", [c for c in CORPUS if c[1].bc in ("free", "wired")],
                         ids=[n for n, i in CORPUS if i.bc in ("free", "wired")])
def test_free_below_wired_exact(name, inst):
    rep = domination_check(inst.with_params(bc="free"), inst.with_params(bc="wired"))
    assert rep.ok


def test_triangle_domination_example():
    rep = domination_check(triangle("free"), triangle("wired"))
    assert rep.pairs[0] == ("edge 0", F(5, 14), F(1, 2))


def test_q1_free_equals_wired():
    for inst in (grid3("free", F(2, 5), 1), k4("free", F(1, 2), 1)):
        a = exact_rc(inst.with_params(bc="free")).edge_marginals
        b = exact_rc(inst.with_params(bc="wired")).edge_marginals
        assert a == b


def test_monotone_in_p():
    grid = [F(1, 10), F(3, 10), F(1, 2), F(7, 10), F(9, 10)]
    for bc in ("free", "wired"):
        insts = [grid3(bc, p, 2) for p in grid]
        for a, b in zip(insts, insts[1:]):
            domination_check(a, b)


def test_domination_violation_raises():
    with pytest.raises(DominationViolated):
        domination_check(triangle("wired"), triangle("free"))
    rep = domination_check(triangle("wired"), triangle("free"), strict=False)
    assert not rep.ok


@pytest.mark.parametrize("lo,hi", [
    (grid3("free", 0.5, 2), grid3("wired", 0.5, 2)),
    (grid3("wired", 0.4, 2), grid3("wired", 0.6, 2)),
    (grid3("free", 0.5, 4), grid3("free", 0.5, 2)),
])
def test_coupled_chains_stay_ordered(lo, hi):
    a, b, viol = coupled_chains(lo, hi, 3000, seed=1)
    assert viol == 0 and (a <= b).all()


def test_coupled_chains_reject_non_monotone():
    with pytest.raises(DomainError):
        coupled_chains(grid3("wired", 0.6, 2), grid3("free", 0.5, 2), 10, seed=1)


# -- harness -------------------------------------------------------------------


def test_harness_exploratory_table():
    rows = robust_harness(5, 5, [1, 2], 0.8, 32, 0.05, 2000, seed=1)
    assert [r.radius for r in rows] == [1, 2]
    assert rows[0].apex.method == "exact" and rows[1].apex.method == "cftp"
    for r in rows:
        d = r.as_dict()
        assert {"apex_estimate", "weakened_ci_lo", "wired_n"} <= set(d)


def test_apex_exact_vs_sampled():
    inst = RCInstance.from_spec(5, 5, 1, "apex", F(1, 2), 8, F(1, 5))
    ex = float(exact_rc(inst).events["connect"])
    e = estimate_connectivity(inst, 30_000, seed=6)
    assert abs(e.estimate - ex) <= 3 * math.sqrt(ex * (1 - ex) / e.n)


def test_custom_event():
    inst = path3("wired", F(1, 2), 2)
    r = exact_rc(inst, [Event("mid", 1, frozenset({0, 2}))])
    assert r.events["mid"] == F(3, 5)
    cfg = np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=np.uint8)
    assert list(event_hits(inst, cfg, Event("mid", 1, frozenset({0, 2})))) == [0, 1, 1, 1]
