"""Compiled vs pure-Python kernels on the workloads the package actually runs.

    python benchmarks/bench_kernels.py [--repeat 3]

Each workload is run with identical inputs on both backends; outputs are
compared for equality before timings are reported.
"""

from __future__ import annotations

import argparse
import time
from fractions import Fraction

import numpy as np

from rcplanar import kernels as K
from rcplanar.isoperimetry import _local_csr, _require_interior_ball
from rcplanar.rc import RCInstance
from rcplanar.tessellation import build_ball_patch


def _cftp_args(n_draws):
    inst = RCInstance.from_spec(5, 5, 2, "wired", Fraction(1, 2), 2)
    g = inst.chain_graph()
    tc, td = inst.thresholds()
    return (g.indptr, g.nbr, g.nbr_edge, g.eu, g.ev, tc, td, 1, 0, n_draws, 16)


def _enum_args():
    inst = RCInstance.from_spec(5, 5, 1, "weakened", Fraction(1, 2), 2, Fraction(1, 5))
    # 5 edges is too small to time; use a 3-fold disjoint union of the star
    eu = np.concatenate([inst.eu + 6 * i for i in range(3)])
    ev = np.concatenate([inst.ev + 6 * i for i in range(3)])
    cls = np.zeros(len(eu), dtype=np.int64)
    marks = np.zeros(18, dtype=np.uint8)
    marks[[6 * i + b for i in range(3) for b in inst.boundary]] = 1
    src = np.array([0], dtype=np.int64)
    tgt = marks[None, :].copy()
    alw = np.ones((1, len(eu)), dtype=np.uint8)
    return (18, eu, ev, cls, marks, src, tgt, alw, False)


def _redelmeier_args(max_size):
    g = build_ball_patch(5, 5, max_size)
    dist = _require_interior_ball(g, 0, max_size - 2)
    verts = sorted(v for v, dv in dist.items() if dv <= max_size - 1)
    indptr, nbr = _local_csr(g, verts)
    return (indptr, nbr, verts.index(0), max_size, 5, 10**9, True)


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def _time(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if K.BACKEND != "cython":
        raise SystemExit("compiled extension not available; build with pip install -e .")
    workloads = [
        ("stream_block 1000x115", "stream_block", (7, 3, 0, 1000, 115)),
        ("cftp_batch {5,5} r=2 wired, 200 draws", "cftp_batch", _cftp_args(200)),
        ("rc_enumerate 15 edges", "rc_enumerate", _enum_args()),
        ("redelmeier {5,5} sets <= 7", "redelmeier", _redelmeier_args(7)),
    ]
    print(f"{'workload':42s} {'cython [s]':>11s} {'python [s]':>11s} {'speedup':>8s}")
    for name, fn, a in workloads:
        tc, oc = _time(getattr(K.impl, fn), a, args.repeat)
        tp, op = _time(getattr(K.py, fn), a, 1)
        if not _same(oc, op):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:42s} {tc:11.4f} {tp:11.4f} {tp / tc:7.0f}x")


if __name__ == "__main__":
    main()
