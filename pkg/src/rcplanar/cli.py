"""Command-line entry point: ``rcplanar {tessellate,iso,bounds,sample,sweep}``.

Exit codes: 0 ok, 2 input error, 3 simulation quality failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import kernels
from .critical_bounds import BOUNDS_COLUMNS, bounds_report, bounds_table
from .errors import (
    BudgetExceeded,
    DomainError,
    FrontierContact,
    FrontierVertex,
    Inapplicable,
    NoCoalescence,
    NoFaces,
    SpecError,
    TruncatedBall,
)
from .isoperimetry import beta_delta_exact, brute_force_iso, peres_iterate
from .rc.exact import exact_rc
from .rc.instance import BOUNDARY_CONDITIONS, FIXTURES, RCInstance
from .rc.sampling import DEFAULT_MAX_DOUBLINGS, Estimate, estimate_event
from .tessellation import (
    DualPair,
    TessellationSpec,
    build_ball_patch,
    build_tessellation,
    dual_graph,
    graph_to_json,
)

EXIT_INPUT = 2
EXIT_QUALITY = 3

SWEEP_COLUMNS = ["d", "dcode", "radius", "bc", "p", "q", "s", "estimate", "ci_lo", "ci_hi",
                 "n", "seed"]
INPUT_ERRORS = (SpecError, DomainError, TruncatedBall, BudgetExceeded, Inapplicable, NoFaces,
                FrontierContact, FrontierVertex, ValueError, KeyError, OSError)


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def number(text: str) -> Fraction:
    """Exact number from ``"0.5"``, ``"1/2"`` or ``"3"``."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def number_list(text: str) -> list[Fraction]:
    return [number(t) for t in text.split(",") if t.strip()]


def _plain(x):
    """JSON-safe value: Fractions become floats, non-finite floats become None."""
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if hasattr(x, "item") and not isinstance(x, (str, bytes)):
        return _plain(x.item())
    return x


def dump_json(doc) -> str:
    return json.dumps(_plain(doc), indent=2, sort_keys=True, allow_nan=False) + "\n"


def cell(x) -> str:
    """CSV cell: empty for undefined, ``repr`` for floats."""
    if x is None:
        return ""
    if isinstance(x, Fraction):
        x = float(x)
    if isinstance(x, float):
        return repr(x) if math.isfinite(x) else ""
    return str(x)


def write_csv(rows, columns) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([cell(r.get(c)) for c in columns])
    return buf.getvalue()


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise InputError(f"--{n.replace('_', '-')} is required")


# ---------------------------------------------------------------------------
# tessellate


def cmd_tessellate(args) -> int:
    _need(args, "d", "codegree")
    if args.radius is not None:
        g = build_ball_patch(args.d, args.codegree, args.radius)
    else:
        g = build_tessellation(TessellationSpec(args.d, args.codegree, args.depth or 0))
    if args.dual:
        g = dual_graph(g)
    summary = {
        "spec": g.spec.as_dict(),
        "dual": bool(args.dual),
        "n_vertices": g.n_vertices,
        "n_edges": g.n_edges,
        "n_faces": g.n_faces,
        "n_complete_faces": len(g.complete_faces()),
        "n_interior_vertices": len(g.interior_vertices()),
        "euler_characteristic": g.euler_characteristic(),
    }
    if args.out:
        Path(args.out).write_text(graph_to_json(g) + "\n")
        summary["graph_json"] = args.out
    sys.stdout.write(dump_json(summary))
    return 0


# ---------------------------------------------------------------------------
# iso


def cmd_iso(args) -> int:
    _need(args, "d", "codegree")
    doc = {"iso": beta_delta_exact(args.d, args.codegree).as_dict()}
    if args.brute:
        radius = args.radius if args.radius is not None else max(args.brute - 2, 1)
        g = build_ball_patch(args.d, args.codegree, radius)
        r = brute_force_iso(g, 0, args.brute)
        doc["brute_force"] = {
            "max_size": args.brute,
            "value": str(r.value),
            "value_float": float(r.value),
            "argmin": list(r.argmin),
            "running_minimum": [str(x) for x in r.running_minimum()],
            "counts": list(r.counts),
        }
    if args.steps:
        radius = args.radius if args.radius is not None else 2 * args.steps + 1
        pair = DualPair(build_ball_patch(args.d, args.codegree, radius))
        tr = peres_iterate(pair, [0], args.steps)
        doc["iteration"] = {
            "steps": len(tr.steps) - 1,
            "truncated": tr.truncated,
            "note": tr.note,
            "a": tr.a,
            "strictly_decreasing": tr.strictly_decreasing(),
            "all_nonnegative": tr.all_nonnegative(),
            "contraction_ok": tr.contraction_ok(),
        }
        if args.trace:
            Path(args.trace).write_text(tr.to_csv())
            doc["iteration"]["trace_csv"] = args.trace
    emit(dump_json(doc), args.out)
    return 0


# ---------------------------------------------------------------------------
# bounds


def cmd_bounds(args) -> int:
    _need(args, "d", "codegree")
    qs = [float(x) for x in args.q] if args.q else []
    ps = [float(x) for x in args.p] if args.p else []
    if args.format == "csv":
        if not qs:
            raise InputError("--format csv needs a --q grid")
        emit(write_csv(bounds_table(args.d, args.codegree, qs, ps), BOUNDS_COLUMNS), args.out)
        return 0
    doc = bounds_report(args.d, args.codegree)
    if qs:
        doc["table"] = bounds_table(args.d, args.codegree, qs, ps)
    emit(dump_json(doc), args.out)
    return 0


# ---------------------------------------------------------------------------
# sample


def _parse_event(text: str | None):
    if text is None or text == "connect":
        return "connect"
    if text.startswith("edge:"):
        return ("edge", int(text[5:]))
    raise InputError(f"unknown event {text!r}; use 'connect' or 'edge:<id>'")


def make_instance(d, codegree, radius, bc, p, q, s, fixture=None) -> RCInstance:
    if fixture:
        if fixture not in FIXTURES:
            raise InputError(f"unknown fixture {fixture!r}; choose from {sorted(FIXTURES)}")
        default_bc = "wired" if fixture == "path3" else "free"
        return FIXTURES[fixture](bc or default_bc, p, q, s)
    if d is None or codegree is None or radius is None:
        raise InputError("--d, --codegree and --radius are required without --fixture")
    return RCInstance.from_spec(d, codegree, radius, bc or "free", p, q, s)


def measure(inst: RCInstance, event, mode: str, n_samples: int, seed: int, workers: int = 1,
            max_doublings: int = DEFAULT_MAX_DOUBLINGS) -> Estimate:
    """Exact value when enumeration is requested (or cheap under ``auto``), else CFTP."""
    if mode not in ("auto", "exact", "sample"):
        raise InputError(f"unknown mode {mode!r}")
    if mode == "exact" or (mode == "auto" and inst.n_edges <= 20 and not inst.is_degenerate()):
        r = exact_rc(inst)
        v = r.edge_marginals[event[1]] if isinstance(event, tuple) else r.events["connect"]
        v = float(v)
        return Estimate(v, v, v, 0, 0, seed, "exact")
    return estimate_event(inst, n_samples, seed, event, workers, max_doublings)


def cmd_sample(args) -> int:
    p = args.p[0] if args.p else Fraction(1, 2)
    q = args.q[0] if args.q else Fraction(1)
    s = args.s[0] if args.s else None
    if len(args.p or []) > 1 or len(args.q or []) > 1 or len(args.s or []) > 1:
        raise InputError("sample takes single values of --p, --q and --s; use sweep for grids")
    inst = make_instance(args.d, args.codegree, args.radius, args.bc, p, q, s, args.fixture)
    event = _parse_event(args.event)
    est = measure(inst, event, args.mode, args.samples, args.seed, args.workers,
                  args.max_doublings)
    doc = {"instance": inst.describe(), "event": args.event or "connect", **est.as_dict()}
    emit(dump_json(doc), args.out)
    return 0


# ---------------------------------------------------------------------------
# sweep


def load_sweep_config(path: str) -> dict:
    try:
        cfg = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(cfg, dict):
        raise InputError("sweep config must be a JSON object")
    known = {"d", "codegree", "radii", "bc", "p", "q", "s", "samples", "seed", "mode", "event",
             "fixture", "max_fail_fraction", "max_doublings", "workers", "out"}
    extra = set(cfg) - known
    if extra:
        raise InputError(f"unknown sweep config keys: {sorted(extra)}")
    fixture = cfg.get("fixture")
    if not fixture:
        for key in ("d", "codegree", "radii"):
            if key not in cfg:
                raise InputError(f"sweep config needs {key!r}")
        TessellationSpec(cfg["d"], cfg["codegree"])
    cfg.setdefault("radii", [None])
    bcs = cfg.get("bc", ["free"])
    cfg["bc"] = [bcs] if isinstance(bcs, str) else list(bcs)
    for key in ("radii", "bc", "p", "q"):
        if key not in cfg or not isinstance(cfg[key], list) or not cfg[key]:
            raise InputError(f"sweep grid {key!r} must be a nonempty list")
    for b in cfg["bc"]:
        if b not in BOUNDARY_CONDITIONS:
            raise InputError(f"unknown boundary condition {b!r}")
    if any(b in ("weakened", "apex") for b in cfg["bc"]) and not cfg.get("s"):
        raise InputError("weakened/apex sweeps need a nonempty 's' grid")
    for key in ("p", "q", "s"):
        cfg[key] = [Fraction(str(x)) for x in cfg.get(key) or []]
    for r in cfg["radii"]:
        if r is not None and (not isinstance(r, int) or r < 1):
            raise InputError(f"radius must be a positive integer, got {r!r}")
    cfg.setdefault("samples", 1000)
    cfg.setdefault("seed", 0)
    cfg.setdefault("mode", "auto")
    cfg.setdefault("max_fail_fraction", 0.0)
    cfg.setdefault("max_doublings", DEFAULT_MAX_DOUBLINGS)
    cfg.setdefault("workers", 1)
    return cfg


def sweep_grid(cfg: dict) -> list[dict]:
    grid = []
    for r in cfg["radii"]:
        for bc in cfg["bc"]:
            for p in cfg["p"]:
                for q in cfg["q"]:
                    for s in (cfg["s"] if bc in ("weakened", "apex") else [None]):
                        i = len(grid)
                        seed = kernels.mix64(int(cfg["seed"]) ^ i) & ((1 << 63) - 1)
                        grid.append({"index": i, "radius": r, "bc": bc, "p": p, "q": q, "s": s,
                                     "seed": seed})
    return grid


def _sweep_row(cfg: dict, pt: dict) -> tuple[dict, bool]:
    inst = make_instance(cfg.get("d"), cfg.get("codegree"), pt["radius"], pt["bc"], pt["p"],
                         pt["q"], pt["s"], cfg.get("fixture"))
    row = {"d": inst.meta.get("d"), "dcode": inst.meta.get("codegree"), "radius": pt["radius"],
           "bc": pt["bc"], "p": pt["p"], "q": pt["q"], "s": pt["s"], "seed": pt["seed"]}
    try:
        est = measure(inst, _parse_event(cfg.get("event")), cfg["mode"], int(cfg["samples"]),
                      pt["seed"], 1, int(cfg["max_doublings"]))
    except NoCoalescence:
        return row, False
    row.update(estimate=est.estimate, ci_lo=est.ci_lo, ci_hi=est.ci_hi, n=est.n)
    return row, True


def _resume_point(path: Path, grid: list[dict], cfg: dict) -> int:
    """Number of complete rows already in ``path`` that match the grid."""
    if not path.exists():
        return 0
    text = path.read_text()
    if not text:
        return 0
    keep = text[: text.rfind("\n") + 1]  # drop a partially written last line
    lines = keep.splitlines()
    header = ",".join(SWEEP_COLUMNS)
    if not lines or lines[0] != header:
        raise InputError(f"{path} exists with a different header; refusing to overwrite")
    done = lines[1:]
    if len(done) > len(grid):
        raise InputError(f"{path} has more rows than the sweep grid")
    for line, pt in zip(done, grid):
        vals = next(csv.reader([line]))
        if vals[3] != pt["bc"] or vals[11] != str(pt["seed"]) or vals[4] != cell(pt["p"]) \
                or vals[5] != cell(pt["q"]) or vals[6] != cell(pt["s"]):
            raise InputError(f"{path} does not match this sweep config; refusing to resume")
    if len(keep) != len(text):
        path.write_text(keep)
    return len(done)


def cmd_sweep(args) -> int:
    cfg = load_sweep_config(args.config)
    out = args.out or cfg.get("out")
    if not out:
        raise InputError("sweep needs --out or an 'out' key in the config")
    workers = args.workers if args.workers is not None else int(cfg["workers"])
    grid = sweep_grid(cfg)
    path = Path(out)
    start = _resume_point(path, grid, cfg)
    failures = 0
    # earlier rows count toward the failure fraction too
    if start:
        for line in path.read_text().splitlines()[1:]:
            if next(csv.reader([line]))[7] == "":
                failures += 1
    mode = "a" if start else "w"
    with open(path, mode, newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if not start:
            w.writerow(SWEEP_COLUMNS)
            fh.flush()
        todo = grid[start:]
        with ThreadPoolExecutor(max(1, workers)) as ex:
            for row, ok in ex.map(lambda pt: _sweep_row(cfg, pt), todo):
                failures += not ok
                w.writerow([cell(row.get(c)) for c in SWEEP_COLUMNS])
                fh.flush()
    frac = failures / len(grid)
    if frac > float(cfg["max_fail_fraction"]):
        sys.stderr.write(f"sweep: {failures}/{len(grid)} grid points did not coalesce\n")
        return EXIT_QUALITY
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rcplanar", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def spec_args(p, radius_help="ball radius about vertex 0"):
        p.add_argument("--d", type=int, help="vertex degree")
        p.add_argument("--codegree", type=int, help="face size")
        p.add_argument("--radius", type=int, help=radius_help)
        p.add_argument("--out", help="output file (default stdout)")

    p = sub.add_parser("tessellate", help="build a patch; summary JSON, graph JSON to --out")
    spec_args(p, "build until this ball about vertex 0 is interior")
    p.add_argument("--depth", type=int, help="number of face rings")
    p.add_argument("--dual", action="store_true", help="emit the planar dual instead")
    p.set_defaults(func=cmd_tessellate)

    p = sub.add_parser("iso", help="isoperimetric report as JSON")
    spec_args(p, "patch radius for --brute/--steps")
    p.add_argument("--brute", type=int, help="exhaustive minimum over sets up to this size")
    p.add_argument("--steps", type=int, help="closure iteration steps from vertex 0")
    p.add_argument("--trace", help="CSV file for the iteration trace")
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("bounds", help="threshold formulas, JSON report or CSV table")
    spec_args(p)
    p.add_argument("--p", type=number_list, help="comma-separated p grid")
    p.add_argument("--q", type=number_list, help="comma-separated q grid")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sample", help="connectivity or edge probability of one instance")
    spec_args(p)
    p.add_argument("--bc", choices=BOUNDARY_CONDITIONS)
    p.add_argument("--p", type=number_list)
    p.add_argument("--q", type=number_list)
    p.add_argument("--s", type=number_list)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["auto", "exact", "sample"], default="sample")
    p.add_argument("--event", help="'connect' (default) or 'edge:<id>'")
    p.add_argument("--fixture", help=f"small graph instead of a ball: {sorted(FIXTURES)}")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--max-doublings", type=int, default=DEFAULT_MAX_DOUBLINGS)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("sweep", help="grid of sample runs from a JSON config, CSV out")
    p.add_argument("config", help="sweep config (JSON)")
    p.add_argument("--out", help="CSV path (overrides the config's 'out')")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NoCoalescence as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_QUALITY
    except (InputError, *INPUT_ERRORS) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
