"""Command-line entry point: ``nullknots <subcommand> ...``.

Exit codes: 0 pass, 1 verification failure, 2 configuration error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from dataclasses import field as dc_field

import numpy as np

from . import formats
from .bateman import KnotParams, eval_hopfion, eval_knotted_field, eval_plane_wave
from .conserved import QuadratureSpec, conserved_set
from .errors import InvalidKnotParams, NullKnotsError
from .geometry import core_component_count, core_curve, core_curve_point, core_specs, psi_extremes
from .spacetime import RSValue
from .topology import gauss_linking
from .tracer import Termination, TraceConfig, trace
from .verify import CONTROLS, DEFAULT_KP, TIMES, aggregate, generic_seeds, run_all, sample_points

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3
FORMATS = ("csv", "jsonl", "vtk-ascii")
# flags whose values may start with '-' (negative ranges and coordinates)
_SIGNED_VALUE_FLAGS = ("--grid", "--seed-point")
_SAMPLE_CHUNK = 1 << 16


class ConfigError(Exception):
    """Invalid flag combination; the message names the flag."""


@dataclass
class RunConfig:
    """Validated flags; built before any computation starts."""

    subcommand: str
    kp: KnotParams | None = None
    t: float = 0.0
    field: str = "B"
    seeds: np.ndarray | None = None
    grid: tuple | None = None
    out: str | None = None
    fmt: str = "csv"
    tolerances: dict = dc_field(default_factory=dict)
    kp_list: list = dc_field(default_factory=list)
    times: tuple = ()


# -- parsing ---------------------------------------------------------------------


def _grid(text):
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise ConfigError(f"--grid expects a:b:n, got {text!r}") from None
    if n < 1:
        raise ConfigError(f"--grid needs at least one node per axis, got n={n}")
    if n > 1 and not b > a:
        raise ConfigError(f"--grid needs a < b, got {text!r}")
    if not (np.isfinite(a) and np.isfinite(b)):
        raise ConfigError("--grid bounds must be finite")
    return a, b, n


def _point(text):
    try:
        v = [float(s) for s in text.split(",")]
    except ValueError:
        raise ConfigError(f"--seed-point expects x,y,z, got {text!r}") from None
    if len(v) != 3 or not all(np.isfinite(v)):
        raise ConfigError(f"--seed-point expects three finite numbers, got {text!r}")
    return v


def _kp_pair(text):
    try:
        p, q = (int(s) for s in text.split(","))
    except ValueError:
        raise ConfigError(f"--kp expects p,q, got {text!r}") from None
    return _knot(p, q, "--kp")


def _knot(p, q, flag="--p/--q"):
    try:
        return KnotParams(p, q)
    except InvalidKnotParams as exc:
        raise ConfigError(f"{flag}: {exc}") from None


def _float_list(text, flag):
    try:
        return tuple(float(s) for s in text.split(","))
    except ValueError:
        raise ConfigError(f"{flag} expects comma-separated numbers, got {text!r}") from None


def _positive(args, names):
    out = {}
    for name in names:
        v = getattr(args, name)
        if v is None:
            continue
        if not v > 0:
            raise ConfigError(f"--{name.replace('_', '-')} must be positive")
        out[name] = v
    return out


def build_parser():
    ap = argparse.ArgumentParser(prog="nullknots", description="Knotted null electromagnetic fields.")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def knot_flags(sp):
        sp.add_argument("--p", type=int, default=2)
        sp.add_argument("--q", type=int, default=3)

    sp = sub.add_parser("sample", help="field values on a cubic lattice")
    knot_flags(sp)
    sp.add_argument("--construction", choices=("knotted", "hopfion", "plane-wave"), default="knotted")
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("--grid", required=True, help="a:b:n, applied to x, y and z")
    sp.add_argument("--out", help="output path (default: stdout)")
    sp.add_argument("--format", dest="fmt", choices=FORMATS, default="csv")

    sp = sub.add_parser("trace", help="trace E, B or Poynting lines from seeds")
    knot_flags(sp)
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("--field", choices=("E", "B", "S"), default="B")
    sp.add_argument("--seed-point", action="append", default=[], help="x,y,z (repeatable)")
    sp.add_argument("--seeds", help="CSV file of x,y,z rows")
    sp.add_argument("--random", type=int, default=0, help="add N random seeds on generic tori")
    sp.add_argument("--core-seeds", action="store_true", help="add one seed on each core component (t = 0 only)")
    sp.add_argument("--rng-seed", type=int, default=0)
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--tag", default="line")
    sp.add_argument("--format", dest="fmt", choices=FORMATS, default="csv")
    sp.add_argument("--rel-tol", type=float)
    sp.add_argument("--abs-tol", type=float)
    sp.add_argument("--max-arc-length", type=float)
    sp.add_argument("--closure-eps", type=float)

    sp = sub.add_parser("core", help="core curves K^+ and K^- of the (p, q) field")
    knot_flags(sp)
    sp.add_argument("--n", type=int, default=1024)
    sp.add_argument("--field", choices=("E", "B"), default="B")
    sp.add_argument("--out-dir", default=".")
    sp.add_argument("--tag", default="core")
    sp.add_argument("--format", dest="fmt", choices=FORMATS, default="csv")

    sp = sub.add_parser("invariants", help="energy, momentum, angular momentum, helicities")
    knot_flags(sp)
    sp.add_argument("--t", type=float, default=0.0)
    sp.add_argument("--radius", type=float, default=QuadratureSpec.R)
    sp.add_argument("--n-r", type=int, default=QuadratureSpec.n_r)
    sp.add_argument("--n-theta", type=int, default=QuadratureSpec.n_theta)
    sp.add_argument("--n-phi", type=int, default=QuadratureSpec.n_phi)
    sp.add_argument("--out", help="output path (default: stdout)")

    sp = sub.add_parser("verify", help="run the verification battery")
    sp.add_argument("--kp", action="append", default=[], help="p,q (repeatable; default: the standard set)")
    sp.add_argument("--t", help="comma-separated sample times")
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--inject-fault", action="append", default=[], choices=CONTROLS, metavar="CHECK")
    sp.add_argument("--no-self-test", action="store_true", help="skip the negative-control pass")
    sp.add_argument("--out", help="output path (default: stdout)")
    return ap


def _rejoin_signed(argv):
    """Turn ``--grid -3:3:8`` into ``--grid=-3:3:8`` so argparse accepts it."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a in _SIGNED_VALUE_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


# -- subcommands -------------------------------------------------------------------


def _emit(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        formats.atomic_write(path, text)


def _field_fn(construction, kp):
    if construction == "hopfion":
        return lambda t, x: eval_hopfion(t, x).F
    if construction == "plane-wave":
        return lambda t, x: eval_plane_wave(t, x).F
    return lambda t, x: eval_knotted_field(kp, t, x).F


def run_config(args) -> RunConfig:
    sc = args.subcommand
    cfg = RunConfig(sc, out=getattr(args, "out", None), fmt=getattr(args, "fmt", "csv"))
    if sc != "verify":
        cfg.kp = _knot(args.p, args.q)
        cfg.t = float(getattr(args, "t", 0.0))
        if not np.isfinite(cfg.t):
            raise ConfigError("--t must be finite")
        cfg.field = getattr(args, "field", "B")
    if sc == "sample":
        if cfg.fmt != "csv":
            raise ConfigError("--format: sample supports csv only")
        cfg.grid = _grid(args.grid)
    elif sc == "trace":
        cfg.tolerances = _positive(args, ("rel_tol", "abs_tol", "max_arc_length", "closure_eps"))
        cfg.seeds = _trace_seeds(args, cfg.kp, cfg.t)
    elif sc == "core":
        if args.n < 3:
            raise ConfigError("--n must be at least 3")
    elif sc == "invariants":
        try:
            QuadratureSpec(args.radius, args.n_r, args.n_theta, args.n_phi)
        except ValueError as exc:
            raise ConfigError(f"--radius/--n-r/--n-theta/--n-phi: {exc}") from None
    elif sc == "verify":
        cfg.kp_list = [_kp_pair(s) for s in args.kp] or [KnotParams(*kp) for kp in DEFAULT_KP]
        cfg.times = _float_list(args.t, "--t") if args.t else TIMES
        if args.samples < 1:
            raise ConfigError("--samples must be positive")
    return cfg


def cmd_sample(cfg, args):
    kp = cfg.kp
    a, b, n = cfg.grid
    ax = np.linspace(a, b, n)
    X, Y, Z = np.meshgrid(ax, ax, ax, indexing="ij")
    pts = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=-1)
    fn = _field_fn(args.construction, kp)
    rows = np.empty((len(pts), len(formats.SAMPLE_HEADER)))
    for i in range(0, len(pts), _SAMPLE_CHUNK):
        x = pts[i : i + _SAMPLE_CHUNK]
        v = RSValue(fn(args.t, x))
        rows[i : i + len(x)] = np.column_stack([np.full(len(x), args.t), x, v.E, v.B, v.S, v.u])
    _emit(args.out, formats.sample_csv(rows))
    return EXIT_OK


def _trace_seeds(args, kp, t):
    seeds = [_point(s) for s in args.seed_point]
    if args.seeds:
        try:
            seeds.extend(formats.read_seeds(args.seeds).tolist())
        except ValueError as exc:
            raise ConfigError(f"--seeds: {exc}") from None
    if args.random < 0:
        raise ConfigError("--random must be non-negative")
    if args.random:
        rng = np.random.default_rng(args.rng_seed)
        if kp.p == 1 and kp.q == 1:
            extra = sample_points(args.random, rng, r_inner=2.0, far_fraction=0.0)
        else:
            extra = generic_seeds(kp, args.random, rng, t)
        seeds.extend(extra.tolist())
    if args.core_seeds:
        if t != 0.0:
            raise ConfigError("--core-seeds: core points are closed-form at t = 0 only")
        seeds.extend(core_curve_point(s, 0.0, args.field if args.field in ("E", "B") else "B")[1].tolist() for s in core_specs(kp))
    if not seeds:
        raise ConfigError("--seed-point, --seeds, --random or --core-seeds: no seeds given")
    return np.array(seeds, dtype=float)


def cmd_trace(cfg, args):
    kp = cfg.kp
    tcfg = TraceConfig(**cfg.tolerances)
    seeds = cfg.seeds
    os.makedirs(args.out_dir, exist_ok=True)
    summary, lines, failures = [], [], 0
    ext = "vtk" if args.fmt == "vtk-ascii" else args.fmt
    for i, x0 in enumerate(seeds):
        rec = {"seed_index": i, "seed": x0.tolist(), "field": args.field, "p": kp.p, "q": kp.q, "t": args.t}
        try:
            res = trace(args.field, kp, x0, args.t, tcfg)
        except NullKnotsError as exc:
            failures += 1
            term = Termination.STAGNATION.value if "Stagnation" in type(exc).__name__ else "Error"
            rec.update(termination=term, error=f"{type(exc).__name__}: {exc}", closed=False)
            summary.append(rec)
            continue
        rec.update(res.summary())
        if args.field in ("B", "E"):
            rec["psi_drift_relative"] = res.psi_drift / psi_extremes(kp)
        path = os.path.join(args.out_dir, f"{args.tag}_{i:04d}.{ext}")
        if args.fmt == "csv":
            formats.atomic_write(path, formats.polyline_csv(res.points, res.arc_length))
        elif args.fmt == "jsonl":
            formats.atomic_write(path, "".join(formats.json_line({"s": s, "x": p.tolist()}) for s, p in zip(res.arc_length, res.points)))
        else:
            formats.atomic_write(path, formats.vtk_polydata([res.points], f"{args.tag} seed {i}"))
        rec["file"] = path
        lines.append(res)
        summary.append(rec)
    formats.atomic_write(
        os.path.join(args.out_dir, f"{args.tag}_summary.jsonl"), "".join(formats.json_line(r) for r in summary)
    )
    return EXIT_FAIL if failures == len(seeds) else EXIT_OK


def cmd_core(cfg, args):
    kp = cfg.kp
    os.makedirs(args.out_dir, exist_ok=True)
    specs = core_specs(kp)
    curves = [core_curve(s, args.n, args.field) for s in specs]
    names = [f"{args.tag}_k{s.k}_{'plus' if s.sign > 0 else 'minus'}" for s in specs]
    files = []
    if args.fmt == "vtk-ascii":
        path = os.path.join(args.out_dir, f"{args.tag}.vtk")
        formats.atomic_write(path, formats.vtk_polydata([np.vstack([c, c[:1]]) for c in curves], f"{args.tag} p={kp.p} q={kp.q}"))
        files.append(path)
    else:
        for name, c in zip(names, curves):
            closed = np.vstack([c, c[:1]])
            path = os.path.join(args.out_dir, f"{name}.{args.fmt}")
            if args.fmt == "csv":
                text = formats.polyline_csv(closed)
            else:
                text = "".join(formats.json_line({"x": p.tolist()}) for p in closed)
            formats.atomic_write(path, text)
            files.append(path)
    count, kind = core_component_count(kp)
    linking = {}
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            try:
                linking[f"{names[i]}|{names[j]}"] = gauss_linking(curves[i], curves[j])
            except NullKnotsError as exc:
                linking[f"{names[i]}|{names[j]}"] = f"{type(exc).__name__}: {exc}"
    sys.stdout.write(
        formats.json_line(
            {"p": kp.p, "q": kp.q, "field": args.field, "components": count, "type": str(kind), "files": files, "linking": linking}
        )
    )
    return EXIT_OK


def cmd_invariants(cfg, args):
    qs = QuadratureSpec(args.radius, args.n_r, args.n_theta, args.n_phi)
    cs = conserved_set(cfg.kp, cfg.t, qs)
    _emit(args.out, formats.json_line(cs.as_dict()))
    return EXIT_OK


def cmd_verify(cfg, args):
    lines = []

    def progress(rep):
        lines.append(formats.json_line(rep.to_json()))
        if args.out not in (None, "-"):
            sys.stderr.write(f"{'PASS' if rep.passed else 'FAIL'} {rep.check} {rep.meta.get('construction', '')}\n")

    reports = run_all(
        cfg.kp_list,
        seed=args.seed,
        times=cfg.times,
        samples=args.samples,
        inject_fault=args.inject_fault or None,
        self_test=not args.no_self_test,
        progress=progress,
    )
    _emit(args.out, "".join(lines))
    return EXIT_OK if aggregate(reports) else EXIT_FAIL


COMMANDS = {
    "sample": cmd_sample,
    "trace": cmd_trace,
    "core": cmd_core,
    "invariants": cmd_invariants,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    argv = _rejoin_signed(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_CONFIG
    try:
        cfg = run_config(args)
        return COMMANDS[args.subcommand](cfg, args)
    except ConfigError as exc:
        sys.stderr.write(f"nullknots: error: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        sys.stderr.write(f"nullknots: I/O error: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
