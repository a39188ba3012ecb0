"""Command-line interface."""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import gbz, spectral, sweep, tearing, validate
from .classify import AnalysisConfig
from .model import ModelParams, build_hamiltonian

PARAM_KEYS = ("t1", "t2", "gamma", "epsilon", "t_boundary", "n_cells")


def _add_model_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--t1", type=float, required=True)
    parser.add_argument("--t2", type=float, default=1.0)
    parser.add_argument("--gamma", type=float, default=0.0)
    parser.add_argument("--epsilon", type=float, default=0.0)
    parser.add_argument("--t-boundary", type=float, default=None,
                        help="junction hopping; default t2 (closed ring)")
    parser.add_argument("--cells", type=int, default=30, help="unit cells per chain")


def _params_from_args(args) -> ModelParams:
    return ModelParams(t1=args.t1, t2=args.t2, gamma=args.gamma, epsilon=args.epsilon,
                       t_boundary=args.t_boundary, n_cells=args.cells)


def _parse_axis(text: str) -> sweep.AxisSpec:
    parts = text.split(":")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"axis must be name:min:max:steps, got {text!r}")
    name, lo, hi, steps = parts
    return sweep.AxisSpec(name=name, min=float(lo), max=float(hi), steps=int(steps))


def _parse_base(text: str) -> dict:
    out = {}
    for chunk in text.split(","):
        if not chunk:
            continue
        key, _, value = chunk.partition("=")
        key = key.strip()
        if key not in PARAM_KEYS:
            raise argparse.ArgumentTypeError(f"unknown base key {key!r}")
        out[key] = int(value) if key == "n_cells" else float(value)
    return out


def _write(path: str, data: bytes, quiet: bool) -> None:
    with open(path, "wb") as handle:
        handle.write(data)
    if not quiet:
        print(f"wrote {path} ({len(data)} bytes)", file=sys.stderr)


def _analyzed_pairs(params: ModelParams, with_localization: bool = False):
    pairs = spectral.eigendecompose(build_hamiltonian(params))
    curve = None
    if params.is_periodic and not params.is_degenerate():
        curve = gbz.gbz_curve(params, theta_steps=128)
    pairs = spectral.detect_special_states(pairs, params, curve=curve)
    if with_localization:
        enriched = []
        for p in pairs:
            loc = None
            if p.tag == "bulk" and (p.rho_I > 0.6 or p.rho_I < 0.4):
                try:
                    loc = spectral.localization_modulus(p, params)
                except ValueError:
                    loc = None
            enriched.append(replace(p, loc_modulus=loc))
        pairs = enriched
    return pairs


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gbzlab",
        description="Spectral laboratory for the dissipative non-reciprocal SSH ring",
    )
    parser.add_argument("--threads", type=int, default=0, help="worker threads (0 = auto)")
    parser.add_argument("--seed", type=int, default=None,
                        help="accepted for interface stability; the pipeline is deterministic")
    parser.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="numerical spectrum with state tags")
    _add_model_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("gbz", help="analytical C_beta and energy spectrum")
    _add_model_args(p)
    p.add_argument("--theta-steps", type=int, default=512)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sweep", help="phase-diagram sweep over a parameter plane")
    p.add_argument("--axis-x", type=_parse_axis, required=True, metavar="name:min:max:steps")
    p.add_argument("--axis-y", type=_parse_axis, required=True, metavar="name:min:max:steps")
    p.add_argument("--base", type=_parse_base, default={}, metavar="key=val,...")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--render", default=None, metavar="PPM_PATH")

    p = sub.add_parser("tearing", help="closure-gap scan over dissipation")
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--t2", type=float, default=1.0)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--cells", type=int, default=30)
    p.add_argument("--eps-min", type=float, required=True)
    p.add_argument("--eps-max", type=float, required=True)
    p.add_argument("--eps-step", type=float, default=0.01)
    p.add_argument("--out", required=True)

    p = sub.add_parser("localize", help="per-state localization moduli")
    _add_model_args(p)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("validate", help="run a cross-validation suite")
    p.add_argument("--suite", choices=sorted(validate.SUITES), required=True)

    args = parser.parse_args(argv)

    if args.command == "spectrum":
        pairs = _analyzed_pairs(_params_from_args(args))
        _write(args.out, sweep.export_spectrum(pairs, [], format=args.format), args.quiet)
        return 0

    if args.command == "gbz":
        params = _params_from_args(args)
        curve = gbz.gbz_curve(params, theta_steps=args.theta_steps)
        _write(args.out, sweep.export_spectrum([], curve.points, format=args.format), args.quiet)
        return 0

    if args.command == "sweep":
        base_kwargs = dict(args.base)
        for axis in (args.axis_x, args.axis_y):
            base_kwargs.setdefault(axis.name, axis.min)
        if "t1" not in base_kwargs:
            parser.error("base must provide t1 unless it is a sweep axis")
        spec = sweep.SweepSpec(axis_x=args.axis_x, axis_y=args.axis_y,
                               base=ModelParams(**base_kwargs), classifier=AnalysisConfig())
        grid = sweep.run_sweep(spec, threads=args.threads)
        _write(args.out, sweep.export_grid(grid, format=args.format), args.quiet)
        if args.render:
            _write(args.render, sweep.render_heatmap(grid), args.quiet)
        return 0

    if args.command == "tearing":
        params = ModelParams(t1=args.t1, t2=args.t2, gamma=args.gamma, n_cells=args.cells)
        n_steps = int(round((args.eps_max - args.eps_min) / args.eps_step))
        grid = [args.eps_min + k * args.eps_step for k in range(n_steps + 1)]
        scan = tearing.critical_epsilon(params, grid, threads=args.threads)
        _write(args.out, sweep.export_tearing_scan(scan), args.quiet)
        if not args.quiet:
            star = "none in range" if scan.epsilon_star is None else f"{scan.epsilon_star:g}"
            print(f"critical dissipation: {star}", file=sys.stderr)
        return 0

    if args.command == "localize":
        pairs = _analyzed_pairs(_params_from_args(args), with_localization=True)
        _write(args.out, sweep.export_spectrum(pairs, [], format=args.format), args.quiet)
        return 0

    if args.command == "validate":
        ok, lines = validate.SUITES[args.suite]()
        for line in lines:
            print(line)
        return 0 if ok else 1

    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
