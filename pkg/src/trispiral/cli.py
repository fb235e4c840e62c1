"""
Command-line interface: ``trispiral {generate,table,fit,classify,render,compare}``.

Paths may be ``-`` for standard input/output. Exit status is 0 only when
the requested output was written in full; 2 for invalid arguments, 1 for
input, fitting or I/O failures.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from .baselines import HlsParams, LogSpiralParams
from .core import Handedness, SpiralSpec, growth_base, growth_table, spec_from_mod, spec_from_sides
from .fitting import (
    DEFAULT_MOD_RANGE,
    DegenerateTraceError,
    _MIN_GROWTH,
    classify_mod,
    fit_golden_spiral,
    fit_hls,
    fit_log_spiral,
    fit_triangular,
)
from .render import RenderOptions, chord_count, spiral_svg
from .serialize import read_trace, write_growth_table, write_points

# parameter count used to break rms ties: simpler model ranks first
_COMPLEXITY = {"golden": 1, "log": 2, "triangular": 3, "hls": 3}


class CliError(Exception):
    def __init__(self, message, status=1):
        super().__init__(message)
        self.status = status


def _emit(text, out):
    if out == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(f"cannot write {out}: {exc.strerror}") from None


def _spec(args) -> SpiralSpec:
    hand = Handedness.CLOCKWISE if args.clockwise else Handedness.COUNTERCLOCKWISE
    phase = math.radians(args.phase_deg)
    try:
        if args.mod is not None:
            return spec_from_mod(args.mod, args.seed, phase, hand)
        return spec_from_sides(args.sides, args.seed, phase, hand)
    except ValueError as exc:
        raise CliError(f"invalid spiral: {exc}", status=2) from None


def _load_trace(args):
    fmt = args.trace_format
    if fmt is None:
        fmt = "json" if args.trace.lower().endswith(".json") else "csv"
    try:
        source = sys.stdin.buffer if args.trace == "-" else args.trace
        return read_trace(source, fmt)
    except OSError as exc:
        raise CliError(f"cannot read {args.trace}: {exc.strerror}") from None
    except ValueError as exc:
        raise CliError(f"bad trace {args.trace}: {exc}") from None


def _params_dict(params):
    if isinstance(params, SpiralSpec):
        return {
            "mod": params.mod,
            "sides": params.sides,
            "phi0_deg": math.degrees(params.phi0),
            "seed": params.seed,
            "phase_deg": math.degrees(params.phase),
            "growth_base": growth_base(params),
        }
    if isinstance(params, LogSpiralParams):
        return {"scale": params.scale, "growth": params.growth, "phase": params.phase}
    if isinstance(params, HlsParams):
        return {"r0": params.r0, "a_l": params.a_l, "b_l": params.b_l}
    raise TypeError(type(params))


def _fit_dict(fit):
    d = {"model": fit.kind, "rms": fit.rms_error, "params": _params_dict(fit.params)}
    if fit.kind == "triangular":
        d["classified_mod"] = fit.classified_mod
        d["candidate_scores"] = {str(m): s for m, s in sorted(fit.candidate_scores.items())}
    return d


def _require_growth(samples):
    growth = fit_log_spiral(samples).params.growth
    if growth <= _MIN_GROWTH:
        raise CliError(
            f"degenerate trace: no radial growth (log-spiral growth {growth:.3g} per radian); "
            "a circle matches no triangular spiral"
        )


def _mod_range(args):
    lo, hi = args.mod_min, args.mod_max
    if lo > hi:
        raise CliError(f"empty mod range [{lo}, {hi}]", status=2)
    return lo, hi


def _text_report(report):
    lines = [f"trace: {report['trace']}", f"samples: {report['samples']}",
             f"best_model: {report['best_model']}"]
    for fit in report["models"]:
        lines.append(f"[{fit['model']}] rms: {fit['rms']:.6g}")
        for k, v in fit["params"].items():
            lines.append(f"  {k}: {v:.10g}" if isinstance(v, float) else f"  {k}: {v}")
        if "classified_mod" in fit:
            lines.append(f"classified_mod: {fit['classified_mod']}")
            lines.append("  mod        rms")
            for m, s in fit["candidate_scores"].items():
                lines.append(f"  {m:>3}  {s:.6e}")
    for key in ("confidence", "continuous_mod"):
        if key in report:
            lines.append(f"{key}: {report[key]:.6g}")
    return "\n".join(lines) + "\n"


def _report_text(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    return _text_report(report)


def _ranked(fits):
    return sorted(fits, key=lambda f: (f.rms_error, _COMPLEXITY[f.kind]))


def cmd_generate(args):
    spec = _spec(args)
    count = chord_count(spec, args.turns) + 1
    text = write_points(spec, args.format, None, count=count)
    _emit(text, args.out)
    print(
        f"mod {spec.mod} (sides {spec.sides}), phi0 {math.degrees(spec.phi0):.9g} deg, "
        f"growth base {growth_base(spec):.9f}, {count} vertices",
        file=sys.stderr,
    )
    return 0


def cmd_table(args):
    try:
        rows = growth_table(args.min, args.max)
    except ValueError as exc:
        raise CliError(str(exc), status=2) from None
    _emit(write_growth_table(rows, args.format), args.out)
    return 0


def cmd_fit(args):
    samples = _load_trace(args)
    fits = []
    try:
        if args.model in ("triangular", "all"):
            _require_growth(samples)
            fits.append(fit_triangular(samples, _mod_range(args)))
        if args.model in ("log", "all"):
            fits.append(fit_log_spiral(samples))
        if args.model in ("hls", "all"):
            fits.append(fit_hls(samples))
    except ValueError as exc:
        raise CliError(f"fit failed: {exc}") from None
    fits = _ranked(fits)
    report = {
        "trace": args.trace,
        "samples": len(samples),
        "best_model": fits[0].kind,
        "models": [_fit_dict(f) for f in fits],
    }
    _emit(_report_text(report, args.format), args.out)
    return 0


def cmd_classify(args):
    samples = _load_trace(args)
    try:
        c = classify_mod(samples, _mod_range(args))
    except DegenerateTraceError as exc:
        raise CliError(f"degenerate trace: {exc}") from None
    except ValueError as exc:
        raise CliError(f"classification failed: {exc}") from None
    report = {
        "trace": args.trace,
        "samples": len(samples),
        "best_model": "triangular",
        "classified_mod": c.mod,
        "confidence": c.confidence,
        "continuous_mod": c.continuous_mod,
        "models": [_fit_dict(c.fit)],
    }
    _emit(_report_text(report, args.format), args.out)
    return 0


def cmd_render(args):
    spec = _spec(args)
    try:
        options = RenderOptions(
            turns=args.turns,
            width=args.width,
            height=args.height,
            scale=args.scale,
            show_triangles=args.triangles,
            show_envelope=args.envelope,
            show_guides=args.guides,
            underlay=args.underlay,
            underlay_opacity=args.opacity,
        )
    except ValueError as exc:
        raise CliError(f"invalid render options: {exc}", status=2) from None
    base = None
    if args.underlay is not None and args.out != "-":
        base = os.path.dirname(os.path.abspath(args.out))
    try:
        text = spiral_svg(spec, options, href_base=base)
    except FileNotFoundError as exc:
        raise CliError(str(exc)) from None
    _emit(text, args.out)
    return 0


def cmd_compare(args):
    samples = _load_trace(args)
    try:
        _require_growth(samples)
        fits = [
            fit_triangular(samples, DEFAULT_MOD_RANGE),
            fit_log_spiral(samples),
            fit_golden_spiral(samples),
            fit_hls(samples),
        ]
    except ValueError as exc:
        raise CliError(f"fit failed: {exc}") from None
    fits = _ranked(fits)
    report = {
        "trace": args.trace,
        "samples": len(samples),
        "best_model": fits[0].kind,
        "ranking": [f.kind for f in fits],
        "models": [_fit_dict(f) for f in fits],
    }
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        lines = ["rank  model        rms"]
        for i, f in enumerate(fits, 1):
            extra = f"  mod {f.classified_mod}" if f.kind == "triangular" else ""
            lines.append(f"{i:>4}  {f.kind:<11}  {f.rms_error:.6e}{extra}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _even_mod(value):
    m = int(value)
    if m % 2 or m < 6 or m > 220:
        raise argparse.ArgumentTypeError(f"mod bound must be an even integer in [6, 220], got {value}")
    return m


def _spec_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--mod", type=int, help="triangles per turn (even, >= 6)")
    g.add_argument("--sides", type=int, help="polygon sides (>= 3)")
    p.add_argument("--seed", type=float, default=1.0, help="height of the first triangle")
    p.add_argument("--phase-deg", type=float, default=0.0, help="angle of the first vertex, degrees")
    p.add_argument("--clockwise", action="store_true")


def _trace_args(p):
    p.add_argument("trace", help="trace file (csv or json), or - for stdin")
    p.add_argument("--trace-format", choices=("csv", "json"),
                   help="input format (default: from file extension)")
    p.add_argument("--format", choices=("text", "json"), default="text", help="report format")
    p.add_argument("--out", default="-")


def _mod_args(p):
    p.add_argument("--mod-min", type=_even_mod, default=DEFAULT_MOD_RANGE[0])
    p.add_argument("--mod-max", type=_even_mod, default=DEFAULT_MOD_RANGE[1])


def build_parser():
    parser = argparse.ArgumentParser(prog="trispiral", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write spiral vertices")
    _spec_args(p)
    p.add_argument("--turns", type=float, default=1.0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("table", help="growth base per polygon")
    p.add_argument("--min", type=int, default=3)
    p.add_argument("--max", type=int, default=109)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("fit", help="fit a trace")
    _trace_args(p)
    p.add_argument("--model", choices=("triangular", "log", "hls", "all"), default="triangular")
    _mod_args(p)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("classify", help="best mod with confidence")
    _trace_args(p)
    _mod_args(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("render", help="draw a spiral as SVG")
    _spec_args(p)
    p.add_argument("--turns", type=float, default=2.0)
    p.add_argument("--triangles", action="store_true", help="draw apex rays")
    p.add_argument("--envelope", action="store_true", help="draw the smooth envelope")
    p.add_argument("--guides", action="store_true", help="draw full-turn circles")
    p.add_argument("--underlay", help="raster image drawn beneath the spiral")
    p.add_argument("--opacity", type=float, default=0.5, help="underlay opacity")
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--height", type=int, default=800)
    p.add_argument("--scale", type=float, help="pixels per length unit (default: fit canvas)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("compare", help="rank triangular, log, golden and HLS fits")
    _trace_args(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "turns", 1.0) <= 0:
        parser.error("--turns must be positive")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"trispiral {args.command}: error: {exc}", file=sys.stderr)
        return exc.status


if __name__ == "__main__":
    sys.exit(main())
