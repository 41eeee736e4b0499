"""Command-line entry point: penrose-gauss <subcommand> [options].

Exit status 0 on success, 2 for an invalid configuration, 3 when a
numerical diagnostic fails (degenerate fit, quadrature or tail failure).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import export
from .discrepancy import DEFAULT_OMEGA, FitError, count_ball, gauss_baseline, gauss_count, geometric_grid, sweep
from .scheme import DEFAULT_ETA, SchemeError, singularity_scan, vertex_arrays, window

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    pass


def parse_omega(text: str) -> complex:
    try:
        re, im = (float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 're,im', got {text!r}") from None
    return complex(re, im)


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _grid(args) -> list[float]:
    if args.rcount < 2 or not 0 < args.rmin < args.rmax:
        raise ConfigError("need 0 < rmin < rmax and rcount >= 2")
    if args.rscale == "geo":
        return geometric_grid(args.rmin, args.rmax, args.rcount)
    return [float(v) for v in np.linspace(args.rmin, args.rmax, args.rcount)]


def _untimed(records, keep: bool):
    if not keep:
        for r in records:
            r.wall_time = 0.0
    return records


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(args) -> None:
    v = vertex_arrays(args.omega, args.R, args.eta, exact=args.exact, threads=args.threads)
    if args.svg:
        Path(args.svg).write_text(export.points_svg(v.phys, v.label, edges=not args.no_edges, radius=args.R))
    if args.csv or not args.svg:
        _emit(export.points_csv(v), args.csv)


def cmd_count(args) -> None:
    rec = count_ball(args.omega, args.m, args.R, args.eta, exact=args.exact, threads=args.threads)
    _untimed([rec], args.timing)
    _emit(export.to_json(rec.as_dict()), args.json)


def cmd_sweep(args) -> None:
    res = sweep(args.omega, args.m, _grid(args), args.eta, threads=args.threads)
    _untimed(res.records, args.timing)
    _emit(export.sweep_csv(res.records), args.csv)
    if args.json:
        _emit(export.to_json(res.summary()), args.json)


def cmd_baseline(args) -> None:
    if args.R is not None:
        _emit(export.to_json({"R": args.R, "count": gauss_count(args.R), "main_term": math.pi * args.R**2}), args.json)
        return
    res = gauss_baseline(_grid(args))
    _untimed(res.records, args.timing)
    _emit(export.sweep_csv(res.records), args.csv)
    if args.json:
        _emit(export.to_json(res.summary()), args.json)


def cmd_spectral(args) -> None:
    from .spectral import ball_ft, polygon_ft

    if args.ycount < 1 or args.ymax <= 0:
        raise ConfigError("need ymax > 0 and ycount >= 1")
    t = np.linspace(0.0, args.ymax, args.ycount)
    y = t * np.exp(1j * math.radians(args.angle))
    if args.kind == "ball":
        vals = np.asarray(ball_ft(args.R, y), dtype=complex)
    else:
        vals = np.asarray(polygon_ft(window(args.m, args.omega), y), dtype=complex)
    rows = [(a.real, a.imag, b.real, b.imag) for a, b in zip(y, vals)]
    _emit(export._csv(("y_re", "y_im", "value_re", "value_im"), rows), args.csv)


def cmd_psf(args) -> None:
    from .spectral import psf_check

    res = psf_check(args.truncation, args.width, args.max_tail, threads=args.threads)
    _emit(export.to_json(res.as_dict()), args.json)


def cmd_lemma(args) -> None:
    from .spectral import lemma_bound_check

    W = window(args.window, args.omega)
    if args.which == 1:
        params = {"T": args.T, "Tint": args.Tint}
    elif args.which == 2:
        m_range = None if args.mmax is None else (args.mmin, args.mmax)
        params = {"R": args.R, "m_range": m_range, "n_range": (args.nmin, args.nmax)}
    else:
        params = {"m_range": (args.mmin, args.mmax or 8), "n_range": (args.nmin, args.nmax)}
    rep = lemma_bound_check(args.which, dict(params, W=W), threads=args.threads)
    _emit(export.to_json(rep.as_dict()), args.json)


def cmd_singular(args) -> None:
    hits = singularity_scan(args.omega, args.R, args.eta)
    out = {
        "omega": [args.omega.real, args.omega.imag],
        "R": args.R,
        "eta": args.eta,
        "singular": bool(hits),
        "hits": [{"m": h.m, "source": list(h.source.coords), "int": [h.int.real, h.int.imag], "distance": h.distance} for h in hits],
    }
    _emit(export.to_json(out), args.json)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="penrose-gauss", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", type=parse_omega, default=DEFAULT_OMEGA, help="translation 're,im' (default %(default)s)")
    common.add_argument("--eta", type=float, default=DEFAULT_ETA, help="boundary tolerance")
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: $PENROSE_THREADS or cpu count)")
    common.add_argument("--json", help="JSON output path ('-' for stdout)")
    common.add_argument("--csv", help="CSV output path ('-' for stdout)")
    common.add_argument("--timing", action="store_true", help="record wall times (outputs are then not reproducible)")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--rmin", type=float, default=10.0)
    grid.add_argument("--rmax", type=float, default=2000.0)
    grid.add_argument("--rcount", type=int, default=48)
    grid.add_argument("--rscale", choices=("geo", "lin"), default="geo")

    g = sub.add_parser("generate", parents=[common], help="vertex set in B_R as CSV and/or SVG")
    g.add_argument("--R", type=float, default=10.0)
    g.add_argument("--svg", help="SVG output path")
    g.add_argument("--no-edges", action="store_true", help="omit unit-length edges from the SVG")
    g.add_argument("--exact", action="store_true", help="decide ball membership in exact arithmetic")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("count", parents=[common], help="count vertices in B_R (JSON)")
    c.add_argument("--m", type=int, default=0, choices=range(5), help="0 = full vertex set, 1..4 = one window")
    c.add_argument("--R", type=float, default=100.0)
    c.add_argument("--exact", action="store_true")
    c.set_defaults(func=cmd_count)

    s = sub.add_parser("sweep", parents=[common, grid], help="counts over a radius grid (CSV + JSON summary)")
    s.add_argument("--m", type=int, default=0, choices=range(5))
    s.set_defaults(func=cmd_sweep)

    b = sub.add_parser("baseline", parents=[common, grid], help="integer lattice Z^2 counts")
    b.add_argument("--R", type=float, default=None, help="single radius (JSON); otherwise the grid")
    b.set_defaults(func=cmd_baseline)

    sp = sub.add_parser("spectral", parents=[common], help="transform values along a ray (CSV)")
    sp.add_argument("--kind", choices=("polygon", "ball"), default="polygon")
    sp.add_argument("--m", type=int, default=1, choices=range(1, 5))
    sp.add_argument("--R", type=float, default=1.0, help="ball radius")
    sp.add_argument("--ymax", type=float, default=10.0)
    sp.add_argument("--ycount", type=int, default=101)
    sp.add_argument("--angle", type=float, default=0.0, help="ray direction in degrees")
    sp.set_defaults(func=cmd_spectral)

    ps = sub.add_parser("psf", parents=[common], help="Poisson summation check (JSON)")
    ps.add_argument("--truncation", type=float, default=64.0)
    ps.add_argument("--width", type=float, default=20.0, help="internal Gaussian width")
    ps.add_argument("--max-tail", type=float, default=1e-4)
    ps.set_defaults(func=cmd_psf)

    lm = sub.add_parser("lemma", parents=[common], help="dual-sum bound diagnostics (JSON)")
    lm.add_argument("--which", type=int, choices=(1, 2, 3), required=True)
    lm.add_argument("--window", type=int, default=1, choices=range(1, 5))
    lm.add_argument("--T", type=float, default=50.0)
    lm.add_argument("--Tint", type=float, default=2.0)
    lm.add_argument("--R", type=float, default=100.0)
    lm.add_argument("--mmin", type=int, default=1)
    lm.add_argument("--mmax", type=int, default=None)
    lm.add_argument("--nmin", type=int, default=2)
    lm.add_argument("--nmax", type=int, default=16)
    lm.set_defaults(func=cmd_lemma)

    sg = sub.add_parser("singular", parents=[common], help="scan for lattice stars on window boundaries (JSON)")
    sg.add_argument("--R", type=float, default=200.0)
    sg.set_defaults(func=cmd_singular)
    return p


def _fail(code: int, exc: BaseException) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit": code}) + "\n")
    return code


def main(argv=None) -> int:
    from .spectral import DiagnosticError, QuadratureError

    args = build_parser().parse_args(argv)
    if args.threads is not None and args.threads < 1:
        return _fail(EXIT_CONFIG, ConfigError("--threads must be positive"))
    if args.json is None and args.command in ("count", "psf", "lemma", "singular"):
        args.json = "-"
    if getattr(args, "R", None) is not None and args.R <= 0:
        return _fail(EXIT_CONFIG, ConfigError("--R must be positive"))
    try:
        args.func(args)
    except (FitError, QuadratureError, DiagnosticError, SchemeError, ArithmeticError) as exc:
        return _fail(EXIT_NUMERIC, exc)
    except (ValueError, OSError) as exc:
        return _fail(EXIT_CONFIG, exc)
    return 0


if __name__ == "__main__":
    sys.exit(main())
