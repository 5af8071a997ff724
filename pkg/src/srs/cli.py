"""Command line interface: ``srs <subcommand> [flags]``.

JSON goes to stdout unless ``--out`` names a file.  Exit codes: 0 success
(including mathematical "false" verdicts), 1 usage or input errors, 2 when
a computational cap was hit and the answer is unknown.

Every flag can also come from an environment variable SRS_<FLAG> (for
example SRS_CAP_STEPS) or from a JSON job file given with ``--job``.
Precedence: command line, then environment, then job file, then defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import re
import sys
from fractions import Fraction
from pathlib import Path

from .errors import InconclusiveError, SrsError, UndecidableError

COMMON = {
    "r": None, "poly": None, "minpoly": None, "z": None, "level": None, "format": None, "out": None,
    "precision": 4096, "cap_points": 5 * 10**6, "cap_steps": 10**6, "threads": 1, "seed": 0,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"usage error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _common(p):
    p.add_argument("--r", help="SRS parameter: 'p0/q0,p1/q1,...', 'pisot:c0,...,cD' or 'real:expr,...'")
    p.add_argument("--poly", help="integer polynomial coefficients a0,...,ad (constant first)")
    p.add_argument("--minpoly", help="minimal polynomial coefficients, constant first")
    p.add_argument("--z", help="integer vector, comma separated")
    p.add_argument("--level", type=int, help="depth n")
    p.add_argument("--format", help="csv, json, png or svg")
    p.add_argument("--out", help="output file (default: JSON on stdout)")
    p.add_argument("--precision", type=int, help="bit cap for the interval backend")
    p.add_argument("--cap-points", type=int, dest="cap_points", help="point-count cap")
    p.add_argument("--cap-steps", type=int, dest="cap_steps", help="orbit step cap")
    p.add_argument("--threads", type=int, help="worker processes for scans")
    p.add_argument("--seed", type=int, help="random seed for sampling subcommands")
    p.add_argument("--job", help="JSON job file with any of these flags")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="srs", description="Shift radix systems: orbits, tiles, certificates, CNS and beta bridges.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text, **extra):
        p = sub.add_parser(name, help=help_text)
        _common(p)
        for flag, kw in extra.items():
            p.add_argument(flag, **kw)
        return p

    add("orbit", "orbit of z until it cycles")
    add("digits", "SRS digits v_1..v_n of z", **{"--n": dict(type=int, default=10)})
    add("periodic", "all purely periodic points")
    add("decide", "finiteness property decision")
    add("tile", "tile approximation M^n tau^-n(z)")
    add("render", "render a tile approximation to PNG or SVG",
        **{"--size": dict(type=int, default=512), "--ppu": dict(type=float), "--radius": dict(type=float)})
    add("exclusive", "search an exclusivity certificate", **{"--max-level": dict(type=int, default=200, dest="max_level")})
    add("verify-certificate", "re-verify a certificate JSON", **{"--cert": dict(required=False)})
    add("interval", "d = 1 interval tiling", **{"--range": dict(default="-3,3")})
    add("shape-census", "lengths of T_{-2/3}(N_k)", **{"--k-max": dict(type=int, default=6, dest="k_max")})
    add("scan-d2", "scan the d = 2 parameter plane",
        **{"--step": dict(default="1/20"), "--box": dict(default="-1,1,-2,2"), "--csv": dict()})
    add("figure", "render a reference figure to PNG",
        **{"--name": dict(required=True), "--size": dict(type=int, default=256)})

    cns = sub.add_parser("cns", help="canonical number systems")
    cns_sub = cns.add_subparsers(dest="action", parser_class=_Parser)
    for name in ("digits", "decide", "tile", "brunotte-tile"):
        p = cns_sub.add_parser(name)
        _common(p)
        p.add_argument("--n", type=int, default=10)
        p.add_argument("--p", help="element of Z[x]/A in monomial coefficients")

    rb = sub.add_parser("ratbase", help="rational base number systems")
    rb_sub = rb.add_subparsers(dest="action", parser_class=_Parser)
    p = rb_sub.add_parser("digits")
    _common(p)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--n", type=int, default=10)

    beta = sub.add_parser("beta", help="Pisot beta-expansions")
    beta_sub = beta.add_subparsers(dest="action", parser_class=_Parser)
    for name in ("param", "digits", "decide-f", "tile", "render"):
        p = beta_sub.add_parser(name)
        _common(p)
        p.add_argument("--n", type=int, default=10)
        p.add_argument("--x", help="element of Q(beta) in the power basis, e.g. '-1,1' for beta - 1")
        p.add_argument("--route", choices=["a", "b", "both"], default="both")
        p.add_argument("--size", type=int, default=512)
    return parser


def _explicit(argv) -> set:
    """Destinations of the long options written on the command line."""
    out = set()
    for tok in argv:
        if tok.startswith("--"):
            out.add(tok[2:].split("=", 1)[0].replace("-", "_"))
    return out


def _resolve(args, argv=()) -> argparse.Namespace:
    job = {}
    if getattr(args, "job", None):
        job = json.loads(Path(args.job).read_text())
        job = {k.replace("-", "_"): v for k, v in job.items()}
    for key, default in COMMON.items():
        val = getattr(args, key, None)
        if val is None:
            env = os.environ.get("SRS_" + key.upper())
            if env is not None:
                val = type(default)(env) if isinstance(default, int) else env
        if val is None and key in job:
            val = job[key]
        if val is None:
            val = default
        setattr(args, key, val)
    given = _explicit(argv)
    for key, val in job.items():
        if key not in COMMON and hasattr(args, key) and key not in ("command", "action") and key not in given:
            setattr(args, key, val)
    return args


def _vec(text, name="--z"):
    if text is None:
        raise UsageError(f"missing {name}")
    try:
        return tuple(int(x) for x in str(text).split(","))
    except ValueError:
        raise UsageError(f"{name} must be a comma-separated list of integers")


def _param(args):
    from .params import parse_param

    if args.r is None:
        raise UsageError("missing --r")
    try:
        return parse_param(str(args.r), args.precision)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"--r: {exc}")


def _emit(args, payload):
    text = json.dumps(payload, indent=1, sort_keys=True, default=str)
    if args.out and (args.format in (None, "json")):
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


def _level(args, default=None):
    if args.level is None:
        if default is None:
            raise UsageError("missing --level")
        return default
    return int(args.level)


def cmd_orbit(args):
    from .dynamics import orbit

    r = _param(args)
    z = _vec(args.z)
    _check_dim(r, z)
    _emit(args, orbit(r, z, args.cap_steps).to_json())


def _check_dim(r, z):
    if len(z) != r.d:
        raise UsageError(f"--z has {len(z)} entries but --r has dimension {r.d}")


def cmd_digits(args):
    from .dynamics import srs_digits

    r = _param(args)
    z = _vec(args.z)
    _check_dim(r, z)
    _emit(args, srs_digits(r, z, args.n).to_json())


def cmd_periodic(args):
    from .dynamics import periodic_report

    r = _param(args)
    rep = periodic_report(r, args.cap_steps, args.cap_points)
    _emit(args, {"points": sorted(list(p) for p in rep.points), "cycles": [[list(s) for s in c] for c in rep.cycles]})


def cmd_decide(args):
    from .dynamics import periodic_report

    r = _param(args)
    rep = periodic_report(r, args.cap_steps, args.cap_points)
    zero = (0,) * r.d
    others = [c for c in rep.cycles if c != [zero]]
    out = {"finiteness": not others}
    if others:
        out["witness_cycle"] = [list(s) for s in others[0]]
    _emit(args, out)


def cmd_tile(args):
    from .export import export_tile
    from .tiles import tile_approx

    r = _param(args)
    z = _vec(args.z) if args.z else (0,) * r.d
    _check_dim(r, z)
    approx = tile_approx(r, z, _level(args), args.cap_points)
    fmt = (args.format or "json").lower()
    if args.out:
        export_tile(approx, fmt, args.out)
        _emit_summary(args, approx)
    else:
        print(json.dumps(approx.to_json(), indent=1))


def _emit_summary(args, approx):
    print(json.dumps({"center": list(approx.center), "level": approx.level, "points": len(approx),
                      "error_bound": f"{float(approx.error_bound):.6e}", "out": args.out}, indent=1))


def cmd_render(args):
    from .export import export_tile
    from .tiles import tile_approx

    r = _param(args)
    z = _vec(args.z) if args.z else (0,) * r.d
    _check_dim(r, z)
    if not args.out:
        raise UsageError("render needs --out")
    fmt = (args.format or Path(args.out).suffix.lstrip(".") or "png").lower()
    approx = tile_approx(r, z, _level(args), args.cap_points)
    opts = {"radius": args.radius}
    if fmt == "png":
        opts.update(size=args.size, ppu=args.ppu)
    export_tile(approx, fmt, args.out, **opts)
    _emit_summary(args, approx)


def cmd_exclusive(args):
    from .tiling import exclusivity_certificate, find_exclusive

    r = _param(args)
    z = _vec(args.z) if args.z else (0,) * r.d
    if args.level is not None:
        cert = exclusivity_certificate(r, z, args.level)
    else:
        cert = find_exclusive(r, z, args.max_level)
        if cert is None:
            raise InconclusiveError(f"no 1-exclusive witness found up to level {args.max_level}",
                                    cap=args.max_level, flag="--max-level")
    _emit(args, cert.to_json())


def cmd_verify(args):
    from .tiling import verify_certificate

    src = args.cert or args.job
    if not src:
        raise UsageError("missing --cert")
    payload = json.loads(Path(src).read_text())
    _emit(args, {"valid": verify_certificate(payload)})


def cmd_interval(args):
    from .tiling import interval_tiling

    r = _param(args)
    if r.d != 1:
        raise UsageError("interval needs a one-dimensional --r")
    lo, hi = (int(x) for x in args.range.split(","))
    res = interval_tiling(r, range(lo, hi + 1), _level(args, 12))
    _emit(args, {"tiles": [t.to_json() for t in res["tiles"]], "order": res["order"],
                 "no_interleave": res["no_interleave"], "monotone": res["monotone"]})


def cmd_census(args):
    from .tiling import disjoint_classes, shape_census_experiment

    rows = shape_census_experiment(args.k_max)
    brackets = [b for _, _, b in rows if b is not None]
    _emit(args, {"rows": [{"k": k, "N_k": N, "bracket": [str(b[0]), str(b[1])] if b else None} for k, N, b in rows],
                 "disjoint_classes": disjoint_classes(brackets)})


def cmd_scan(args):
    from .scan import scan_d2, write_scan_csv, write_scan_png

    box = tuple(Fraction(x) for x in args.box.split(","))
    res = scan_d2(Fraction(args.step), box, args.cap_steps, min(args.cap_points, 10**5), args.threads)
    if args.out:
        write_scan_png(res, args.out)
    if args.csv:
        write_scan_csv(res, args.csv)
    counts = {}
    for v in res["cells"].values():
        counts[v] = counts.get(v, 0) + 1
    print(json.dumps({"cells": len(res["cells"]), "counts": counts, "png": args.out, "csv": args.csv},
                     indent=1, sort_keys=True))
    if counts.get("unknown"):
        return 2
    return 0


def cmd_figure(args):
    from .figures import FIGURES, render_figure

    if args.name not in FIGURES:
        raise UsageError(f"--name must be one of {', '.join(sorted(FIGURES))}")
    if not args.out:
        raise UsageError("figure needs --out")
    meta = render_figure(args.name, args.out, args.size)
    print(json.dumps({"figure": args.name, "out": args.out, "frame": meta}, indent=1, sort_keys=True))


def _poly(args):
    from .cns import IntPolynomial

    if args.poly is None:
        raise UsageError("missing --poly")
    try:
        return IntPolynomial.parse(str(args.poly))
    except ValueError as exc:
        raise UsageError(f"--poly: {exc}")


def cmd_cns(args):
    from . import cns

    A = _poly(args)
    if args.action == "digits":
        P = cns.PolyElement.from_monomial(A, _vec(args.p, "--p"))
        _emit(args, {"digits": cns.cns_digits(A, P, args.n)})
    elif args.action == "decide":
        _emit(args, {"cns": cns.is_cns(A), "r": [str(c) for c in cns.srs_param_from_poly(A).coords]})
    elif args.action == "tile":
        pts = cns.self_affine_tile_approx(A, _level(args), args.cap_points)
        _points_out(args, pts)
    elif args.action == "brunotte-tile":
        z = _vec(args.z) if args.z else (0,) * A.degree
        pts = cns.brunotte_tile_approx(A, z, _level(args), args.cap_points)
        _points_out(args, pts)
    else:
        raise UsageError("cns needs an action: digits, decide, tile, brunotte-tile")


def _points_out(args, pts, radius=0.0):
    from .export import write_csv, write_png, write_svg

    fmt = (args.format or (Path(args.out).suffix.lstrip(".") if args.out else "json")).lower()
    if not args.out or fmt == "json":
        _emit(args, {"points": [[str(c) for c in p] for p in pts]})
        return
    if fmt == "csv":
        write_csv(pts, args.out)
    elif fmt == "png":
        write_png([[float(c) for c in p] for p in pts], args.out, radius, size=getattr(args, "size", 512))
    elif fmt == "svg":
        write_svg([[float(c) for c in p] for p in pts], args.out, radius)
    else:
        raise UsageError(f"unknown --format {fmt}")
    print(json.dumps({"points": len(pts), "out": args.out}))


def cmd_ratbase(args):
    from .cns import rational_base_digits

    if args.action != "digits":
        raise UsageError("ratbase needs the action 'digits'")
    _emit(args, {"digits": rational_base_digits(args.p, args.q, args.N, args.n)})


def cmd_beta(args):
    from . import beta as bmod

    if args.minpoly is None:
        raise UsageError("missing --minpoly")
    spec = bmod.pisot_spec(_vec(args.minpoly, "--minpoly"))
    if args.action == "param":
        _emit(args, {"r": [str(c) for c in spec.param.coords],
                     "conjugates": [str(c) for c in spec.conjugates],
                     "real_conjugates": spec.n_real, "complex_pairs": spec.n_pairs})
    elif args.action == "digits":
        if args.x is None:
            raise UsageError("missing --x")
        x = spec.field.element([Fraction(c) for c in args.x.split(",")])
        _emit(args, {"digits": bmod.beta_digits(spec, x, args.n)})
    elif args.action == "decide-f":
        _emit(args, {"property_F": bmod.satisfies_F(spec)})
    elif args.action in ("tile", "render"):
        z = _vec(args.z) if args.z else (0,) * spec.d
        route = args.route if args.action == "tile" else "a"
        t = bmod.integral_beta_tile_approx(spec, z, _level(args), route, args.cap_points)
        if args.action == "render" or (args.out and (args.format or "").lower() in ("png", "svg", "csv")):
            pts = t.route_a if t.route_a is not None else t.route_b
            _points_out(args, [tuple(p) for p in pts])
            return
        out = {"level": t.level, "points": len(t.leaves)}
        if t.route_a is not None:
            out["route_a"] = t.route_a.tolist()
        if t.route_b is not None:
            out["route_b"] = t.route_b.tolist()
        if t.route_a is not None and t.route_b is not None:
            out["hausdorff_a_b"] = t.deviation()
        _emit(args, out)
    else:
        raise UsageError("beta needs an action: param, digits, decide-f, tile, render")


COMMANDS = {
    "orbit": cmd_orbit, "digits": cmd_digits, "periodic": cmd_periodic, "decide": cmd_decide,
    "tile": cmd_tile, "render": cmd_render, "exclusive": cmd_exclusive, "verify-certificate": cmd_verify,
    "interval": cmd_interval, "shape-census": cmd_census, "scan-d2": cmd_scan, "figure": cmd_figure, "cns": cmd_cns,
    "ratbase": cmd_ratbase, "beta": cmd_beta,
}


_NUMERIC = re.compile(r"^-[0-9./,\-]+$")


def _glue_negative(argv: list) -> list:
    """Join '--z -1,2' into '--z=-1,2' so argparse does not read -1,2 as a flag."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and _NUMERIC.match(tok):
            out[-1] = out[-1] + "=" + tok
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    argv = _glue_negative(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not args.command:
        parser.print_help(sys.stderr)
        return 1
    try:
        args = _resolve(args, argv)
        random.seed(args.seed)
        code = COMMANDS[args.command](args)
        return int(code or 0)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (InconclusiveError, UndecidableError) as exc:
        payload = {"inconclusive": True, "message": str(exc)}
        cap = getattr(exc, "cap", None)
        if cap is not None:
            payload.update(cap=cap, raise_with=exc.flag)
        print(json.dumps(payload))
        print(f"inconclusive: {exc}" + (f" (raise {exc.flag})" if getattr(exc, "flag", None) else ""),
              file=sys.stderr)
        return 2
    except (SrsError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
