"""The `ortho` command line: batch counting experiments with CSV/JSON output.

Exit codes: 0 success, 1 a verification found a mismatch, 2 invalid arguments,
3 capacity or stabilization failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import constants, cusps, hermitian, orbits, qforms, quat
from .report import CountReport, emit

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _ints(text: str, n: int) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"expected {n} comma-separated integers, got {text!r}") from None
    if len(vals) != n:
        raise UsageError(f"expected {n} comma-separated integers, got {text!r}")
    return vals


def _grid(args) -> list[float]:
    if args.steps < 1 or args.smax <= 0:
        raise UsageError("need --steps >= 1 and --smax > 0")
    lo = getattr(args, "smin", None)
    if lo is None:
        return [args.smax * i / args.steps for i in range(1, args.steps + 1)]
    if not 0 <= lo <= args.smax:
        raise UsageError("need 0 <= --smin <= --smax")
    return [float(x) for x in np.linspace(lo, args.smax, args.steps)]


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _output(args, payload: bytes) -> None:
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def _report(args, rep: CountReport) -> int:
    if not rep.fit and rep.rows:
        rep.refit()
    _output(args, emit(rep, args.format))
    return EXIT_OK


# --- commands ------------------------------------------------------------------


def cmd_quad_count(args):
    q = qforms.BinaryQF(*_ints(args.form, 3))
    grid = _grid(args)
    counts = qforms.count_primitive_reps_grid(q, grid)
    rep = CountReport("quad-count", {"form": [q.a, q.b, q.c], "disc": q.disc,
                                     "regulator": qforms.regulator(q)}, delta=0)
    for s, n in zip(grid, counts):
        rep.add(s, int(n), qforms.psi_prediction(q, s))
    rep.fit = {"constant": rep.rows[-1][1] / rep.rows[-1][0], "drift": abs(rep.rows[-1][3] - 1)}
    return _report(args, rep)


def cmd_quad_verify(args):
    q = qforms.BinaryQF(*_ints(args.form, 3))
    if q.disc <= 0:
        raise UsageError("form must be indefinite")
    rng = np.random.default_rng(args.seed)
    diffs = []
    while len(diffs) < args.samples:
        g = qforms.random_sl2z(rng)
        (A, B), (C, D) = g
        if q(D, -C) == 0:
            continue
        diffs.append(abs(qforms.perp_length(q, g) - qforms.perp_length_geometric(q, g)))
    worst = max(diffs) if diffs else 0.0
    ok = worst < args.tol
    doc = {"form": [q.a, q.b, q.c], "samples": args.samples, "seed": args.seed,
           "max_abs_diff": worst, "tolerance": args.tol, "pass": ok}
    if args.format == "json":
        _output(args, (json.dumps(doc, sort_keys=True) + "\n").encode())
    else:
        _output(args, "".join(f"{k},{doc[k]}\n" for k in sorted(doc)).encode())
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_quad_irrationals(args):
    q = qforms.BinaryQF(*_ints(args.form, 3))
    grid = _grid(args)
    counts = qforms.count_orbit_irrationals_grid(q, grid)
    rep = CountReport("quad-irrationals", {"form": [q.a, q.b, q.c]}, delta=0)
    for s, n in zip(grid, counts):
        rep.add(s, int(n), qforms.irrationals_prediction(q, s))
    rep.fit = {"constant": rep.rows[-1][1] / rep.rows[-1][0], "drift": abs(rep.rows[-1][3] - 1)}
    return _report(args, rep)


def cmd_cusp_mertens(args):
    grid = _grid(args)
    counts = cusps.mertens_counts(grid)
    c = constants.special_constant("mertens")
    rep = CountReport("cusp-mertens", {}, delta=1)
    for s, n in zip(grid, counts):
        rep.add(s, int(n), c * math.exp(s))
    return _report(args, rep)


def cmd_cusp_bianchi(args):
    if args.dk not in cusps.SUPPORTED_DK:
        raise UsageError(f"--dk must be one of {cusps.SUPPORTED_DK}")
    grid = _grid(args)
    counts = cusps.bianchi_cusp_counts(args.dk, grid)
    consts = cusps.bianchi_prediction_constants(args.dk)
    c = consts[args.constant]
    rep = CountReport("cusp-bianchi", {"D_K": args.dk, "constant": args.constant, **consts}, delta=2)
    for s, n in zip(grid, counts):
        rep.add(s, int(n), c * math.exp(2 * s))
    return _report(args, rep)


def cmd_orbit_ball(args):
    ring = {"psl2z": "Z", "psl2zi": "Z[i]"}[args.group]
    rep = orbits.orbit_ball_report(ring, _grid(args), threads=args.threads, progress=_progress)
    return _report(args, rep)


def cmd_herm_count(args):
    a, br, bi, c = _ints(args.form, 4)
    f = hermitian.HermForm(a, (br, bi), c)
    if f.disc <= 0:
        raise UsageError("form must be indefinite")
    if args.bound < 1 or args.steps < 1:
        raise UsageError("need --bound >= 1 and --steps >= 1")
    grid = [args.bound * i / args.steps for i in range(1, args.steps + 1)]
    rep = hermitian.herm_count_report(f, grid, args.slack, progress=_progress)
    return _report(args, rep)


def _parse_params(text: str | None) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"bad parameter {item!r}; expected key=value")
        try:
            num = float(val)
        except ValueError:
            raise UsageError(f"parameter {key} is not a number") from None
        out[key.strip()] = int(num) if num.is_integer() and "." not in val else num
    return out


def cmd_const(args):
    params = _parse_params(args.params)
    if args.da is not None:
        params["D_A"] = args.da
    try:
        value = constants.special_constant(args.name, params)
    except (KeyError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    check = constants.specialization(args.name, params)
    if args.format == "json":
        doc = {"name": args.name, "params": params, "value": value, "master": check}
        _output(args, (json.dumps(doc, sort_keys=True) + "\n").encode())
    else:
        lines = [f"{value:.15g}\n"]
        if check is not None:
            rel = abs(check - value) / value
            lines.append(f"master formula: {check:.15g} (relative difference {rel:.2e})\n")
        _output(args, "".join(lines).encode())
    return EXIT_OK


def cmd_quat_selftest(args):
    results = quat.selftest(args.seed, args.samples)
    _output(args, "".join(f"{k}: {'ok' if v else 'FAIL'}\n" for k, v in results.items()).encode())
    return EXIT_OK if all(results.values()) else EXIT_MISMATCH


# --- parser ----------------------------------------------------------------------


def _common(p):
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                   help="worker threads (default: available cores)")


def _grid_args(p, smin=False):
    p.add_argument("--smax", type=float, required=True)
    p.add_argument("--steps", type=int, default=10)
    if smin:
        p.add_argument("--smin", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ortho", description="Counting common perpendiculars.")
    top = parser.add_subparsers(dest="group", required=True)

    quad = top.add_parser("quad", help="binary quadratic forms").add_subparsers(dest="cmd", required=True)
    p = quad.add_parser("count", help="primitive representations Ψ_Q(s)")
    p.add_argument("--form", required=True, help="a,b,c")
    _grid_args(p, smin=True)
    _common(p)
    p.set_defaults(func=cmd_quad_count)
    p = quad.add_parser("verify-length", help="perpendicular length, two routes")
    p.add_argument("--form", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-9)
    _common(p)
    p.set_defaults(func=cmd_quad_verify)
    p = quad.add_parser("irrationals", help="orbit irrationals by height")
    p.add_argument("--form", required=True)
    _grid_args(p, smin=True)
    _common(p)
    p.set_defaults(func=cmd_quad_irrationals)

    cusp = top.add_parser("cusp", help="cusp to cusp counts").add_subparsers(dest="cmd", required=True)
    p = cusp.add_parser("mertens", help="PSL_2(Z), lengths in hyperbolic units")
    _grid_args(p, smin=True)
    _common(p)
    p.set_defaults(func=cmd_cusp_mertens)
    p = cusp.add_parser("bianchi", help="PSL_2(O_K) for class number one")
    p.add_argument("--dk", type=int, required=True)
    p.add_argument("--constant", choices=("cosentino_refined", "cosentino", "lattice_average"),
                   default="cosentino_refined", help="prediction constant")
    _grid_args(p, smin=True)
    _common(p)
    p.set_defaults(func=cmd_cusp_bianchi)

    orbit = top.add_parser("orbit", help="orbit points in balls").add_subparsers(dest="cmd", required=True)
    p = orbit.add_parser("ball")
    p.add_argument("--group", choices=("psl2z", "psl2zi"), required=True)
    _grid_args(p, smin=True)
    _common(p)
    p.set_defaults(func=cmd_orbit_ball)

    herm = top.add_parser("herm", help="Hermitian forms over Z[i]").add_subparsers(dest="cmd", required=True)
    p = herm.add_parser("count")
    p.add_argument("--form", required=True, help="a,b_re,b_im,c")
    p.add_argument("--bound", type=float, required=True, help="largest |f(u,v)|")
    p.add_argument("--slack", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=10)
    _common(p)
    p.set_defaults(func=cmd_herm_count)

    p = top.add_parser("const", help="evaluate a named counting constant")
    p.add_argument("name", choices=constants.SPECIAL_CONSTANTS)
    p.add_argument("--params", help="k=v,... e.g. g=2")
    p.add_argument("--da", type=int, help="shortcut for D_A=...")
    _common(p)
    p.set_defaults(func=cmd_const)

    q = top.add_parser("quat", help="quaternion checks").add_subparsers(dest="cmd", required=True)
    p = q.add_parser("selftest")
    p.add_argument("--samples", type=int, default=200)
    _common(p)
    p.set_defaults(func=cmd_quat_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"ortho: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (qforms.CapacityError, cusps.CapacityError, orbits.CapacityError,
            hermitian.CapacityError, hermitian.StabilizationError) as exc:
        print(f"ortho: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
