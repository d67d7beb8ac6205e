"""Command-line interface.

Exit codes: 0 success, 1 a check failed (or a construction could not be
completed), 2 usage error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import serialize
from .config_integral import decompose, epsilon_ladder, main_term_check
from .content import content_table, frostman_measure, good_cube, ratio_table
from .curves import builtin_catalog, get_curve
from .dyadic import GridParams, format_set, read_set, write_set
from .fourier import (FrequencyGrid, TestFunction, energy_fourier_ratio, high_frequency_tail,
                      riesz_energy, smoothing_probe, spectral_gap_integral)
from .fractal_gen import full_interval, random_branching, self_similar
from .gridmeasure import GridMeasure, frostman_ratio, read_measure, write_measure
from .measures import (ConstructionError, SpectralGapParams, fourier_proximity_constant,
                       spectral_gap_measure)
from .patterns import find_patterns, verify_witness
from .pipeline import PipelineError, PipelineParams, pipeline_endtoend

DEFAULT_TOL = 1e-9


class CheckFailed(Exception):
    pass


def _floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _ladder(text: str) -> list[int]:
    a, b = text.split("..")
    return list(range(int(a), int(b) + 1))


def _emit(args, text: str) -> None:
    if getattr(args, "out", None):
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _curve(args):
    return get_curve(args.curve).scaled(getattr(args, "lam", 1.0))


def _measure_from(args, E=None):
    if getattr(args, "measure", None):
        return read_measure(args.measure)
    E = E if E is not None else read_set(args.set)
    return GridMeasure.on_set(E)


# --- subcommands ---------------------------------------------------------------

def cmd_gen(args) -> int:
    params = GridParams(args.N, args.L)
    if args.mode == "full":
        E = full_interval(params)
    elif args.mode == "self-similar":
        if not args.keep:
            raise ValueError("--keep is required for self-similar sets")
        steps = [_ints(s) for s in args.keep.split(";")]
        E = self_similar(params, steps[0] if len(steps) == 1 else steps)
    else:
        E = random_branching(params, args.p, args.seed)
    if args.out:
        write_set(args.out, E)
    else:
        sys.stdout.write(format_set(E))
    return 0


def cmd_content(args) -> int:
    E = read_set(args.set)
    table = content_table(E, (args.s, args.J))
    out = {"s": args.s, "J": args.J, "content": table.value,
           "cover": [[Q.level, Q.index] for Q in table.cover()],
           "ratios": [{"level": j, "max": a, "min": b} for j, a, b in ratio_table(E, args.s, args.J)]}
    if args.delta is not None:
        Q = good_cube(E, args.s, args.delta, args.J)
        out["good_cube"] = None if Q is None else Q
    if args.format == "json":
        _emit(args, serialize.dumps(out))
        return 0
    rows = [{"kind": "content", "value": table.value}]
    rows += [{"kind": "cover", "level": j, "index": k} for j, k in out["cover"]]
    rows += [{"kind": "ratio", "level": r["level"], "value": r["max"], "min_ratio": r["min"]}
             for r in out["ratios"]]
    if out.get("good_cube") is not None:
        rows.append({"kind": "good_cube", "level": out["good_cube"].level,
                     "index": out["good_cube"].index})
    _emit(args, serialize.csv_text(rows, ["kind", "level", "index", "value", "min_ratio"]))
    return 0


def cmd_measure(args) -> int:
    E = read_set(args.set)
    if args.kind == "frostman":
        mu = frostman_measure(E, args.s)
        diag = {"kind": "frostman", "s": args.s, "total": mu.total,
                "frostman_ratio": frostman_ratio(mu, args.s)}
    elif args.kind == "counting":
        mu = GridMeasure.on_set(E)
        diag = {"kind": "counting", "total": mu.total}
    else:
        p = SpectralGapParams(E.N, args.T, args.tt, args.J)
        mu, Q, d = spectral_gap_measure(E, p)
        diag = {"kind": "spectral-gap", **d.as_dict(), "total": mu.total,
                "frostman_ratio": frostman_ratio(mu, p.s)}
    if args.out:
        write_measure(args.out, mu)
    sys.stdout.write(serialize.dumps(diag))
    return 0


def _verify_rows(args) -> list[dict]:
    E = read_set(args.set)
    tol = args.tol
    rows = []

    def check(name, value, bound, passed, **extra):
        rows.append({"check": name, **extra, "value": float(value), "bound": float(bound),
                     "pass": bool(passed)})

    if args.pipeline == "prop42":
        p = SpectralGapParams(E.N, args.T, args.tt, args.J, args.A, args.B)
        mu, Q, diag = spectral_gap_measure(E, p)
        check("total_mass", abs(mu.total - 1.0), 1e-12, abs(mu.total - 1.0) <= 1e-12)
        fr = frostman_ratio(mu, p.s)
        check("frostman_ratio", fr, 4.0, fr <= 4.0 + tol)
        C = fourier_proximity_constant(mu, p.T)
        prev = None
        if args.T > 2:
            mu2, _, _ = spectral_gap_measure(E, SpectralGapParams(E.N, args.T - 2, args.tt, args.J,
                                                                  args.A, args.B))
            prev = fourier_proximity_constant(mu2, args.T - 2)
            check("proximity_constant", C, 1.25 * prev, C <= 1.25 * prev)
        else:
            check("proximity_constant", C, float("inf"), True)
        grid = FrequencyGrid(max(2.0 ** 16, args.B ** 2))
        gap = spectral_gap_integral(mu, args.A, args.B, grid)
        if args.T > 2:
            gap2 = spectral_gap_integral(mu2, args.A, args.B, grid)
            check("spectral_gap_integral", gap, gap2, gap <= gap2 + 1e-12)
        else:
            check("spectral_gap_integral", gap, float("inf"), True)
    elif args.pipeline == "energy":
        mu = _measure_from(args, E)
        for s in _floats(args.s_values):
            r = energy_fourier_ratio(mu, s)
            check("energy_fourier_ratio", r, 1.0, abs(r - 1.0) <= 0.02, s=s,
                  energy=riesz_energy(mu, s))
    elif args.pipeline == "hf-tail":
        mu = _measure_from(args, E)
        last = None
        for B in _floats(args.B_values):
            value, bound = high_frequency_tail(mu, B ** -2.0, B, args.sigma, args.tt)
            ok = value <= bound and (last is None or value <= last + 1e-15)
            check("high_frequency_tail", value, bound, ok, B=B)
            last = value
    return rows


def cmd_verify(args) -> int:
    rows = _verify_rows(args)
    if args.format == "csv":
        _emit(args, serialize.csv_text(rows))
    else:
        _emit(args, serialize.dumps({"pipeline": args.pipeline, "checks": rows,
                                     "passed": all(r["pass"] for r in rows)}))
    return 0 if all(r["pass"] for r in rows) else 1


def cmd_configint(args) -> int:
    E = read_set(args.set)
    curve = _curve(args)
    if args.measure_kind == "spectral-gap":
        mu, _, _ = spectral_gap_measure(E, SpectralGapParams(E.N, args.T, args.tt, 0))
    else:
        mu = _measure_from(args, E)
    out = {}
    if args.eps_ladder:
        ladder = epsilon_ladder(mu, curve, args.ell, _ladder(args.eps_ladder))
        out["ladder"] = ladder
    eps = args.eps if args.eps is not None else 0.5 / (args.B or args.A ** 4)
    rep = decompose(mu, curve, args.ell, eps, args.A, args.B, args.sigma, args.tt)
    out["decomposition"] = rep.as_dict()
    ok = abs(rep.split_residual) <= 1e-10
    if args.ell >= 4:
        mt = main_term_check(mu, curve, args.ell)
        out["main_term_check"] = mt
        ok = ok and mt.passed
    out["passed"] = ok
    _emit(args, serialize.dumps(out))
    sys.stderr.write(f"configint {'PASS' if ok else 'FAIL'} total={rep.total:.6g} "
                     f"main={rep.main:.6g} errors={rep.error_sum:.3g} "
                     f"residual={rep.split_residual:.2g}\n")
    return 0 if ok else 1


def cmd_search(args) -> int:
    E = read_set(args.set)
    curve = get_curve(args.curve)
    lambdas = _floats(args.lambdas) if args.lambdas else None
    ws = find_patterns(E, curve, lambdas, args.max, args.t_grid)
    if not all(verify_witness(E, w, curve) for w in ws):
        raise CheckFailed("a witness failed re-verification")
    cols = ["x", "t", "lambda", "p1", "p2", "p3", "separation"]
    _emit(args, serialize.csv_text([w.as_row() for w in ws], cols))
    return 0


def _sweep_metric(args, value) -> float:
    E = read_set(args.set) if args.set else full_interval(GridParams(1, 16))
    T, A, B = args.T, args.A, args.B
    if args.param == "T":
        T = int(value)
    elif args.param == "A":
        A = value
    elif args.param == "B":
        B = value
    if args.metric in ("gap-integral", "frostman-ratio", "proximity-C"):
        p = SpectralGapParams(E.N, T, args.tt, 0, A, max(B, A * 1.0001))
        mu, _, _ = spectral_gap_measure(E, p)
        if args.metric == "gap-integral":
            return spectral_gap_integral(mu, A, B, FrequencyGrid(max(2.0 ** 16, B * B)))
        if args.metric == "frostman-ratio":
            return frostman_ratio(mu, p.s)
        return fourier_proximity_constant(mu, T)
    mu = GridMeasure.on_set(E)
    if args.metric == "hf-tail":
        return high_frequency_tail(mu, B ** -2.0, B, args.sigma, args.tt)[0]
    if args.metric == "energy-ratio":
        return energy_fourier_ratio(mu, args.s)
    raise ValueError(f"unknown metric {args.metric}")


def cmd_sweep(args) -> int:
    rows = []
    prev = None
    for v in _floats(args.values):
        m = _sweep_metric(args, v)
        mono = prev is None or m <= prev + 1e-12
        rows.append({args.param: v, args.metric: m, "monotone": mono})
        prev = m
    _emit(args, serialize.csv_text(rows))
    return 0


def cmd_probe(args) -> int:
    curve = _curve(args)
    rows = []
    for ell in _ints(args.ells):
        for lam in _floats(args.freqs):
            f = TestFunction(args.kind, 0.5, args.width, lam)
            r = smoothing_probe(f, f, curve, ell, args.sigma)
            rows.append({"ell": ell, "freq": lam, "sigma": args.sigma, "value": r.ratio,
                         "bound": float("nan"), "pass": r.converged})
    _emit(args, serialize.csv_text(rows))
    return 0 if all(r["pass"] for r in rows) else 1


def cmd_pipeline(args) -> int:
    E = read_set(args.set)
    p = PipelineParams(T=args.T, tt=args.tt, J=args.J, ell=args.ell, sigma=args.sigma,
                       max_witnesses=args.max)
    try:
        summary = pipeline_endtoend(E, get_curve(args.curve), p)
    except PipelineError as exc:
        _emit(args, serialize.dumps({"passed": False, "failed_stage": exc.stage,
                                     "error": str(exc.cause)}))
        return 1
    _emit(args, serialize.dumps(summary))
    return 0 if summary["passed"] else 1


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curvedroth", description=__doc__.splitlines()[0])
    ap.add_argument("--threads", type=int, default=1, help="worker threads (computations are serial)")
    ap.add_argument("--tol", type=float, default=DEFAULT_TOL, help="slack for inequality checks")
    sub = ap.add_subparsers(dest="cmd", required=True)
    curve_ids = [c.id for c in builtin_catalog()]

    g = sub.add_parser("gen", help="generate a dyadic set file")
    g.add_argument("--mode", choices=["full", "self-similar", "random"], required=True)
    g.add_argument("--N", type=int, default=1)
    g.add_argument("--L", type=int, required=True)
    g.add_argument("--keep", help="child indices, e.g. 0,3 or 0,3;1,2 for a cyclic schedule")
    g.add_argument("--p", type=float, default=0.9)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("content", help="dyadic content, optimal cover and good cube")
    c.add_argument("--set", required=True)
    c.add_argument("--s", type=float, required=True)
    c.add_argument("--J", type=int, default=0)
    c.add_argument("--delta", type=float)
    c.add_argument("--format", choices=["csv", "json"], default="csv")
    c.add_argument("--out")
    c.set_defaults(func=cmd_content)

    m = sub.add_parser("measure", help="build a measure on a set")
    m.add_argument("--set", required=True)
    m.add_argument("--kind", choices=["frostman", "spectral-gap", "counting"], default="spectral-gap")
    m.add_argument("--s", type=float, default=1.0)
    m.add_argument("--T", type=int, default=8)
    m.add_argument("--tt", type=float, default=0.9)
    m.add_argument("--J", type=int, default=0)
    m.add_argument("--out")
    m.set_defaults(func=cmd_measure)

    v = sub.add_parser("verify", help="property checks (JSON or CSV)")
    v.add_argument("--set", required=True)
    v.add_argument("--pipeline", choices=["prop42", "energy", "hf-tail"], required=True)
    v.add_argument("--measure")
    v.add_argument("--T", type=int, default=8)
    v.add_argument("--tt", type=float, default=0.9)
    v.add_argument("--J", type=int, default=0)
    v.add_argument("--A", type=float, default=16.0)
    v.add_argument("--B", type=float, default=256.0)
    v.add_argument("--sigma", type=float, default=0.2)
    v.add_argument("--s-values", default="0.5")
    v.add_argument("--B-values", default="16,64,256")
    v.add_argument("--format", choices=["json", "csv"], default="json")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    ci = sub.add_parser("configint", help="configuration integral and its decomposition")
    ci.add_argument("--set", required=True)
    ci.add_argument("--measure")
    ci.add_argument("--measure-kind", choices=["counting", "spectral-gap"], default="counting")
    ci.add_argument("--T", type=int, default=8)
    ci.add_argument("--curve", choices=curve_ids, default="t2")
    ci.add_argument("--lambda", dest="lam", type=float, default=1.0)
    ci.add_argument("--ell", type=int, required=True)
    ci.add_argument("--eps", type=float)
    ci.add_argument("--eps-ladder", help="k1..k2 for eps = 2^-k")
    ci.add_argument("--A", type=float, required=True)
    ci.add_argument("--B", type=float)
    ci.add_argument("--sigma", type=float, default=0.2)
    ci.add_argument("--tt", type=float, default=0.9)
    ci.add_argument("--out")
    ci.set_defaults(func=cmd_configint)

    s = sub.add_parser("search", help="brute-force pattern witnesses (CSV)")
    s.add_argument("--set", required=True)
    s.add_argument("--curve", choices=curve_ids, default="t2")
    s.add_argument("--lambdas", help="comma list; default 2^{jN}, j = 0..L")
    s.add_argument("--max", type=int, default=10)
    s.add_argument("--t-grid", choices=["dyadic", "exhaustive"], default="dyadic")
    s.add_argument("--out")
    s.set_defaults(func=cmd_search)

    sw = sub.add_parser("sweep", help="one metric over one parameter (CSV)")
    sw.add_argument("--set")
    sw.add_argument("--param", choices=["T", "A", "B"], required=True)
    sw.add_argument("--values", required=True)
    sw.add_argument("--metric", choices=["gap-integral", "frostman-ratio", "proximity-C",
                                         "hf-tail", "energy-ratio"], required=True)
    sw.add_argument("--T", type=int, default=8)
    sw.add_argument("--A", type=float, default=16.0)
    sw.add_argument("--B", type=float, default=256.0)
    sw.add_argument("--tt", type=float, default=0.9)
    sw.add_argument("--sigma", type=float, default=0.2)
    sw.add_argument("--s", type=float, default=0.5)
    sw.add_argument("--out")
    sw.set_defaults(func=cmd_sweep)

    pr = sub.add_parser("probe", help="smoothing-inequality sweep (CSV)")
    pr.add_argument("--curve", choices=curve_ids, default="t2")
    pr.add_argument("--lambda", dest="lam", type=float, default=1.0)
    pr.add_argument("--ells", default="0")
    pr.add_argument("--freqs", default="1,2,4,8")
    pr.add_argument("--sigma", type=float, default=0.1)
    pr.add_argument("--kind", choices=["gauss", "bump"], default="gauss")
    pr.add_argument("--width", type=float, default=0.1)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_probe)

    pl = sub.add_parser("pipeline", help="end-to-end chain on a set file (JSON)")
    pl.add_argument("--set", required=True)
    pl.add_argument("--curve", choices=curve_ids, default="t2")
    pl.add_argument("--T", type=int, default=3)
    pl.add_argument("--tt", type=float, default=0.9)
    pl.add_argument("--J", type=int, default=0)
    pl.add_argument("--ell", type=int, default=5)
    pl.add_argument("--sigma", type=float, default=0.2)
    pl.add_argument("--max", type=int, default=5)
    pl.add_argument("--out")
    pl.set_defaults(func=cmd_pipeline)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (CheckFailed, ConstructionError) as exc:
        sys.stderr.write(f"check failed: {exc}\n")
        return 1
    except (ValueError, KeyError, FileNotFoundError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        parser.print_usage(sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
