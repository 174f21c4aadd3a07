"""Command line interface: ``ars3d validate|locus|crossing|verify|example``.

Exit codes: 0 ok, 1 unreadable or malformed scenario, 2 invalid scenario
or failed check, 3 verification failure, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .crossing import REMAINS, exp_curve_profile, flow_crossing
from .errors import ARSError
from .group import AlgebraElement, GroupElement, group_exp, mul
from .locus import (
    PLANE_STACK,
    LocusFunction,
    F,
    describe_locus,
    locus_points,
)
from .scenario import ScenarioError, bundled, bundled_text, load
from .symmetry import check_derivation, flow
from .verify import FAULTS, SUITES, format_case, run_suite

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INVALID = 2
EXIT_VERIFY = 3
EXIT_USAGE = 64

CSV_RESIDUAL_TOL = 1e-8
EXAMPLE_TOL = 1e-10


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _triple(text: str) -> np.ndarray:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated numbers, got {text!r}")
    if len(vals) != 3 or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected three finite numbers, got {text!r}")
    return np.array(vals)


def _g17(x: float) -> str:
    return "%.17g" % x


def _write_csv(rows, header, out) -> None:
    buf = io.StringIO(newline="")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([v if isinstance(v, (int, str)) else _g17(v) for v in r])
    text = buf.getvalue()
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8", newline="")


def _load_ars(path):
    """``(scenario, ars)`` or an exit code after printing a diagnostic."""
    try:
        sc = load(path)
    except ScenarioError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return None, EXIT_PARSE
    except OSError as exc:
        print(f"parse error: cannot read {path}: {exc.strerror}", file=sys.stderr)
        return None, EXIT_PARSE
    try:
        return (sc, sc.build()), EXIT_OK
    except ARSError as exc:
        print(f"invalid: {type(exc).__name__}: {exc}", file=sys.stderr)
        return None, EXIT_INVALID


def _fmt_vec(v) -> str:
    return "(" + ", ".join(f"{x + 0.0:.6g}" for x in v) + ")"


def _shape_text(desc) -> str:
    if desc.shape == PLANE_STACK:
        count = "infinitely many" if math.isinf(desc.component_count) else str(desc.component_count)
        extra = f", period {desc.period:.12g}" if desc.periodic else ""
        return f"PlaneStack ({count} planes{extra}), connected={desc.connected}"
    return f"GraphOverPlane({desc.param}), connected={desc.connected}"


def cmd_validate(args) -> int:
    loaded, code = _load_ars(args.scenario)
    if loaded is None:
        return code
    sc, sigma = loaded
    th = sigma.theta
    tol = sc.tolerance("constraint", 1e-9)
    res = float(np.max(np.abs(sigma.A @ th.matrix - th.matrix @ sigma.A)))
    desc = describe_locus(LocusFunction(sigma), (args.t_min, args.t_max))
    print(f"scenario: {sc.name or args.scenario}")
    print(f"theta: {th}")
    print(f"derivation: ok (|A theta - theta A| = {res:.3g}, tol {tol:g})"
          if check_derivation(th, sigma.xi, sigma.A, tol) else "derivation: FAILED")
    print(f"LARC: {sigma.larc.reason}")
    print(f"line: direction {_fmt_vec(sigma.line.direction)}, normal {_fmt_vec(sigma.line.normal)}")
    print(f"regular point: t={sigma.witness.t:g}, v={_fmt_vec(sigma.witness.v)}")
    print(f"locus: {_shape_text(desc)}")
    if desc.shape == PLANE_STACK:
        times = ", ".join(f"{t:.12g}" for t in desc.times)
        print(f"plane times in [{args.t_min:g}, {args.t_max:g}]: {times}")
    for note in desc.notes:
        print(f"note: {note}")
    return EXIT_OK


def _locus_rows(sigma, t_min, t_max, samples, span):
    Lf = LocusFunction(sigma)
    desc = describe_locus(Lf, (t_min, t_max))
    pts = locus_points(Lf, (t_min, t_max), samples, span, desc)
    stack = desc.shape == PLANE_STACK
    rows = []
    worst = 0.0
    for p in pts:
        r = F(Lf, p.point)
        worst = max(worst, abs(r))
        row = [p.point.t, p.point.v[0], p.point.v[1], r]
        rows.append(([p.index] if stack else []) + row)
    header = (["plane"] if stack else []) + ["t", "x", "y", "F-residual"]
    return desc, rows, header, worst


def cmd_locus(args) -> int:
    if args.samples < 2:
        raise UsageError("--samples must be at least 2")
    if args.t_max < args.t_min:
        raise UsageError("--t-max must not be smaller than --t-min")
    loaded, code = _load_ars(args.scenario)
    if loaded is None:
        return code
    _, sigma = loaded
    desc, rows, header, worst = _locus_rows(sigma, args.t_min, args.t_max, args.samples, tuple(args.span))
    _write_csv(rows, header, args.out)
    print(f"{_shape_text(desc)}; {len(rows)} points; max |F| = {worst:.3g}", file=sys.stderr)
    if worst > CSV_RESIDUAL_TOL:
        print(f"residual above {CSV_RESIDUAL_TOL:g}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def _transitions(prof):
    """Component before and after each zero, walking away from s = 0."""
    labels = prof.components
    out = []
    for i, z in enumerate(prof.zeros):
        left, right = labels[i], labels[i + 1]
        out.append((right, left) if z < 0 else (left, right))
    return out


def cmd_crossing(args) -> int:
    if args.s_max < args.s_min:
        print("invalid: --s-max is smaller than --s-min", file=sys.stderr)
        return EXIT_INVALID
    loaded, code = _load_ars(args.scenario)
    if loaded is None:
        return code
    _, sigma = loaded
    g = GroupElement.from_array(args.point)
    window = (args.s_min, args.s_max)
    if args.flow:
        prof = flow_crossing(sigma, g, window)
        what = "flow line"
        point_at = lambda s: flow(sigma.theta, sigma.X, s, g)
    else:
        if args.dir is None:
            raise UsageError("give --dir a,w1,w2 or --flow")
        Y = AlgebraElement.from_array(args.dir)
        prof = exp_curve_profile(sigma, g, Y, window)
        what = f"exponential curve along {_fmt_vec(args.dir)}"
        point_at = lambda s: mul(sigma.theta, g, group_exp(sigma.theta, Y.scaled(s)))
    print(f"{what} through t={g.t:g}, v={_fmt_vec(g.v)}, s in [{args.s_min:g}, {args.s_max:g}]")
    print(f"behavior: {prof.behavior}")
    rep = prof.report
    extra = f", form case {rep.form_case}" if rep.form_case else ""
    print(f"classification: {rep.classification}{extra}")
    if prof.best_effort:
        print("note: A = 0, result is best effort (the crossing trichotomy assumes A != 0)")
    if prof.delta is not None:
        print(f"isolated from the locus on 0 < |s| < {prof.delta:.12g}")
    if prof.behavior == REMAINS:
        print("the curve stays inside the singular locus")
    for z, flag, (a, b) in zip(prof.zeros, prof.sign_changes, _transitions(prof)):
        kind = "crossing" if flag else "touch"
        print(f"  {kind} at s = {z:.15g}: {a} -> {b}")
    if args.out:
        Lf = LocusFunction(sigma)
        rows = []
        for s in np.linspace(args.s_min, args.s_max, args.csv_points):
            p = point_at(float(s))
            rows.append([float(s), p.t, p.v[0], p.v[1], F(Lf, p)])
        _write_csv(rows, ["s", "t", "x", "y", "F"], args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.cases < 1:
        raise UsageError("--cases must be positive")
    results = run_suite(args.suite, args.seed, args.cases, args.inject_fault)
    name_w = max(len(r.name) for r in results)
    print(f"seed {args.seed}, {args.cases} cases per property")
    print(f"{'property':<{name_w}}  {'suite':<9} {'cases':>6}  {'max residual':>12}  {'tol':>7}  status")
    failed = []
    for r in results:
        status = "ok" if r.passed else "FAIL"
        print(f"{r.name:<{name_w}}  {r.suite:<9} {r.cases:>6}  {r.max_residual:>12.3e}  {r.tol:>7.0e}  {status}")
        if not r.passed:
            failed.append(r)
    for r in failed:
        print(f"counterexample for {r.name}: {format_case(r.counterexample)}")
    print(f"{len(results) - len(failed)}/{len(results)} properties passed")
    return EXIT_VERIFY if failed else EXIT_OK


def _example_4_3(sigma, out_dir, samples) -> float:
    a, b = sigma.xi
    window = (0.0, 4.0 * math.pi)
    desc, rows, header, worst = _locus_rows(sigma, *window, samples, (-5.0, 5.0))
    _write_csv(rows, header, out_dir / "example_4_3_locus.csv")
    gamma = math.atan2(b, a)
    k = np.arange(-10, 11)
    expected = np.concatenate([2 * (gamma - math.pi * k), 2 * math.pi * k])
    expected = np.unique(np.round(expected[(expected >= -1e-9) & (expected <= window[1] + 1e-9)], 12))
    times = np.array(desc.times)
    print(f"gamma = {gamma:.15g}")
    print("plane times: " + ", ".join(f"{t:.15g}" for t in times))
    print("expected:    " + ", ".join(f"{t:.15g}" for t in expected))
    eq = max((abs(b * math.sin(t) + a * math.cos(t) - a) for t in times), default=0.0)
    if len(times) != len(expected):
        return math.inf
    return max(eq, float(np.max(np.abs(times - expected))) if len(times) else 0.0)


def _example_4_4(sigma, out_dir, samples) -> float:
    print("notice: the example prints theta = [[0, -1], [1, 0]], but its bracket and its field")
    print("        only match theta = [[1, 1], [0, 1]]; the Jordan theta is used here.")
    desc, rows, header, worst = _locus_rows(sigma, -2.0, 2.0, samples, (-5.0, 5.0))
    _write_csv(rows, header, out_dir / "example_4_4_locus.csv")
    print(f"locus: {_shape_text(desc)}")
    return max(abs(2 * r[2] - 3 * (1 - math.exp(r[0]))) for r in rows)


def cmd_example(args) -> int:
    name = {"4.3": "example_4_3", "4.4": "example_4_4"}[args.which]
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{name}.json").write_text(bundled_text(name), encoding="utf-8", newline="\n")
    sigma = bundled(name).build()
    run = _example_4_3 if args.which == "4.3" else _example_4_4
    residual = run(sigma, out_dir, args.samples)
    ok = residual <= EXAMPLE_TOL
    print(f"closed-form residual: {residual:.3g} ({'ok' if ok else 'FAILED'}, tol {EXAMPLE_TOL:g})")
    print(f"wrote {out_dir / (name + '.json')} and {out_dir / (name + '_locus.csv')}")
    return EXIT_OK if ok else EXIT_INVALID


def _default_seed() -> int:
    env = os.environ.get("ARS3D_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"ARS3D_SEED must be an integer, got {env!r}")


def build_parser(seed_default: int = 0) -> Parser:
    p = Parser(prog="ars3d", description="Simple almost-Riemannian structures on 3D solvable Lie groups.")
    p.add_argument("--version", action="version", version=f"ars3d {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    v = sub.add_parser("validate", help="check a scenario file")
    v.add_argument("scenario")
    v.add_argument("--t-min", type=float, default=-2 * math.pi)
    v.add_argument("--t-max", type=float, default=2 * math.pi)
    v.set_defaults(func=cmd_validate)

    lo = sub.add_parser("locus", help="sample the singular locus to CSV")
    lo.add_argument("scenario")
    lo.add_argument("--t-min", type=float, default=-2.0)
    lo.add_argument("--t-max", type=float, default=2.0)
    lo.add_argument("--samples", type=int, default=50, help="grid points per axis (>= 2)")
    lo.add_argument("--span", type=float, nargs=2, default=[-5.0, 5.0], metavar=("LO", "HI"),
                    help="range of the in-plane parameter")
    lo.add_argument("--out", default=None, help="CSV path (default stdout)")
    lo.set_defaults(func=cmd_locus)

    c = sub.add_parser("crossing", help="crossings of an exponential curve or flow line")
    c.add_argument("scenario")
    c.add_argument("--point", type=_triple, required=True, metavar="t,x,y")
    mode = c.add_mutually_exclusive_group(required=True)
    mode.add_argument("--dir", type=_triple, metavar="a,w1,w2")
    mode.add_argument("--flow", action="store_true")
    c.add_argument("--s-min", type=float, default=-3.0)
    c.add_argument("--s-max", type=float, default=3.0)
    c.add_argument("--out", default=None, help="optional CSV of the curve")
    c.add_argument("--csv-points", type=int, default=201)
    c.set_defaults(func=cmd_crossing)

    ve = sub.add_parser("verify", help="run property suites")
    ve.add_argument("--suite", choices=("all",) + SUITES, default="all")
    ve.add_argument("--seed", type=int, default=seed_default)
    ve.add_argument("--cases", type=int, default=100)
    ve.add_argument("--inject-fault", choices=FAULTS, default=None,
                    help="negative control: corrupt the sampled inputs")
    ve.set_defaults(func=cmd_verify)

    ex = sub.add_parser("example", help="reproduce a worked example")
    ex.add_argument("which", choices=("4.3", "4.4"))
    ex.add_argument("--out-dir", default=".")
    ex.add_argument("--samples", type=int, default=50)
    ex.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    try:
        parser = build_parser(_default_seed())
    except UsageError as exc:
        print(f"ars3d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ars3d: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
