"""Command line interface.

Every ``--depth`` flag is measured in doubled rho-grade (g2) units. For
series with a leading term the window reaches ``depth`` below that term; for
the level-0 p-series and theta series, whose tops sit at or near grade 0,
the window is ``g2 >= -depth``. The spherical solver works in heights, and one
height is two g2 units, so it uses ``depth // 2`` heights.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 math error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from .characters import (
    denominator1,
    denominator2,
    denominator_half,
    denominator_square_check,
    kac_weyl_character,
    orbit_sum,
)
from .lattice import RHO, Weight
from .oracle import oracle_spherical
from .radial import (
    Character1D,
    RadialOperatorSpec,
    apply_radial,
    conjugation_identity_check,
    denominator_identity_check,
    v_identity_check,
)
from .series import TruncatedSeries, equal_on_window
from .spherical import (
    InadmissibleError,
    MathError,
    default_threads,
    eigen_residual_check,
    heun_kzb_numeric_check,
    invariance_and_support_checks,
    solve_spherical,
)
from .theta import (
    ALL_CHARS,
    PI,
    EvalPoint,
    ThetaChar,
    eval_series,
    theta_consistency_check,
    wp_char_numeric,
    wp_identity_check,
    wp_series,
)

DEFAULT_TOL = 1e-8
DEFAULT_Z = "0.3-0.1i"
DEFAULT_TAU = "3i"

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_MATH = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- argument parsing helpers ------------------------------------------------------


def _weight(text: str) -> Weight:
    try:
        a, k, m = (int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weight must be 'a,k,m' with integers, got {text!r}") from None
    return Weight(a, k, m)


def _character(text: str) -> Character1D:
    try:
        return Character1D.parse(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _char(text: str) -> ThetaChar:
    try:
        return ThetaChar.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _depth(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("depth must be non-negative")
    return n


# -- output -------------------------------------------------------------------------


def _numeric(value: complex, tail: float) -> dict:
    return {"re": value.real, "im": value.imag, "tail_bound": tail}


def _report_rows(reports: list[dict]) -> list[list[str]]:
    rows = [["check", "window", "pass", "witness"]]
    for r in reports:
        w = r.get("witness")
        rows.append([str(r.get("check", "")), str(r.get("window", "")), str(r.get("pass", "")).lower(),
                     json.dumps(w, sort_keys=True) if w is not None else ""])
    return rows


def _csv_text(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _emit(args, payload, rows: list[list[str]]) -> None:
    if args.format == "csv":
        text = _csv_text(rows)
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_series(args, f: TruncatedSeries) -> int:
    _emit(args, f.to_json(), f.csv_rows())
    return EXIT_OK


def _emit_reports(args, reports: list[dict], payload=None) -> int:
    _emit(args, reports if payload is None else payload, _report_rows(reports))
    return EXIT_OK if all(r.get("pass") for r in reports) else EXIT_FAIL


# -- subcommands --------------------------------------------------------------------


def cmd_wp_series(args) -> int:
    if args.ypow not in (1, 2) or args.qpow not in (1, 2):
        raise UsageError("--ypow and --qpow must be 1 or 2")
    return _emit_series(args, wp_series(args.char, args.ypow, args.qpow, -args.depth))


def cmd_theta_check(args) -> int:
    return _emit_reports(args, theta_consistency_check(-args.depth))


def cmd_denominator(args) -> int:
    top = {"1": RHO, "2": RHO * 2, "half": RHO}[args.which]
    fn = {"1": denominator1, "2": denominator2, "half": denominator_half}[args.which]
    return _emit_series(args, fn(top.g2 - args.depth))


def cmd_orbit_sum(args) -> int:
    return _emit_series(args, orbit_sum(args.lambda_, args.lambda_.g2 - args.depth))


def cmd_character(args) -> int:
    return _emit_series(args, kac_weyl_character(args.lambda_, args.lambda_.g2 - args.depth))


def _read_series(path: str) -> TruncatedSeries:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        if isinstance(obj, dict) and "series" in obj and "terms" not in obj:
            obj = obj["series"]
        return TruncatedSeries.from_json(obj)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read series from {path}: {exc}") from None


def cmd_radial_apply(args) -> int:
    f = _read_series(args.input)
    if args.echo:
        return _emit_series(args, f)
    floor = None
    if args.depth is not None and f.terms:
        floor = f.g2_ceil - args.depth
    spec = RadialOperatorSpec(args.eta, args.chi, args.conjugated)
    return _emit_series(args, apply_radial(spec, f, floor))


CONJUGATION_PAIRS = [((0, 0), (0, 0)), ((1, 1), (1, 1)), ((2, 0), (0, 0)), ((1, 3), (1, 1))]
CONJUGATION_WEIGHTS = [Weight(0, 0, 0), Weight(0, 1, 0), Weight(1, 1, 0), Weight(2, 2, 0), Weight(0, 0, 1), Weight(2, 2, -1)]


def identity_suite(depth: int, threads: int | None = None) -> list[dict]:
    """Every exact identity at window g2 >= -depth, in a fixed order."""
    floor = -depth
    jobs = [
        lambda: wp_identity_check(floor),
        lambda: theta_consistency_check(floor),
        lambda: [denominator_square_check(floor)],
        lambda: denominator_identity_check(floor),
        lambda: [v_identity_check(floor)],
    ]
    for eta, chi in CONJUGATION_PAIRS:
        spec = RadialOperatorSpec(Character1D(*eta), Character1D(*chi))
        jobs.append(lambda spec=spec: conjugation_identity_check(spec, CONJUGATION_WEIGHTS, floor))
    with ThreadPoolExecutor(max_workers=threads or default_threads()) as pool:
        chunks = list(pool.map(lambda job: job(), jobs))
    return [r for chunk in chunks for r in chunk]


def cmd_identity_suite(args) -> int:
    return _emit_reports(args, identity_suite(args.depth))


def cmd_spherical(args) -> int:
    heights = args.depth // 2
    result = solve_spherical(args.lambda_, args.eta, args.chi, heights)
    checks = [eigen_residual_check(result)]
    if args.check_invariance:
        checks.extend(invariance_and_support_checks(result))
    if args.oracle:
        o = oracle_spherical(args.lambda_, args.eta, args.chi, min(heights, 3))
        ok, rep = equal_on_window(result.series.truncate(o.g2_floor), o)
        entry = {"check": "oracle_agreement", "window": o.g2_floor, "pass": ok}
        if "witness" in rep:
            entry["witness"] = rep["witness"]
        checks.append(entry)
    if args.heun_check:
        checks.append(heun_kzb_numeric_check(result, [EvalPoint(args.z, args.tau)], args.tol))
    payload = result.to_json()
    payload["checks"] = checks
    _emit(args, payload, result.series.csv_rows())
    return EXIT_OK if all(c["pass"] for c in checks) else EXIT_FAIL


def cmd_wp_eval(args) -> int:
    p = EvalPoint(args.z, args.tau)
    if not p.in_domain_D:
        print(f"warning: z={args.z} lies outside the convergence strip for tau={args.tau}", file=sys.stderr)
    chars = [args.char] if args.char else ALL_CHARS
    out, ok = [], True
    for c in chars:
        value, tail = eval_series(wp_series(c, 1, 1, -args.depth), p)
        series_value = 4 * PI**2 * value
        lattice, err = wp_char_numeric(c, args.z, args.tau, min(args.tol, 1e-12))
        diff = abs(series_value - lattice)
        ok = ok and diff < args.tol
        out.append({
            "char": str(c),
            "series": _numeric(series_value, 4 * PI**2 * tail),
            "lattice": _numeric(lattice, err),
            "difference": diff,
            "pass": diff < args.tol,
        })
    rows = [["char", "series_re", "series_im", "series_tail", "lattice_re", "lattice_im", "difference", "pass"]]
    for r in out:
        s, l = r["series"], r["lattice"]
        rows.append([r["char"], repr(s["re"]), repr(s["im"]), repr(s["tail_bound"]), repr(l["re"]), repr(l["im"]),
                     repr(r["difference"]), str(r["pass"]).lower()])
    _emit(args, out, rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_heun_eval(args) -> int:
    result = solve_spherical(args.lambda_, args.eta, args.chi, args.depth // 2)
    report = heun_kzb_numeric_check(result, [EvalPoint(args.z, args.tau)], args.tol)
    rows = [["z_re", "z_im", "tau_re", "tau_im", "residual", "tail_estimate"]]
    for r in report["points"]:
        rows.append([repr(r["z"][0]), repr(r["z"][1]), repr(r["tau"][0]), repr(r["tau"][1]), repr(r["residual"]),
                     repr(r["tail_estimate"])])
    _emit(args, report, rows)
    return EXIT_OK if report["pass"] else EXIT_FAIL


# -- parser -------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: usage: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="casimir-lab", description="Exact q-series tools for affine sl2 (depths in g2 units).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    def point(p, tol=DEFAULT_TOL):
        p.add_argument("--z", type=_complex, default=_complex(DEFAULT_Z))
        p.add_argument("--tau", type=_complex, default=_complex(DEFAULT_TAU))
        p.add_argument("--tol", type=float, default=tol)

    def characters(p):
        p.add_argument("--eta", type=_character, default=Character1D(0, 0), help="b0,b1")
        p.add_argument("--chi", type=_character, default=Character1D(0, 0), help="a0,a1")

    p = add("wp-series", cmd_wp_series, "normalized p-series P_ij = p_ij / (4 pi^2)")
    p.add_argument("--char", type=_char, required=True)
    p.add_argument("--ypow", type=int, default=1)
    p.add_argument("--qpow", type=int, default=1)
    p.add_argument("--depth", type=_depth, default=20)

    p = add("theta-check", cmd_theta_check, "theta sum form against product form")
    p.add_argument("--depth", type=_depth, default=40)

    p = add("denominator", cmd_denominator, "Weyl denominators")
    p.add_argument("--which", choices=("1", "2", "half"), required=True)
    p.add_argument("--depth", type=_depth, default=20)

    for name, fn, text in (("orbit-sum", cmd_orbit_sum, "W-orbit sum of a dominant weight"),
                           ("character", cmd_character, "Kac-Weyl character")):
        p = add(name, fn, text)
        p.add_argument("--lambda", dest="lambda_", type=_weight, required=True)
        p.add_argument("--depth", type=_depth, default=20)

    p = add("radial-apply", cmd_radial_apply, "apply the radial operator to a JSON series")
    characters(p)
    p.add_argument("--conjugated", action="store_true")
    p.add_argument("--input", required=True)
    p.add_argument("--depth", type=_depth, default=None)
    p.add_argument("--echo", action="store_true", help="re-emit the input series unchanged")

    p = add("identity-suite", cmd_identity_suite, "run every exact identity check")
    p.add_argument("--depth", type=_depth, default=20)

    p = add("spherical", cmd_spherical, "solve for a spherical function")
    p.add_argument("--lambda", dest="lambda_", type=_weight, required=True)
    characters(p)
    p.add_argument("--depth", type=_depth, default=12)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--check-invariance", action="store_true")
    p.add_argument("--heun-check", action="store_true")
    point(p)

    p = add("wp-eval", cmd_wp_eval, "evaluate P_ij series against the lattice function")
    p.add_argument("--char", type=_char, default=None)
    # the P10/P11 series decay like |y|^-1 per two grade units; 100 keeps the default point below 1e-8
    p.add_argument("--depth", type=_depth, default=100)
    point(p)

    p = add("heun-eval", cmd_heun_eval, "numeric Heun-KZB eigen-check")
    p.add_argument("--lambda", dest="lambda_", type=_weight, required=True)
    characters(p)
    p.add_argument("--depth", type=_depth, default=80)
    point(p)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: usage: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MathError, ValueError, ArithmeticError) as exc:
        kind = "inadmissible" if isinstance(exc, InadmissibleError) else type(exc).__name__
        print(f"error: math: {kind}: {exc}", file=sys.stderr)
        return EXIT_MATH


def main() -> None:
    raise SystemExit(run())
