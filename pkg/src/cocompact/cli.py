"""``cocompact`` command line.

Exit codes: 0 success, 1 acceptance failure, 2 invalid input (parse errors,
non-perfect maps, malformed certificates), 3 budget exceeded, 4 inconsistent
entropy report.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import acceptance
from .compactify import X_INF, CompactTypeMetric, classify_endpoints, conjugate, extend
from .config import RunConfig
from .corpus import resolve_map
from .covers import cover_entropy_sequence
from .entropy import bowen_counts, convert_log
from .errors import BudgetExceeded, CocompactError
from .horseshoe import HorseshoeCertificate, entropy_lower_bound, search, verify, verified
from .intervals import Interval
from .plmap import classify_ends, is_perfect
from .report import entropy_report, load_cover

EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_BUDGET, EXIT_INCONSISTENT = 1, 2, 3, 4


def _window(text: str) -> tuple[Fraction, Fraction]:
    try:
        lo, hi = (Fraction(v.strip()) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must look like 'lo,hi', got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"window {text!r} is empty")
    return lo, hi


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _add_map_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", required=True, help="corpus:NAME or path to a map-spec JSON file")
    p.add_argument("--m", type=int, default=1, help="size parameter of corpus:example5")
    p.add_argument("--log-base", choices=("e", "2", "10"), default="e")
    p.add_argument("--budget", type=int, default=None, help="breakpoint budget for iterates")
    p.add_argument("--out", default=None, help="write JSON here instead of stdout")


def _config(args, **extra) -> RunConfig:
    return RunConfig(map_source=args.map, m=args.m, log_base=args.log_base, budget=args.budget, **extra)


def cmd_entropy_report(args) -> int:
    extra = {}
    for name in ("lap_n_max", "bowen_n_max", "horseshoe_n_max", "cover_n_max", "grid_step"):
        if getattr(args, name) is not None:
            extra[name] = getattr(args, name)
    if args.eps:
        extra["eps"] = tuple(sorted(args.eps, reverse=True))
    if args.window:
        extra["windows"] = tuple((float(lo), float(hi)) for lo, hi in args.window)
    if args.metrics:
        extra["metrics"] = tuple(args.metrics)
    config = _config(args, cover_source=args.cover, **extra)
    f = resolve_map(config.map_source, config.m)
    report = entropy_report(f, config)
    _emit(report.dumps(), args.out)
    if args.csv_dir:
        d = Path(args.csv_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "laps.csv").write_text(report.lap_series.to_csv(), encoding="utf-8")
        (d / "cover.csv").write_text(report.cover_series.to_csv(), encoding="utf-8")
    return 0 if report.consistent else EXIT_INCONSISTENT


def cmd_horseshoe(args) -> int:
    config = _config(args)
    f = resolve_map(config.map_source, config.m)
    if args.verify:
        cert = HorseshoeCertificate.from_json(Path(args.verify).read_text(encoding="utf-8"))
        ok = verify(f, cert, config.budget)
        doc = {"verified": ok, "n": cert.n, "p": cert.p, "certificate": cert.to_json()}
        if ok:
            doc["certificate"]["verified"] = True
            doc["lower_bound"] = entropy_lower_bound(verified(f, cert)).to_json(config.log_base)
    else:
        cert = search(f, args.n_max, args.lambda_target, config.budget)
        doc = {"found": cert is not None, "n_max": args.n_max}
        if cert is not None:
            doc["certificate"] = cert.to_json()
            doc["lower_bound"] = entropy_lower_bound(cert).to_json(config.log_base)
    _emit(_dumps(doc), args.out)
    return 0


def cmd_cover_series(args) -> int:
    config = _config(args)
    f = resolve_map(config.map_source, config.m)
    series = cover_entropy_sequence(f, load_cover(args.cover), args.n_max, config.cover_budget)
    if args.csv:
        Path(args.csv).write_text(series.to_csv(), encoding="utf-8")
    doc = {"N_n": series.counts, "a_n_over_n": [convert_log(r, config.log_base) for r in series.ratios],
           "estimate": convert_log(max(0.0, series.estimate), config.log_base),
           "direction": series.direction, "method": "cover",
           "subadditivity_violations": series.subadditivity_violations()}
    _emit(_dumps(doc), args.out)
    return 0


def cmd_bowen_series(args) -> int:
    config = _config(args)
    f = resolve_map(config.map_source, config.m)
    lo, hi = args.window
    spanning, separated = bowen_counts(f, args.metric, Interval(lo, hi), args.eps, args.n_max, args.grid_step)
    if args.csv:
        Path(args.csv).write_text(separated.to_csv(), encoding="utf-8")
    doc = {"separated": separated.to_json(), "spanning": spanning.to_json(),
           "slope": convert_log(max(0.0, separated.slope), config.log_base), "method": "bowen-separated",
           "direction": "estimate"}
    _emit(_dumps(doc), args.out)
    return 0


def cmd_compactify_info(args) -> int:
    config = _config(args)
    f = resolve_map(config.map_source, config.m)
    metric = CompactTypeMetric()
    doc = {"end_class": classify_ends(f).value, "endpoint_behavior": classify_endpoints(f).value,
           "perfect": is_perfect(f)}
    if is_perfect(f):
        g = conjugate(f)
        try:
            g = extend(g)
            doc["g(0)"], doc["g(1)"] = g.g0, g.g1
        except CocompactError as exc:
            doc["extension"] = str(exc)
        doc["samples"] = [{"t": t, "g(t)": g(t)} for t in (0.25, 0.5, 0.75)]
    doc["distance_to_infinity"] = {str(x): metric(x, X_INF) for x in args.points}
    _emit(_dumps(doc), args.out)
    return 0


def cmd_check(args) -> int:
    numbers = None
    if args.suite != "all":
        numbers = [int(v) for v in args.suite.split(",")]
    results = acceptance.run_suite(args.seed, numbers)
    for r in results:
        print(r.line())
    if args.out:
        Path(args.out).write_text(acceptance.dumps(results, args.seed), encoding="utf-8")
    return 0 if all(r.passed for r in results) else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cocompact", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("entropy-report", help="all entropy estimates for one map")
    _add_map_args(p)
    p.add_argument("--cover", default=None, help="cover-spec JSON (default: R minus [-1,1], R minus [2,4])")
    p.add_argument("--lap-n-max", type=int)
    p.add_argument("--bowen-n-max", type=int)
    p.add_argument("--horseshoe-n-max", type=int)
    p.add_argument("--cover-n-max", type=int)
    p.add_argument("--grid-step", type=float)
    p.add_argument("--eps", type=float, action="append")
    p.add_argument("--metrics", nargs="+", choices=("euclid", "circle"))
    p.add_argument("--window", type=_window, action="append", help="lo,hi (repeatable)")
    p.add_argument("--csv-dir", default=None)
    p.set_defaults(func=cmd_entropy_report)

    p = sub.add_parser("horseshoe", help="verify or search for horseshoe certificates")
    _add_map_args(p)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--verify", metavar="CERT", help="certificate JSON to check")
    mode.add_argument("--search", action="store_true")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--lambda-target", type=float, default=None)
    p.set_defaults(func=cmd_horseshoe)

    p = sub.add_parser("cover-series", help="minimal subcover counts of the join sequence")
    _add_map_args(p)
    p.add_argument("--cover", default=None)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_cover_series)

    p = sub.add_parser("bowen-series", help="greedy (n, eps)-separated counts")
    _add_map_args(p)
    p.add_argument("--metric", choices=("euclid", "circle"), default="euclid")
    p.add_argument("--window", type=_window, default=(Fraction(0), Fraction(1)))
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--n-max", type=int, default=8)
    p.add_argument("--grid-step", type=float, default=1 / 16384)
    p.add_argument("--csv", default=None)
    p.set_defaults(func=cmd_bowen_series)

    p = sub.add_parser("compactify-info", help="end classes, extension to [0, 1], chord distances")
    _add_map_args(p)
    p.add_argument("--points", type=Fraction, nargs="*", default=[Fraction(0), Fraction(1)])
    p.set_defaults(func=cmd_compactify_info)

    p = sub.add_parser("check", help="run the acceptance suite")
    p.add_argument("--suite", default="all", help="'all' or comma-separated criterion numbers")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CocompactError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
