"""Command-line interface.

Subcommands: ``compute`` (corpus -> scores.csv), ``correlate`` (scores ->
correlations.csv), ``ratio`` (ratio analysis and group tests), ``simulate``
(spurious-correlation constructions), ``plot`` (SVG figures) and ``bigmac``
(the embedded fixture's statistics).

Exit codes: 0 success, 1 usage error, 2 data/validation error, 3 numerical
failure (non-convergence, degenerate statistics).

``EIGENRANK_SEED`` supplies a default simulation seed when ``--seed`` is
absent; an explicit flag wins.  ``--config PATH`` reads a key=value file
whose keys mirror the chosen subcommand's long flags; explicit flags
override config values.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import os
import sys
from pathlib import Path

import numpy as np

from . import corpus, metrics, report, spurious, stats
from ._util import write_text
from .errors import CsvFormatError, DataError, NumericalError, ValidationError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

SEED_ENV_VAR = "EIGENRANK_SEED"


class _UsageError(Exception):
    def __init__(self, message: str, usage: str = ""):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    # argparse would sys.exit(2) on bad flags; the documented usage exit is 1
    def error(self, message):
        raise _UsageError(message, self.format_usage())


# ---------------------------------------------------------------------------
# parser construction
# ---------------------------------------------------------------------------

def _build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(
        prog="eigenrank",
        description="Citation-network influence metrics and correlation diagnostics.",
        epilog="Global option: --config PATH reads key=value defaults for the "
               f"chosen subcommand; {SEED_ENV_VAR} provides a default --seed.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    by_name: dict[str, _Parser] = {}

    p = by_name["compute"] = sub.add_parser(
        "compute", help="compute per-journal scores from journals.csv + citations.csv")
    p.add_argument("--journals", required=True, help="journals.csv path")
    p.add_argument("--citations", required=True, help="citations.csv path")
    p.add_argument("--census-year", type=int, required=True)
    p.add_argument("--window", type=int, default=5, help="citation window in years")
    p.add_argument("--alpha", type=float, default=metrics.DEFAULT_ALPHA,
                   help="damping factor of the fixed-point iteration")
    p.add_argument("--tol", type=float, default=metrics.DEFAULT_TOL,
                   help="L1 convergence tolerance")
    p.add_argument("--max-iter", type=int, default=metrics.DEFAULT_MAX_ITER)
    p.add_argument("--include-self-cites", action="store_true",
                   help="keep self-citations in the influence network")
    p.add_argument("--exclude-self-cites-counts", action="store_true",
                   help="drop self-citations from impact factor and total citations")
    p.add_argument("--out", default="scores.csv")

    p = by_name["correlate"] = sub.add_parser(
        "correlate", help="correlate two metrics from a scores.csv")
    p.add_argument("--scores", required=True)
    p.add_argument("--x", default="impact_factor", help="x metric name")
    p.add_argument("--y", default="ai", help="y metric name")
    p.add_argument("--log", action="store_true", help="correlate the logs")
    p.add_argument("--by-field", action="store_true",
                   help="one correlation per field label (needs --journals)")
    p.add_argument("--journals", help="journals.csv path for field memberships")
    p.add_argument("--out", default="correlations.csv")

    p = by_name["ratio"] = sub.add_parser(
        "ratio", help="ratio analysis of two metrics, optionally with a group test")
    p.add_argument("--scores", required=True)
    p.add_argument("--numerator", default="ef")
    p.add_argument("--denominator", default="total_citations")
    p.add_argument("--out", default="ratio.csv")
    p.add_argument("--group-by", metavar="FIELD",
                   help="split journals into members of FIELD vs the rest")
    p.add_argument("--journals", help="journals.csv path for field memberships")
    p.add_argument("--test", choices=["mann-whitney"],
                   help="significance test for the --group-by split")
    p.add_argument("--report", default="utest.txt", help="where to write the test report")

    p = by_name["simulate"] = sub.add_parser(
        "simulate", help="spurious-correlation constructions")
    p.add_argument("kind", choices=["ossuary", "yule", "journal-size", "logistic"])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=None,
                   help=f"RNG seed (default: ${SEED_ENV_VAR} or 0)")
    p.add_argument("--n", type=int, default=None,
                   help="draws per trial (default depends on the kind)")
    p.add_argument("--family", choices=list(spurious.FAMILIES), default="lognormal")
    p.add_argument("--cv", type=float, default=0.1,
                   help="coefficient of variation for all ossuary/yule variables")
    p.add_argument("--femur-cv", type=float, default=None)
    p.add_argument("--tibia-cv", type=float, default=None)
    p.add_argument("--humerus-cv", type=float, default=None)
    p.add_argument("--z1-cv", type=float, default=None)
    p.add_argument("--z2-cv", type=float, default=None)
    p.add_argument("--x3-cv", type=float, default=None)
    p.add_argument("--ai-cv", type=float, default=1.785)
    p.add_argument("--if-cv", type=float, default=1.548)
    p.add_argument("--n5-cv", type=float, default=1.910)
    p.add_argument("--r", type=float, default=4.0, help="logistic-map parameter")
    p.add_argument("--x0", type=float, default=0.2, help="logistic-map start point")
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--out", default="simulation.csv")
    p.add_argument("--summary", default="summary.txt")

    p = by_name["plot"] = sub.add_parser("plot", help="render an SVG figure")
    p.add_argument("kind", choices=["slopegraph", "cardinal", "histogram", "ratio"])
    p.add_argument("--out", required=True, help="output .svg path")
    p.add_argument("--width", type=int, default=720)
    p.add_argument("--height", type=int, default=960)
    p.add_argument("--title", default="")
    p.add_argument("--scores", help="scores.csv (slopegraph, cardinal, ratio)")
    p.add_argument("--left", default="total_citations", help="left metric")
    p.add_argument("--right", default="ef", help="right metric")
    p.add_argument("--top-fraction", type=float, default=1.0,
                   help="slopegraph: show this share of the left ranking")
    p.add_argument("--top-k", type=int, default=10, help="cardinal: items shown")
    p.add_argument("--values", help="histogram: CSV file with the value column")
    p.add_argument("--column", default="rho", help="histogram: column to read")
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--numerator", default="ef", help="ratio: numerator metric")
    p.add_argument("--denominator", default="total_citations")

    p = by_name["bigmac"] = sub.add_parser(
        "bigmac", help="statistics of the embedded burger-price/wage table")
    p.add_argument("--export", metavar="PATH", help="also write the table as CSV")

    return parser, by_name


# ---------------------------------------------------------------------------
# --config handling
# ---------------------------------------------------------------------------

def _extract_config_path(argv: list[str]) -> str | None:
    path = None
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--config":
            if i + 1 >= len(argv):
                raise _UsageError("--config requires a path")
            path = argv[i + 1]
            del argv[i:i + 2]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            del argv[i]
        else:
            i += 1
    return path


def _coerce_config_value(action: argparse.Action, key: str, value: str):
    if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
        low = value.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise _UsageError(f"config key {key!r} expects a boolean, got {value!r}")
    try:
        coerced = action.type(value) if action.type else value
    except ValueError:
        raise _UsageError(f"config key {key!r}: cannot parse {value!r}") from None
    if action.choices is not None and coerced not in action.choices:
        raise _UsageError(f"config key {key!r}: {value!r} not in {sorted(action.choices)}")
    return coerced


def _apply_config(argv: list[str], by_name: dict[str, _Parser]) -> None:
    path = _extract_config_path(argv)
    if path is None:
        return
    command = next((tok for tok in argv if not tok.startswith("-")), None)
    sub = by_name.get(command or "")
    if sub is None:
        raise _UsageError("--config requires a recognized subcommand")
    defaults = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise _UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        action = next((a for a in sub._actions if f"--{key}" in a.option_strings), None)
        if action is None:
            raise _UsageError(f"{path}:{lineno}: no flag --{key} on {command!r}")
        defaults[action.dest] = _coerce_config_value(action, key, value)
    sub.set_defaults(**defaults)


# ---------------------------------------------------------------------------
# subcommand implementations
# ---------------------------------------------------------------------------

def _read_text(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_scores(path: str) -> metrics.ScoreTable:
    return metrics.read_scores_csv(_read_text(path))


def _cmd_compute(args) -> int:
    table = corpus.parse_journal_metadata(_read_text(args.journals))
    ledger = corpus.parse_citation_edges(_read_text(args.citations))
    scores, solver = metrics.compute_metrics(
        table, ledger, args.census_year, window=args.window, alpha=args.alpha,
        tol=args.tol, max_iter=args.max_iter,
        exclude_self_influence=not args.include_self_cites,
        exclude_self_counts=args.exclude_self_cites_counts)
    write_text(args.out, metrics.write_scores_csv(scores))
    print(f"wrote {len(scores)} journals to {args.out} "
          f"({solver.iterations} iterations, {solver.dangling_count} dangling)")
    return EXIT_OK


def _pooled_correlation(score_table: metrics.ScoreTable, x_metric: str, y_metric: str,
                        log: bool) -> stats.CorrelationResult:
    x = score_table.metric(x_metric)
    y = score_table.metric(y_metric)
    usable = np.isfinite(x) & np.isfinite(y)
    if log:
        usable &= (x > 0) & (y > 0)
    labels = tuple(jid for jid, ok in zip(score_table.journal_ids, usable) if ok)
    obs = corpus.PairedObservations(labels, x[usable], y[usable], x_metric, y_metric)
    result = stats.log_pearson(obs) if log else stats.pearson(obs)
    return dataclasses.replace(result, excluded=int((~usable).sum()))


def _cmd_correlate(args) -> int:
    score_table = _load_scores(args.scores)
    x_metric = metrics.resolve_metric(args.x)
    y_metric = metrics.resolve_metric(args.y)
    if args.by_field:
        if not args.journals:
            raise _UsageError("--by-field requires --journals")
        table = corpus.parse_journal_metadata(_read_text(args.journals))
        fc = stats.per_field_correlations(score_table, table, x_metric, y_metric,
                                          log=args.log)
        if fc.skipped:
            print("skipped fields (fewer than 3 usable journals): "
                  + ", ".join(fc.skipped))
    else:
        pooled = _pooled_correlation(score_table, x_metric, y_metric, args.log)
        fc = stats.FieldCorrelations(by_field={}, pooled=pooled, skipped=())
    write_text(args.out, stats.write_correlations_csv(fc))
    print(f"pooled rho={fc.pooled.rho:.4f} n={fc.pooled.n}; wrote {args.out}")
    return EXIT_OK


def _cmd_ratio(args) -> int:
    score_table = _load_scores(args.scores)
    num_metric = metrics.resolve_metric(args.numerator)
    den_metric = metrics.resolve_metric(args.denominator)
    ra = stats.ratio_analysis(score_table.metric(num_metric),
                              score_table.metric(den_metric), score_table.journal_ids)
    lines = ["label,raw_ratio,normalized"]
    for label, raw, norm in zip(ra.labels, ra.raw_ratios, ra.normalized):
        lines.append(f"{label},{raw:.8g},{norm:.8g}")
    write_text(args.out, "\n".join(lines) + "\n")
    print(f"{num_metric}/{den_metric}: mean={ra.mean:.6g} sd={ra.std_dev:.6g} "
          f"cv={ra.cv:.4f} excluded={len(ra.excluded)}; wrote {args.out}")
    if not args.group_by:
        return EXIT_OK

    if not args.journals:
        raise _UsageError("--group-by requires --journals")
    table = corpus.parse_journal_metadata(_read_text(args.journals))
    members = set(table.members_of(args.group_by))
    in_group = [r for label, r in zip(ra.labels, ra.raw_ratios) if label in members]
    out_group = [r for label, r in zip(ra.labels, ra.raw_ratios) if label not in members]
    if not in_group or not out_group:
        raise ValidationError(f"field {args.group_by!r} does not split the journals "
                              f"({len(in_group)} vs {len(out_group)})")
    print(f"group {args.group_by!r}: n={len(in_group)} mean={np.mean(in_group):.6g}; "
          f"rest: n={len(out_group)} mean={np.mean(out_group):.6g}")
    if args.test == "mann-whitney":
        result = stats.mann_whitney_u(in_group, out_group)
        write_text(args.report, stats.format_utest_report(
            result, label_a=args.group_by, label_b=f"not-{args.group_by}"))
        print(f"mann-whitney U={result.U:.1f} z={result.z:.4f} "
              f"log10_p={result.log10_p:.4f}; wrote {args.report}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    seed = args.seed if args.seed is not None else int(os.environ.get(SEED_ENV_VAR, "0"))

    def spec_for(override_cv: float | None) -> spurious.DistributionSpec:
        return spurious.spec_from_cv(args.family, override_cv if override_cv is not None
                                     else args.cv)

    if args.kind == "ossuary":
        result = spurious.simulate_ossuary(
            spec_for(args.femur_cv), spec_for(args.tibia_cv), spec_for(args.humerus_cv),
            n_bones=args.n if args.n is not None else 1000,
            trials=args.trials, seed=seed)
    elif args.kind == "yule":
        result = spurious.simulate_yule_products(
            spec_for(args.z1_cv), spec_for(args.z2_cv), spec_for(args.x3_cv),
            n=args.n if args.n is not None else 1000, trials=args.trials, seed=seed)
    elif args.kind == "journal-size":
        result = spurious.simulate_journal_sizes(
            args.ai_cv, args.if_cv, args.n5_cv,
            n_journals=args.n if args.n is not None else 7611,
            trials=args.trials, seed=seed)
    else:  # logistic: deterministic, a single correlation
        n = args.n if args.n is not None else 1_000_000
        rho = spurious.logistic_map_correlation(args.r, args.x0, n, args.burn_in)
        result = spurious.SimulationResult(
            trials=1, rho=[rho], mean_rho=rho, sd_rho=0.0, seed=seed,
            params={"simulation": "logistic", "r": args.r, "x0": args.x0,
                    "n": n, "burn_in": args.burn_in})
    write_text(args.out, spurious.write_simulation_csv(result))
    write_text(args.summary, spurious.format_summary(result))
    print(f"{args.kind}: mean_rho={result.mean_rho:.6f} sd_rho={result.sd_rho:.6f} "
          f"trials={result.trials} seed={result.seed}; wrote {args.out}, {args.summary}")
    return EXIT_OK


def _read_value_column(path: str, column: str) -> list[float]:
    with open(path, encoding="utf-8", newline="") as fh:
        rdr = csv.DictReader(fh)
        if rdr.fieldnames is None or column not in rdr.fieldnames:
            raise CsvFormatError(f"{path}: no column {column!r}")
        values = []
        for row in rdr:
            cell = (row[column] or "").strip()
            if not cell:
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise CsvFormatError(f"{path}: malformed value {cell!r} "
                                     f"in column {column!r}") from None
    return values


def _cmd_plot(args) -> int:
    spec = report.FigureSpec(width=args.width, height=args.height,
                             top_fraction=args.top_fraction, title=args.title)
    if args.kind in ("slopegraph", "cardinal", "ratio") and not args.scores:
        raise _UsageError(f"plot {args.kind} requires --scores")
    if args.kind == "slopegraph":
        cmp = report.rank_comparison(_load_scores(args.scores), args.left, args.right)
        svg = report.render_slopegraph(cmp, spec)
    elif args.kind == "cardinal":
        cmp = report.rank_comparison(_load_scores(args.scores), args.left, args.right)
        svg = report.render_cardinal_plot(cmp, spec, args.top_k)
    elif args.kind == "histogram":
        if not args.values:
            raise _UsageError("plot histogram requires --values")
        svg = report.render_histogram(_read_value_column(args.values, args.column),
                                      args.bins, spec)
    else:
        score_table = _load_scores(args.scores)
        ra = stats.ratio_analysis(score_table.metric(args.numerator),
                                  score_table.metric(args.denominator),
                                  score_table.journal_ids)
        svg = report.render_ratio_plot(ra, spec)
    write_text(args.out, svg)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_bigmac(args) -> int:
    obs = corpus.bigmac_fixture()
    real_wage = obs.y / obs.x

    def describe(name: str, series: np.ndarray) -> str:
        return (f"{name}: mean={series.mean():.2f} sd={series.std(ddof=1):.2f} "
                f"cv={stats.coefficient_of_variation(series):.2f}")

    print(f"rho={stats.pearson(obs).rho:.2f}")
    print(describe("burger_price", obs.x))
    print(describe("hourly_wage", obs.y))
    print(describe("real_wage", real_wage))
    print(f"tercile_median_ratio={stats.tercile_median_ratio(real_wage):.2f}")
    if args.export:
        write_text(args.export, corpus.bigmac_csv())
        print(f"wrote {args.export}")
    return EXIT_OK


_COMMANDS = {
    "compute": _cmd_compute,
    "correlate": _cmd_correlate,
    "ratio": _cmd_ratio,
    "simulate": _cmd_simulate,
    "plot": _cmd_plot,
    "bigmac": _cmd_bigmac,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, by_name = _build_parser()
    try:
        _apply_config(argv, by_name)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help and friends
            return int(exc.code or 0)
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        if exc.usage:
            sys.stderr.write(exc.usage)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:  # parameter outside its mathematical domain
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
