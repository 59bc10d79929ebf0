# -*- coding: utf-8 -*-
"""Command-line entry point: test, simulate, bench, scenario-list."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import List, Optional

from mcar_system import bench, data_loader, scenarios, simgen, ustat, utils
from mcar_system.errors import MCARError, TestInapplicableError
from mcar_system.report import Method, TestReport
from mcar_system.result_saver import ResultSaver
from mcar_system.settings import Settings, setup_logging
from mcar_system.testers import TESTER_NAMES, expand_methods, get_tester

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INAPPLICABLE = 2


def _split(value: Optional[str]) -> List[str]:
    return [v.strip() for v in value.split(",") if v.strip()] if value else []


def _pair_table(report: TestReport) -> str:
    lines = [f"   {'kind':<7} {'pair':<28} {'statistic':>14}"]
    for ps in report.pair_stats:
        lines.append(f"   {ps.kind.value:<7} {ps.label():<28} {ps.value:>14.6g}")
    return "\n".join(lines)


def _complete_case_block(m: data_loader.IncompleteMatrix, args) -> str:
    roles = data_loader.classify_columns(m, _split(args.y_cols))
    rows = ustat.complete_case_table(m, roles)
    if not rows:
        return ""
    lines = ["   Y-pairs, zero-filled vs complete-case:"]
    for y_name, r_name, hat, cc in rows:
        cc_text = utils.fmt_sig(cc) if cc is not None else "n/a"
        lines.append(f"   ({y_name}, R[{r_name}])  {hat:.6g}  {cc_text}")
    return "\n".join(lines)


def cmd_test(args, settings: Settings) -> int:
    na = args.na if args.na is not None else settings.get("na_marker")
    alpha = args.alpha if args.alpha is not None else settings.get("alpha")
    m = data_loader.read_csv(args.file, na_marker=na)

    options = settings.get_test_config()
    options.update(transform=args.transform, force_y=_split(args.y_cols))
    if args.df_mode:
        options["df_mode"] = args.df_mode

    reports: List[TestReport] = []
    skipped: List[str] = []
    for name in expand_methods([args.method]):
        tester = get_tester(name, **dict(options))
        try:
            reports.append(tester.run(m))
        except TestInapplicableError as e:
            logger.info("%s not applicable: %s", tester.name, e)
            skipped.append(f"{tester.name}: {e}")

    if not reports:
        for msg in skipped:
            print(f"[ERROR] test not applicable - {msg}", file=sys.stderr)
        return EXIT_INAPPLICABLE

    if args.format == "json":
        payload = []
        for report in reports:
            item = report.to_dict()
            item.update(alpha=alpha, reject=report.rejects(alpha))
            if not args.verbose:
                item.pop("pair_stats")
            payload.append(item)
        print(json.dumps(payload if len(payload) > 1 else payload[0], indent=2))
    else:
        print(f"File: {args.file} (n={m.n}, d={m.d})")
        for report in reports:
            decision = "reject MCAR" if report.rejects(alpha) else "do not reject MCAR"
            print(report.summary())
            print(f"   p={report.p} complete, q={report.q} incomplete; {decision} at alpha={alpha}")
            if args.verbose and report.pair_stats:
                print(_pair_table(report))
                if report.method == Method.A_N_PRIME:
                    block = _complete_case_block(
                        data_loader.transform_columns(m, args.transform), args
                    )
                    if block:
                        print(block)
        for msg in skipped:
            print(f"[SKIP] {msg}")
    return EXIT_OK


def _scenario_from_args(args) -> simgen.ScenarioSpec:
    if args.config:
        spec = scenarios.load_scenario(args.config)
    elif args.scenario:
        spec = scenarios.get_scenario(args.scenario)
    else:
        raise MCARError("simulate needs --scenario or --config.")
    if args.n is not None:
        spec = spec.with_n(args.n)
    if args.rate is not None:
        spec = spec.with_rate(args.rate)
    if args.seed is not None:
        spec = spec.with_seed(args.seed)
    return spec


def cmd_simulate(args, settings: Settings) -> int:
    spec = _scenario_from_args(args)
    m = simgen.run_scenario(spec)
    na = args.na if args.na is not None else settings.get("na_marker")
    path = data_loader.write_csv(m, args.out, na_marker=na)
    logger.info("Wrote %d x %d sample to %s", m.n, m.d, path)
    print(f"Scenario: {spec.name or '(custom)'} n={spec.n} seed={spec.seed}")
    print("Realized missingness per column:")
    for name, frac in data_loader.missingness_summary(m):
        print(f"   {name}: {frac:.4f}")
    return EXIT_OK


def cmd_bench(args, settings: Settings) -> int:
    overrides = {
        "replications": args.replications,
        "master_seed": args.seed,
        "workers": args.workers,
        "methods": _split(args.methods) or None,
        "alpha": args.alpha,
    }
    if args.config:
        cfg = bench.load_bench_config(args.config, **overrides)
    else:
        names = _split(args.scenarios)
        if not names:
            raise MCARError("bench needs --config or --scenarios.")
        profile = args.profile or settings.get("bench_profile")
        if overrides["workers"] is None:
            overrides["workers"] = settings.get("workers")
        cfg = bench.BenchConfig.from_profile(profile, names, **overrides)

    result = bench.run_bench(cfg, progress=not args.no_progress)
    saver = ResultSaver(args.out_dir or settings.get("output_directory"))
    paths = saver.save_bench(result)

    print(bench.summary_table(result))
    print(f"\nResults saved to: {saver.get_output_folder()}")
    for kind, path in paths.items():
        print(f"   {kind}: {path}")

    failed = result.failed_cells()
    if failed:
        for c in failed:
            print(
                f"[ERROR] every replication failed: {c.method} {c.scenario} "
                f"n={c.n} m={c.rate:.2f} {c.failure_kinds}",
                file=sys.stderr,
            )
        return EXIT_ERROR
    return EXIT_OK


def cmd_scenario_list(args, settings: Settings) -> int:
    for spec in scenarios.list_scenarios():
        print(f"{spec.name:<32} {spec.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mcar_system", description="MCAR tests, missing-data simulation and benchmarks."
    )
    p.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ...")
    p.add_argument("--log-format", choices=["text", "json"], default=None)
    sub = p.add_subparsers(dest="command", required=True)

    # --- test ---
    t = sub.add_parser("test", help="Run an MCAR test on a CSV file.")
    t.add_argument("file", help="CSV with a header row.")
    t.add_argument("--na", default=None, help="Missing-value marker (default 'NA').")
    t.add_argument(
        "--method", default="an-prime", choices=list(TESTER_NAMES) + ["all"],
        help="Test to run (default an-prime).",
    )
    t.add_argument("--alpha", type=float, default=None, help="Significance level.")
    t.add_argument("--y-cols", default=None, help="Comma-separated columns forced into Y.")
    t.add_argument(
        "--transform", default="identity", choices=list(data_loader.TRANSFORMS),
    )
    t.add_argument("--df-mode", choices=list(ustat.DF_MODES), default=None)
    t.add_argument("--format", choices=["text", "json"], default="text")
    t.add_argument("--verbose", action="store_true", help="Print the per-pair table.")
    t.set_defaults(func=cmd_test)

    # --- simulate ---
    s = sub.add_parser("simulate", help="Write one amputated sample to CSV.")
    s.add_argument("out", help="Output CSV path.")
    s.add_argument("--scenario", default=None, help="Built-in scenario name.")
    s.add_argument("--config", default=None, help="Scenario file (JSON or YAML).")
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--rate", type=float, default=None)
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--na", default=None)
    s.set_defaults(func=cmd_simulate)

    # --- bench ---
    b = sub.add_parser("bench", help="Monte Carlo size/power study.")
    b.add_argument("--config", default=None, help="Bench file (JSON or YAML).")
    b.add_argument("--scenarios", default=None, help="Comma-separated built-in names.")
    b.add_argument("--profile", choices=sorted(bench.BENCH_PROFILES), default=None)
    b.add_argument("--replications", type=int, default=None)
    b.add_argument("--seed", type=int, default=None, help="Master seed.")
    b.add_argument("--workers", type=int, default=None)
    b.add_argument("--methods", default=None, help="e.g. an-prime,little or all")
    b.add_argument("--alpha", type=float, default=None)
    b.add_argument("--out-dir", default=None, help="Root folder for result files.")
    b.add_argument("--no-progress", action="store_true")
    b.set_defaults(func=cmd_bench)

    # --- scenario-list ---
    sl = sub.add_parser("scenario-list", help="List the built-in scenarios.")
    sl.set_defaults(func=cmd_scenario_list)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = Settings()
    setup_logging(
        args.log_level or settings.get("log_level"),
        args.log_format or settings.get("log_format"),
    )
    try:
        return args.func(args, settings)
    except TestInapplicableError as e:
        print(f"[ERROR] test not applicable - {e}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except (MCARError, OSError) as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
