"""Command-line entry point.

Exit codes: 0 success and feasible, 2 infeasible (or a paper-repro window
missed), 1 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .collision import EnvelopeTruncationError
from .config import ConfigError, RunConfig, load_config, parse_scan
from .eit import SlowLightRegimeError
from .serialize import dumps_json, rows_to_csv, write_text

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE = 0, 1, 2


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="key = value configuration file")
    common.add_argument("--out", type=Path, help="output file (directory for collide)")
    common.add_argument("--format", choices=("csv", "json"), help="output file format")
    common.add_argument("--margin-factor", type=float, dest="margin_factor",
                        help="factor used for the '<<' feasibility checks (default 10)")
    common.add_argument("--grid", type=int, dest="grid_points",
                        help="grid points per axis for two-particle grids (default 512)")

    parser = argparse.ArgumentParser(
        prog="polaritongate",
        description="Conditional phase of colliding Rydberg slow-light polaritons.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="feasibility report")
    sub.add_parser("phase", parents=[common], help="closed-form vs quadrature phase")
    sub.add_parser("collide", parents=[common], help="two-particle grid and figure data")
    scan = sub.add_parser("scan", parents=[common], help="parameter sweep")
    scan.add_argument("--scan", dest="scan", help="FIELD:MIN:MAX:STEPS[:log]")
    scan.add_argument("--homogeneity", action="store_true",
                      help="also evolve the two-particle grid at every step")
    sub.add_parser("paper-repro", parents=[common], help="worked example with expected windows")
    return parser


def _run_config(args) -> RunConfig:
    if args.config is not None:
        run = load_config(args.config)
    elif args.command == "paper-repro":
        run = harness.paper_run_config()
    else:
        raise ConfigError(f"{args.command} requires --config")
    overrides = dict(
        scenario=args.command,
        output_format=args.format,
        output_path=str(args.out) if args.out is not None else None,
        margin_factor=args.margin_factor,
        grid_points=args.grid_points,
    )
    if getattr(args, "scan", None):
        overrides["scan_axis"] = parse_scan(args.scan)
    run = run.with_overrides(**overrides)
    if run.margin_factor <= 0:
        raise ConfigError("margin factor must be positive")
    if run.grid_points < 2:
        raise ConfigError("grid needs at least 2 points")
    return run


def _record_output(run: RunConfig, record: dict) -> None:
    if run.output_path is None:
        return
    if run.output_format == "csv":
        flat = {k: v for k, v in record.items() if not isinstance(v, (dict, list))}
        write_text(run.output_path, rows_to_csv(list(flat), [list(flat.values())]))
    else:
        write_text(run.output_path, dumps_json(record))


def _print_record(record: dict) -> None:
    for key, value in record.items():
        if isinstance(value, float):
            print(f"{key:<24}{value:.6g}")
        elif not isinstance(value, (dict, list)):
            print(f"{key:<24}{value}")


def _cmd_validate(run: RunConfig) -> int:
    report = harness.run_validate(run)
    print(report.table())
    if run.output_path is not None:
        if run.output_format == "csv":
            header = ["name", "relation", "lhs", "rhs", "margin_ratio", "threshold", "pass"]
            rows = [[c.name, c.relation, c.lhs, c.rhs, c.margin_ratio, c.threshold, c.passed]
                    for c in report.checks]
            write_text(run.output_path, rows_to_csv(header, rows))
        else:
            write_text(run.output_path, dumps_json(report.as_dict()))
    return EXIT_OK if report.overall_pass else EXIT_INFEASIBLE


def _cmd_phase(run: RunConfig) -> int:
    record = harness.run_phase(run)
    _print_record(record)
    _record_output(run, record)
    return EXIT_OK if record["feasible"] else EXIT_INFEASIBLE


def _cmd_collide(run: RunConfig) -> int:
    out_dir = run.output_path or "collide_out"
    summary = harness.run_collide(run, out_dir)
    _print_record(summary)
    print(f"files written to {out_dir}")
    return EXIT_OK if summary["feasible"] else EXIT_INFEASIBLE


def _cmd_scan(run: RunConfig, with_homogeneity: bool) -> int:
    if run.scan_axis is None:
        raise ConfigError("scan requires --scan FIELD:MIN:MAX:STEPS[:log] or a 'scan' key")
    rows = harness.run_scan(run, with_homogeneity)
    header, body = harness.scan_table(run, rows, with_homogeneity)
    if run.output_format == "csv":
        text = rows_to_csv(header, body)
    else:
        field = run.scan_axis.field
        text = dumps_json({
            "axis": {"field": field, "start": run.scan_axis.start, "stop": run.scan_axis.stop,
                     "steps": run.scan_axis.steps, "log": run.scan_axis.log},
            "rows": [r.as_dict(field, with_homogeneity) for r in rows],
        })
    if run.output_path is None:
        sys.stdout.write(text)
    else:
        write_text(run.output_path, text)
    return EXIT_OK


def _cmd_paper_repro(run: RunConfig) -> int:
    doc = harness.run_paper_repro(run)
    _print_record(doc["values"])
    for key, w in doc["windows"].items():
        lo = "-inf" if w["low"] is None else f"{w['low']:g}"
        hi = "inf" if w["high"] is None else f"{w['high']:g}"
        print(f"window {key:<16}{w['value']:.6g} in [{lo}, {hi}]: {'PASS' if w['pass'] else 'FAIL'}")
    print(f"feasibility: {'PASS' if doc['feasibility']['overall_pass'] else 'FAIL'}")
    _record_output(run, doc)
    return EXIT_OK if doc["overall_pass"] else EXIT_INFEASIBLE


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        run = _run_config(args)
        if args.command == "validate":
            return _cmd_validate(run)
        if args.command == "phase":
            return _cmd_phase(run)
        if args.command == "collide":
            return _cmd_collide(run)
        if args.command == "scan":
            return _cmd_scan(run, args.homogeneity)
        return _cmd_paper_repro(run)
    except (ConfigError, SlowLightRegimeError, EnvelopeTruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
