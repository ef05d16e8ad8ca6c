"""Command-line scenario runner.

Commands::

    spindrive run <config>        # execute scenarios, write CSV + audit
    spindrive list-scenarios
    spindrive audit <csv> [...]

Exit status: 0 all audits pass, 2 audit failure, 1 configuration or
runtime error.  CSV output is deterministic: fixed 17-significant-digit
scientific notation, comma separated, no timestamps.
"""

from __future__ import annotations

import argparse
import configparser
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .audit import audit_antiferro_trajectory, audit_csv_columns, audit_spin_columns
from .config import ConfigError, parse_config
from .scenarios import ScenarioResult, run_scenario, scenario_names


def write_csv(path: Path, columns: dict):
    names = list(columns)
    arrays = [np.atleast_1d(np.asarray(columns[k], dtype=float)) for k in names]
    count = len(arrays[0])
    with open(path, "w", newline="") as fh:
        fh.write(",".join(names) + "\n")
        for i in range(count):
            fh.write(",".join(f"{a[i]:.17e}" for a in arrays) + "\n")


def read_csv(path: Path) -> dict:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


def audit_result(result: ScenarioResult):
    data = result.audit_data
    if data.get("kind") == "antiferro":
        return audit_antiferro_trajectory(result.name, data["traj"], data["spec"])
    if data.get("kind") == "spin":
        return audit_spin_columns(result.name, result.columns)
    from .audit import AuditReport
    return AuditReport(result.name)


def run_one(cfg, output_dir: Path):
    result = run_scenario(cfg.scenario, cfg.overrides, with_oracle=cfg.oracle)
    csv_path = output_dir / f"{result.name}.csv"
    write_csv(csv_path, result.columns)
    report = audit_result(result)
    lines = [f"scenario: {result.name}"]
    lines += result.report
    if result.oracle_report is not None and not result.oracle_report.passed:
        lines.append("oracle comparison FAILED")
    lines.append(report.summary())
    (output_dir / f"{result.name}.audit.txt").write_text("\n".join(lines) + "\n")
    ok = report.passed and (result.oracle_report is None
                            or result.oracle_report.passed)
    return result.name, ok, lines


def cmd_run(args) -> int:
    try:
        cfg = parse_config(args.config)
    except (ConfigError, OSError, configparser.Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    all_ok = True
    try:
        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                futures = [pool.submit(run_one, sc, cfg.output_dir)
                           for sc in cfg.scenarios]
                outcomes = [f.result() for f in futures]
        else:
            outcomes = [run_one(sc, cfg.output_dir) for sc in cfg.scenarios]
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for name, ok, lines in outcomes:
        print("\n".join(lines))
        print()
        all_ok = all_ok and ok
    return 0 if all_ok else 2


def cmd_list(_args) -> int:
    for name in scenario_names():
        print(name)
    return 0


def cmd_audit(args) -> int:
    all_ok = True
    for path in args.csv:
        try:
            cols = read_csv(Path(path))
        except Exception as exc:
            print(f"error: {path}: {exc}", file=sys.stderr)
            return 1
        report = audit_csv_columns(Path(path).stem, cols)
        print(report.summary())
        all_ok = all_ok and report.passed
    return 0 if all_ok else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spindrive",
        description="laser-driven spin dynamics scenario runner")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run scenarios from a config file")
    p_run.add_argument("config")
    p_run.set_defaults(func=cmd_run)

    p_list = sub.add_parser("list-scenarios", help="print known scenario names")
    p_list.set_defaults(func=cmd_list)

    p_audit = sub.add_parser("audit", help="re-audit CSV output files")
    p_audit.add_argument("csv", nargs="+")
    p_audit.set_defaults(func=cmd_audit)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
