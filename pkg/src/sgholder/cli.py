"""Command line runner: `sgholder run <config>`, `sgholder list`, `sgholder plot`.

Configs are TOML; reports are deterministic JSON (same config + seed =>
byte-identical output).  Exit codes: 0 all verdicts pass, 1 violation or
unstable sweep, 2 configuration error.  Wall-clock goes to stderr only.
Set SGHOLDER_THREADS to cap sample-sweep parallelism.
"""

from __future__ import annotations

import argparse
import sys
import time

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

from .errors import ConfigError, SgholderError
from .experiments import REGISTRY, list_experiments, run_experiment
from .reporting import dumps_report, emit_plot_data, write_report


def load_config(path: str) -> dict:
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if "experiment" not in cfg:
        raise ConfigError(f"{path}: missing 'experiment' key")
    return cfg


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.samples is not None:
        cfg["samples"] = args.samples
    if args.out is not None:
        cfg["out"] = args.out
    name = cfg.pop("experiment")
    if "seed" not in cfg:
        raise ConfigError("seed is mandatory (config key or --seed)")
    t0 = time.monotonic()
    report = run_experiment(name, cfg)
    elapsed = time.monotonic() - t0
    out_path = cfg.get("out")
    if out_path:
        write_report(out_path, report)
        print(f"report written to {out_path}", file=sys.stderr)
    else:
        sys.stdout.write(dumps_report(report))
    print(f"{name}: {'PASS' if report['passed'] else 'FAIL'} in {elapsed:.1f}s",
          file=sys.stderr)
    for key, ok in sorted(report["verdicts"].items()):
        if not ok:
            print(f"  violated: {key}", file=sys.stderr)
    return 0 if report["passed"] else 1


def cmd_list(_args) -> int:
    sys.stdout.write(list_experiments())
    return 0


def cmd_plot(args) -> int:
    import json

    with open(args.report, "r", encoding="utf-8") as fh:
        report = json.load(fh)
    csv_text = emit_plot_data(report, args.quantity)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgholder",
        description="desk-scale experiments on semigroup smoothness classes",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a TOML config")
    p_run.add_argument("config")
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--samples", type=int, default=None)
    p_run.add_argument("--out", default=None)
    p_run.set_defaults(fn=cmd_run)

    p_list = sub.add_parser("list", help="list experiments and their claim anchors")
    p_list.set_defaults(fn=cmd_list)

    p_plot = sub.add_parser("plot", help="emit a long-format CSV from a report")
    p_plot.add_argument("report")
    p_plot.add_argument("quantity")
    p_plot.add_argument("--out", default=None)
    p_plot.set_defaults(fn=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SgholderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
