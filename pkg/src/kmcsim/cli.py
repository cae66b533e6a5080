"""Command-line interface.

Three subcommands: ``simulate`` writes an activity log plus a metadata
sidecar, ``features`` turns a log into the labelled feature table, and
``validate`` checks a config file and reports every violation.

Exit codes: 0 success, 1 invalid content (config violations, malformed
log rows, unknown tokens), 2 I/O failure (unreadable or unwritable
paths).  A run that ends early because nothing can fire is still a
success; the diagnostic goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .config import (
    ConfigError,
    SimulationConfig,
    config_sha256,
    parse_config,
    parse_config_text,
    serialize_config,
    validate_config,
)
from .engine import run
from .features import (
    FeatureError,
    attach_labels,
    extract_features,
    label_table,
    write_features,
)
from .logio import LogFormatError, read_log, write_log

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def _load_config(path: str) -> SimulationConfig:
    return parse_config(path)


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        config = _load_config(args.config)
    except OSError as e:
        return _fail(f"cannot read config: {e}", EXIT_IO)
    except ConfigError as e:
        return _fail(str(e), EXIT_INVALID)

    started = time.perf_counter()
    result = run(config, seed=args.seed)
    wall = time.perf_counter() - started

    try:
        count = write_log(result.events, config.epoch, args.out,
                          header=not args.no_header)
        meta = {
            "seed": result.seed,
            "config_sha256": config_sha256(config),
            "config": serialize_config(config),
            "record_count": count,
            "steps": result.steps,
            "sim_time_days": result.final_sim_time,
            "termination": result.termination,
            "header": not args.no_header,
            "wall_time_s": wall,
        }
        with open(args.out + ".meta.json", "w", encoding="utf-8") as fh:
            json.dump(meta, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as e:
        return _fail(f"cannot write output: {e}", EXIT_IO)

    if result.termination == "no_enabled_events":
        print(
            f"run ended early at t={result.final_sim_time:.6f} days: "
            "no enabled events remain",
            file=sys.stderr,
        )
    print(f"wrote {count} records to {args.out}")
    return EXIT_OK


def cmd_features(args: argparse.Namespace) -> int:
    try:
        config = _load_config(args.config)
    except OSError as e:
        return _fail(f"cannot read config: {e}", EXIT_IO)
    except ConfigError as e:
        return _fail(str(e), EXIT_INVALID)

    try:
        records = read_log(args.log)
    except OSError as e:
        return _fail(f"cannot read log: {e}", EXIT_IO)
    except LogFormatError as e:
        return _fail(str(e), EXIT_INVALID)

    try:
        rows = attach_labels(extract_features(records), label_table(config))
        count = write_features(rows, args.out)
    except FeatureError as e:
        return _fail(str(e), EXIT_INVALID)
    except OSError as e:
        return _fail(f"cannot write features: {e}", EXIT_IO)

    print(f"wrote {count} feature rows to {args.out}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        return _fail(f"cannot read config: {e}", EXIT_IO)

    try:
        config = parse_config_text(text, source=args.config)
    except ConfigError as e:
        return _fail(str(e), EXIT_INVALID)

    violations = validate_config(config)
    if violations:
        for v in violations:
            print(v, file=sys.stderr)
        return EXIT_INVALID

    n_agents = sum(g.count for g in config.population)
    print(f"{args.config}: OK ({n_agents} agents, "
          f"{len(config.archetype_specs)} archetypes, "
          f"max_time {config.max_time_days} days)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kmcsim",
        description="Kinetic Monte Carlo simulator of customer activity "
                    "on a digital finance platform.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a simulation, write the log")
    p_sim.add_argument("--config", required=True, help="config JSON path")
    p_sim.add_argument("--seed", type=int, default=None,
                       help="override the config's seed")
    p_sim.add_argument("--out", required=True, help="output CSV path")
    p_sim.add_argument("--no-header", action="store_true",
                       help="omit the CSV header row")
    p_sim.set_defaults(func=cmd_simulate)

    p_feat = sub.add_parser("features", help="extract the feature table")
    p_feat.add_argument("--log", required=True, help="activity log CSV path")
    p_feat.add_argument("--config", required=True,
                        help="config JSON used to produce the log")
    p_feat.add_argument("--out", required=True, help="output CSV path")
    p_feat.set_defaults(func=cmd_features)

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("--config", required=True, help="config JSON path")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
