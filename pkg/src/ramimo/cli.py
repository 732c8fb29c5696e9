"""Command-line entry point.

``ramimo run <config>`` executes whatever mode the config declares and
writes its CSV to the configured output path; ``ramimo pattern`` and
``ramimo optimize`` are mode-checked variants, with ``optimize`` printing
the best state to stdout.  Exit codes: 0 success, 1 config error, 2 runtime
error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ConfigError, ValidationError
from .harness import (
    ExperimentConfig,
    SWEEP_MODES,
    apply_overrides,
    format_state_csv,
    parse_config,
    run_optimize,
    run_pattern,
    run_sweep,
    write_pattern,
    write_records,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ramimo",
        description="Reconfigurable-antenna MIMO link experiments: capacity sweeps, "
        "antenna pattern cuts, and quantized state-matrix search.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    specs = (
        ("run", "execute the config's mode and write its CSV output"),
        ("pattern", "dump an antenna pattern cut (config mode must be pattern_dump)"),
        ("optimize", "print the best state matrix (config mode must be optimize)"),
    )
    for name, help_text in specs:
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument("config", help="path to a key = value config file")
        sub.add_argument("--seed", type=int, default=None, help="override master_seed")
        sub.add_argument("--trials", type=int, default=None, help="override trials")
        sub.add_argument("--out", default=None, help="override output_path")
        if name == "run":
            sub.add_argument(
                "--workers", type=int, default=1, help="threads across sweep points (default 1)"
            )
    return parser


def _execute_run(config: ExperimentConfig, workers: int) -> None:
    if config.mode in SWEEP_MODES:
        records = run_sweep(config, workers=workers)
        write_records(records, config.output_path)
        print(f"wrote {len(records)} records to {config.output_path}")
    elif config.mode == "pattern_dump":
        rows = run_pattern(config)
        write_pattern(rows, config.output_path)
        print(f"wrote {len(rows)} pattern points to {config.output_path}")
    else:
        result = run_optimize(config)
        Path(config.output_path).write_text(format_state_csv(result), encoding="utf-8")
        print(
            f"best capacity {result.best_capacity:.9g} bits over "
            f"{result.candidates_evaluated} candidates; state written to {config.output_path}"
        )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        config = parse_config(text)
        config = apply_overrides(config, seed=args.seed, trials=args.trials, out=args.out)
    except (ConfigError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "run":
            _execute_run(config, args.workers)
        elif args.command == "pattern":
            rows = run_pattern(config)
            write_pattern(rows, config.output_path)
            print(f"wrote {len(rows)} pattern points to {config.output_path}")
        else:
            result = run_optimize(config)
            text_out = format_state_csv(result)
            sys.stdout.write(text_out)
            if args.out is not None:
                Path(args.out).write_text(text_out, encoding="utf-8")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - CLI boundary maps everything to exit 2
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
