"""Command-line entry point: ``esn-bench run --config sweep.json [overrides]``.

Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 every trial
in the sweep diverged.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    TASKS,
    ConfigError,
    emit_outputs,
    load_config,
    run_experiment,
)

__all__ = ["main", "entrypoint"]

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_ALL_DIVERGED = 3


class _Parser(argparse.ArgumentParser):
    # route argparse failures through the config-error exit code
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="esn-bench", description="Echo state network benchmark sweeps")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="execute a sweep and write CSV/SVG outputs")
    run.add_argument("--config", help="JSON config file with ExperimentConfig fields")
    run.add_argument("--task", choices=TASKS)
    run.add_argument(
        "--activation",
        action="append",
        dest="activations",
        metavar="NAME",
        help="activation to include (repeatable)",
    )
    run.add_argument("--sizes", help="comma-separated reservoir sizes, e.g. 100,200,400")
    run.add_argument("--trials", type=int)
    run.add_argument("--sigma", type=float)
    run.add_argument("--seed", type=int)
    run.add_argument("--out", dest="out_dir", metavar="DIR")
    run.add_argument("--workers", type=int)
    run.add_argument("--mge-variant", choices=("paper", "standard"), dest="mge_variant")
    return parser


def _parse_sizes(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse sizes {text!r}; expected e.g. 100,200,400") from None


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        overrides = {
            "task": args.task,
            "activations": args.activations,
            "sizes": _parse_sizes(args.sizes) if args.sizes else None,
            "trials": args.trials,
            "sigma": args.sigma,
            "seed": args.seed,
            "out_dir": args.out_dir,
            "workers": args.workers,
            "mge_variant": {"paper": "paper_verbatim", "standard": "standard"}.get(
                args.mge_variant
            ),
        }
        cfg = load_config(args.config, overrides)
        cfg.validate()
        result = run_experiment(cfg)
        paths = emit_outputs(result, cfg)
    except ConfigError as exc:
        print(f"esn-bench: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"esn-bench: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO

    print(f"task={cfg.task} trials={cfg.trials} sigma={cfg.resolved_sigma} seed={cfg.seed}")
    for row in result.medians:
        print(
            f"  {row.activation:<12} size {row.size:>5}  "
            f"median logNMSE {row.median_lognmse: .4f}  ({row.trials} trials)"
        )
    for name, path in sorted(paths.items()):
        print(f"wrote {path}")

    if all(rec.diverged for rec in result.records):
        print("esn-bench: every trial diverged", file=sys.stderr)
        return EXIT_ALL_DIVERGED
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
