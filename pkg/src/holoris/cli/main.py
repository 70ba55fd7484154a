"""Command line entry point.

Subcommands: `single` (per-scheme report for one scenario), `heatmap`
(rate-ratio table over a receiver-position grid) and `ccdf` (survival
curves over a randomized receiver ensemble). Exit codes: 0 on success,
2 for configuration errors, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

import numpy as np

from ..exceptions import ConfigError, InvariantViolation
from .config import load_experiment


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holoris",
        description="LoS RIS-aided holographic MIMO link experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--out", help="override the configured output path")
        p.add_argument("--seed", type=int, help="override the configured seed")

    single = sub.add_parser("single", help="evaluate one scenario and print a report")
    common(single)
    single.add_argument("--dump", action="store_true",
                        help="write RIS and covariance matrices per scheme")

    for name, text in (("heatmap", "receiver-position grid of rate ratios"),
                       ("ccdf", "survival curves over a receiver ensemble")):
        p = sub.add_parser(name, help=text)
        common(p)
        p.add_argument("--format", choices=("csv", "json"),
                       help="override the configured output format")
        p.add_argument("--workers", type=int, default=1,
                       help="parallel workers over scenarios")
        p.add_argument("--no-figure", action="store_true",
                       help="skip rendering the companion figure")
    return parser


def _figure_path(output_path: str) -> str:
    stem, _ = os.path.splitext(output_path)
    return stem + ".png"


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = load_experiment(args.config)
        if args.out:
            spec.output_path = args.out
        if args.seed is not None:
            spec.seed = args.seed
            if spec.ensemble is not None:
                spec.ensemble = dataclasses.replace(spec.ensemble, seed=args.seed)
        if getattr(args, "format", None):
            spec.output_format = args.format

        if args.command == "single":
            prefix = None
            if args.dump:
                prefix = os.path.splitext(spec.output_path)[0] if args.out else "single"
            from .experiments import run_single

            report = run_single(spec, dump_prefix=prefix)
            print(report, end="")
            if args.out:
                with open(spec.output_path, "w", encoding="utf-8") as handle:
                    handle.write(report)
        elif args.command == "heatmap":
            from .experiments import run_heatmap

            rows = run_heatmap(spec, workers=args.workers)
            print(f"wrote {len(rows)} rows to {spec.output_path}")
            if not args.no_figure:
                from .figures import render_heatmap

                figure = _figure_path(spec.output_path)
                render_heatmap(rows, figure)
                print(f"wrote figure to {figure}")
        else:
            from .experiments import run_ccdf

            samples = run_ccdf(spec, workers=args.workers)
            print(f"wrote C-CDF over {spec.ensemble.count} samples to {spec.output_path}")
            if not args.no_figure:
                from .figures import render_ccdf

                figure = _figure_path(spec.output_path)
                render_ccdf(samples, figure)
                print(f"wrote figure to {figure}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (InvariantViolation, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
