"""Command line entry point.

`banktone run -c config.yaml` executes the full pipeline; the stage
subcommands (score, index, regress, bounded, leadlag, report) re-run one
stage against the artifacts already in the output directory. Flags
override the matching config keys. Exit codes: 0 success, 2 config
error, 3 data error, 4 numerical error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, pipeline
from .errors import BanktoneError, ConfigError

STAGE_COMMANDS = pipeline.STAGE_ORDER


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="banktone",
        description="Sentiment indices, bounded-expectation inflation "
                    "paths, and spectral lead-lag reports from central "
                    "bank minutes.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("-c", "--config", help="YAML run configuration")
        cmd.add_argument("-o", "--output", help="output directory "
                         "(overrides config and the environment)")
        cmd.add_argument("--methods", help="comma-separated method subset")
        cmd.add_argument("--resample", choices=["linear", "fourier", "none"],
                         help="meeting-to-month resampling scheme")
        cmd.add_argument("--sg-window", type=int,
                         help="smoothing window length (0 disables)")
        cmd.add_argument("--sg-poly", type=int,
                         help="smoothing polynomial order")
        cmd.add_argument("--sg-edge", choices=["wrap", "mirror"],
                         help="smoothing edge handling")
        cmd.add_argument("--keep-harmonics", type=int,
                         help="harmonics kept by the fourier resampler")
        cmd.add_argument("--m", type=float, help="cognitive discount factor")
        cmd.add_argument("--beta", type=float, help="expectation slope")
        cmd.add_argument("--kappa", type=float, help="output-gap slope")
        cmd.add_argument("--alpha-variant", type=int, choices=[1, 2, 3],
                         help="regression variant supplying alpha")
        cmd.add_argument("--bands", help="comma-separated band cutoffs "
                         "(three values map to long,mid,short)")
        cmd.add_argument("--disjoint", action="store_true", default=None,
                         help="non-overlapping band decomposition")
        cmd.add_argument("--x-file", help="lead-lag x series (month,value "
                         "file) or indexed method name")
        cmd.add_argument("--y-file", help="lead-lag y series (month,value "
                         "file) or indexed method name")
        cmd.add_argument("--report-metric", choices=["signed", "abs"],
                         help="distance statistic drawn in the bar figure")
        return cmd

    add("run", "execute every stage and write the run manifest")
    add("score", "score the corpus into per-meeting sentiment values")
    add("index", "turn meeting scores into standardized monthly indices")
    add("regress", "estimate sentiment coefficients on the rational gap")
    add("bounded", "compute bounded expectation and inflation paths")
    add("leadlag", "band-decompose two series and match their extrema")
    add("report", "render figures from the cached stage tables")
    return parser


def overrides_from_args(args: argparse.Namespace) -> dict:
    """Map parsed flags onto the nested config keys they override."""
    over: dict = {}

    def put(path, value):
        node = over
        for key in path[:-1]:
            node = node.setdefault(key, {})
        node[path[-1]] = value

    if args.output is not None:
        put(("output_flag",), args.output)
    if args.methods is not None:
        put(("methods",), [m.strip() for m in args.methods.split(",")
                           if m.strip()])
    if args.resample is not None:
        put(("indexer", "resample"), args.resample)
    if args.sg_window is not None:
        put(("indexer", "sg_window"), args.sg_window)
    if args.sg_poly is not None:
        put(("indexer", "sg_poly"), args.sg_poly)
    if args.sg_edge is not None:
        put(("indexer", "sg_edge"), args.sg_edge)
    if args.keep_harmonics is not None:
        put(("indexer", "keep_harmonics"), args.keep_harmonics)
    if args.m is not None:
        put(("model", "m"), args.m)
    if args.beta is not None:
        put(("model", "beta"), args.beta)
    if args.kappa is not None:
        put(("model", "kappa"), args.kappa)
    if args.alpha_variant is not None:
        put(("model", "alpha_variant"), args.alpha_variant)
    if args.bands is not None:
        put(("bands",), [int(c) for c in args.bands.split(",") if c.strip()])
    if args.disjoint is not None:
        put(("disjoint",), True)
    if args.x_file is not None:
        put(("leadlag", "x"), args.x_file)
    if args.y_file is not None:
        put(("leadlag", "y"), args.y_file)
    if args.report_metric is not None:
        put(("report_metric",), args.report_metric)
    return over


def load_run_config(args: argparse.Namespace) -> pipeline.RunConfig:
    overrides = overrides_from_args(args)
    if args.config:
        return pipeline.load_config(args.config, overrides)
    if args.command == "leadlag" and args.x_file and args.y_file:
        # Standalone mode: two series files need no corpus or config.
        return pipeline.build_config(overrides, base=Path.cwd())
    raise ConfigError("a config file is required (-c/--config) except for "
                      "'leadlag --x-file ... --y-file ...'")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_run_config(args)
        if args.command == "run":
            manifest = pipeline.run(config)
            print(json.dumps(manifest, indent=2, sort_keys=True))
        else:
            runner = pipeline.run_stages(config, (args.command,))
            for stage, counts in sorted(runner.counts.items()):
                for name, rows in sorted(counts.items()):
                    detail = f" ({rows} rows)" if name.endswith(".csv") else ""
                    print(f"{stage}: wrote {name}{detail}")
    except BanktoneError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
