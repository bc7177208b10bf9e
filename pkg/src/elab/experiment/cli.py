"""Command line interface.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import pipeline
from .config import ConfigError, ExperimentConfig, load_config, resolve_threads

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2

COMMANDS = {
    "instances": "enumerate instances and write instances.json",
    "sample": "write the shared LHS designs",
    "features": "compute feature vectors (resumable) and write features.csv",
    "compare": "KS / EMD comparisons, scaler and rejection curves",
    "sensitivity": "sensitivity matrix and rotation differences",
    "project": "2-D projection fitted on the original problems",
    "plot": "render the SVG figures",
    "run-all": "run every stage in order",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _problems(text: str) -> tuple:
    try:
        vals = tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of problem ids, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty problem list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="elab", description="Transformed benchmark instances and their landscape features.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    for name, help_text in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", metavar="PATH",
                       help="experiment config JSON (or a run manifest); defaults apply when omitted")
        p.add_argument("--problems", type=_problems, metavar="IDS", help="comma-separated problem ids, e.g. 1,3")
        p.add_argument("--reps", type=int, metavar="N", help="repetitions per instance (>= 10)")
        p.add_argument("--threads", type=int, metavar="N",
                       help="worker processes; overrides ELAB_THREADS and the config")
        p.add_argument("--out-dir", metavar="DIR", help="run directory; overrides the config")
        p.add_argument("--resume", action=argparse.BooleanOptionalAction, default=True,
                       help="reuse completed feature vectors in the run directory (default: on)")
        if name in ("features", "run-all"):
            p.add_argument("--wide", action="store_true",
                           help="also write features_wide.csv with one row per feature vector")
    return parser


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    return cfg.with_overrides(problems=args.problems, repetitions=args.reps, out_dir=args.out_dir)


def execute(args) -> None:
    cfg = _config(args)
    threads = resolve_threads(cfg, args.threads)
    if threads < 1:
        raise ConfigError("threads must be >= 1")
    if args.command == "run-all":
        pipeline.run(cfg, threads=threads, resume=args.resume)
        if args.wide:
            pipeline.write_wide(cfg, cfg.out_dir)
        return
    out = pipeline.prepare(cfg, resume=args.resume)
    descs = pipeline.instances(cfg)
    if args.command == "instances":
        pipeline.stage_instances(cfg, out)
    elif args.command == "sample":
        pipeline.stage_sample(cfg, out)
    elif args.command == "features":
        pipeline.stage_instances(cfg, out)
        pipeline.stage_features(cfg, out, threads, args.resume, descs)
        if args.wide:
            pipeline.write_wide(cfg, out)
    else:
        if not (out / "features.csv").exists():
            raise FileNotFoundError(f"{out / 'features.csv'} not found; run the features stage first")
        if args.command == "compare":
            pipeline.stage_compare(cfg, out, descs)
        elif args.command == "sensitivity":
            pipeline.stage_sensitivity(cfg, out, descs)
        elif args.command == "project":
            pipeline.stage_project(cfg, out)
        elif args.command == "plot":
            pipeline.stage_plot(cfg, out)
    pipeline.write_manifest(cfg, out, descs)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        execute(args)
    except ConfigError as exc:
        print(f"elab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"elab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
