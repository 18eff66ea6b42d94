"""Command-line entry point: ``posfunctor {transform,spectrum,gallery,check} ...``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import fields

from .errors import ParseError, PosFunctorError
from .experiments import GALLERY, STRUCTURES, TRANSFORMS, ExperimentConfig, run


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with ExperimentConfig fields")
    common.add_argument("--seed", type=int)
    common.add_argument("--stage-budget", type=int)
    common.add_argument("--code-bound", type=int, help="bound on generated premise codes")
    common.add_argument("--input-bound", type=int, help="sweeps compare inputs below this")
    common.add_argument("--window", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--schedule", dest="schedule_path", help="schedule file")
    common.add_argument("--json", dest="json_out", help="write the JSON report here ('-' = stdout)")
    common.add_argument("--timing", action="store_true",
                        help="record wall-clock time (makes reports non-reproducible)")

    p = argparse.ArgumentParser(prog="posfunctor", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", parents=[common], help="run a transformation and its sweep")
    t.add_argument("which", choices=TRANSFORMS)
    t.add_argument("--operator", dest="operator_path", help="operator listing to transform")
    t.add_argument("--language", help="arities of the structure language, e.g. 2,2")
    t.add_argument("--emit", help="write the transformed operator listing here")

    s = sub.add_parser("spectrum", parents=[common], help="run the pullback pipeline")
    s.add_argument("--corrupt", action="store_true", help="negative control: skip one class")

    g = sub.add_parser("gallery", parents=[common], help="check the example functors")
    g.add_argument("which", choices=GALLERY)
    g.add_argument("--structure", choices=STRUCTURES, help="structure for 'emit'")
    g.add_argument("--emit", help="write the emitted structure file here")

    c = sub.add_parser("check", parents=[common], help="functor laws for a bundle file")
    c.add_argument("bundle", help="functor bundle file")
    c.add_argument("--inverse", dest="inverse_path", help="bundle of a candidate pseudo-inverse")
    return p


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    which = {"spectrum": "pipeline", "check": "bundle"}.get(args.command, getattr(args, "which", None))
    values = {"command": args.command, "which": which}
    if args.command == "check":
        values["operator_path"] = args.bundle
    if getattr(args, "language", None):
        values["language"] = tuple(int(a) for a in args.language.split(","))
    names = {f.name for f in fields(ExperimentConfig)}
    for name in names - {"command", "which", "language"}:
        v = getattr(args, name, None)
        if v is not None and v is not False:
            values[name] = v
    if args.config:
        return ExperimentConfig.from_json(args.config, **values)
    return ExperimentConfig(**values)


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        config = config_from_args(args)
        report = run(config, getattr(args, "emit", None), args.timing)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (PosFunctorError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    summary = sys.stderr if args.json_out == "-" else sys.stdout
    for check in sorted(report.checks, key=lambda c: c.name):
        print(f"{'PASS' if check.ok else 'FAIL'}  {check.name}", file=summary)
    text = report.to_json()
    if args.json_out == "-":
        sys.stdout.write(text)
    elif args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
