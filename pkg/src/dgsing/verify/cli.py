"""Command line entry point: ``dgsing verify --scenario <path> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..engine.windowed import Window
from ..exact.fields import field_from_spec
from .pipeline import FAIL, INCONCLUSIVE, run_pipeline
from .report import emit_report
from .scenario import ScenarioError, builtin_names, builtin_scenario, load_scenario, parse_checks

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3


def build_parser():
    parser = argparse.ArgumentParser(prog="dgsing", description="Windowed verification of Koszul duality identities.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run the checks of one scenario")
    v.add_argument("--scenario", required=True,
                   help=f"scenario file, or the name of a bundled one ({', '.join(builtin_names())})")
    v.add_argument("--window", help="override, e.g. h:-6..4,w:-8..8,d:0..10 (missing axes keep the scenario's)")
    v.add_argument("--field", help="rational or fp:<prime>")
    v.add_argument("--checks", help="comma separated subset of C1..C10")
    v.add_argument("--parallel", type=int, default=1, help="number of checks run at once")
    v.add_argument("--report", help="write the report here instead of stdout")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--timings", action="store_true", help="record wall-clock time per check (breaks byte-identity)")
    return parser


def _load(arg):
    if not Path(arg).exists() and arg in builtin_names():
        return builtin_scenario(arg)
    return load_scenario(arg)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        sc = _load(args.scenario)
        window = Window.parse(args.window, base=sc.window) if args.window is not None else None
        fld = field_from_spec(args.field) if args.field is not None else None
        checks = parse_checks(args.checks) if args.checks is not None else None
        sc = sc.with_overrides(window=window, field=fld, checks=checks)
        if args.parallel < 1:
            raise ScenarioError("--parallel must be at least 1")
    except (ScenarioError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rep = run_pipeline(sc, parallel=args.parallel, timings=args.timings)
    data = emit_report(rep, args.format)
    if args.report:
        with open(args.report, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    verdicts = {c.verdict for c in rep.checks}
    if FAIL in verdicts:
        return EXIT_FAIL
    if INCONCLUSIVE in verdicts:
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
