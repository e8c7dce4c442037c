"""Command line front end: run verification scenarios, emit a JSON report.

Exit codes: 0 all checks passed, 1 at least one check failed, 2 invalid
configuration or usage.  The report is deterministic for a fixed
configuration: fixed seeds, sorted keys, no timing data.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .reduction import run_scenario_suite
from .scenarios import make_scenario, scenario_names

SCHEMA_VERSION = 1


@dataclass
class RunConfig:
    """Validated configuration of one verification run."""

    scenarios: list = field(default_factory=scenario_names)
    n: int | None = None
    samples: int = 64
    tangents: int = 8
    tol: float = 1e-8
    seed: int = 42
    out: str | None = "verification_report.json"
    quiet: bool = False

    def validate(self):
        known = scenario_names()
        for name in self.scenarios:
            if name not in known:
                raise ValueError(f"unknown scenario {name!r}; known: {', '.join(known)}")
        if not self.scenarios:
            raise ValueError("no scenarios selected")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.tangents < 1:
            raise ValueError("tangents must be >= 1")
        if not self.tol > 0:
            raise ValueError("tolerance must be positive")
        if self.n is not None and self.n < 1:
            raise ValueError("n must be >= 1")
        return self


def run_verify(config: RunConfig) -> tuple[dict, int]:
    """Run the suite for each configured scenario; return (report, exit code)."""
    config.validate()
    results = []
    all_pass = True
    for name in config.scenarios:
        scenario = make_scenario(name, config.n)
        report = run_scenario_suite(
            scenario,
            samples=config.samples,
            tangents=config.tangents,
            tol=config.tol,
            seed=config.seed,
        )
        results.append(report)
        all_pass = all_pass and report.passed
        if not config.quiet:
            for line in report.summary_lines():
                print(line)
            print(f"{'PASS' if report.passed else 'FAIL'} scenario {name}")
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": "cosphere",
        "config": {
            "scenarios": list(config.scenarios),
            "n": config.n,
            "samples": config.samples,
            "tangents": config.tangents,
            "tol": config.tol,
            "seed": config.seed,
        },
        "results": [r.to_dict() for r in results],
        "pass": all_pass,
    }
    if config.out:
        with open(config.out, "w") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        if not config.quiet:
            print(f"report written to {config.out}")
    if not config.quiet:
        print(f"overall: {'PASS' if all_pass else 'FAIL'}")
    return doc, 0 if all_pass else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cosphere",
        description="Numerical verification of contact reduction on cosphere bundles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run verification scenarios")
    v.add_argument(
        "names",
        nargs="+",
        help=f"scenario names or 'all'; known: {', '.join(scenario_names())}",
    )
    v.add_argument("--n", type=int, default=None, help="manifold size where applicable")
    v.add_argument("--samples", type=int, default=64, help="sample points per check")
    v.add_argument("--tol", type=float, default=1e-8, help="reduction identity tolerance")
    v.add_argument("--seed", type=int, default=42, help="base random seed")
    v.add_argument("--out", default="verification_report.json", help="report path ('-' disables)")
    v.add_argument("--quiet", action="store_true", help="suppress per-check output")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    names = list(args.names)
    if len(names) == 1 and names[0] == "all":
        names = scenario_names()
    config = RunConfig(
        scenarios=names,
        n=args.n,
        samples=args.samples,
        tol=args.tol,
        seed=args.seed,
        out=None if args.out == "-" else args.out,
        quiet=args.quiet,
    )
    try:
        _, code = run_verify(config)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
