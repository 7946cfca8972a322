"""Command line entry point: ``deltakit run <file> ...``.

Exit codes: 0 success, 2 expected-value mismatch (with --check),
3 invalid scenario, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import DeltaKitError, InvalidScenario
from .scenario import bundled, load_scenario, run

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_INTERNAL = 0, 2, 3, 4
_SEVERITY = {EXIT_OK: 0, EXIT_MISMATCH: 1, EXIT_INTERNAL: 2, EXIT_INVALID: 3}


def _load(ref: str):
    if os.path.exists(ref):
        return load_scenario(ref)
    if ref in bundled():
        return bundled(ref)
    raise InvalidScenario(f"{ref}: no such file or bundled scenario")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="deltakit", description="Exact delta-invariant certificates from scenario files.")
    sub = p.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run one or more scenarios")
    r.add_argument("files", nargs="+", metavar="file", help="scenario JSON file, or the name of a bundled scenario")
    r.add_argument("--task", nargs="+", action="extend", default=[], metavar="NAME",
                   help="task key or kind (s_divisor, s_curve, base, f_point, s_point, delta); repeatable")
    r.add_argument("--format", choices=("json", "md", "csv"), default="json")
    r.add_argument("--check", action="store_true", help="run cross checks and compare against expected values")
    r.add_argument("--oracle", action="store_true", help="sample every sweep against the exhaustive Zariski oracle")
    r.add_argument("--samples", type=int, default=1000, help="oracle samples per sweep (default 1000)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--timing", action="store_true", help="include wall time in JSON output")
    sub.add_parser("list", help="list the bundled scenarios")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name in bundled():
            sc = bundled(name)
            print(f"{name}\t{sc.title}")
        return EXIT_OK

    code = EXIT_OK
    reports = []
    for ref in args.files:
        try:
            sc = _load(ref)
        except DeltaKitError as exc:
            print(f"deltakit: {exc}", file=sys.stderr)
            code = max(code, EXIT_INVALID, key=_SEVERITY.get)
            continue
        try:
            rep = run(sc, args.task or None, check=args.check, oracle=args.oracle, samples=args.samples, seed=args.seed)
        except Exception as exc:  # a bug, not bad input
            print(f"deltakit: {ref}: internal error: {exc!r}", file=sys.stderr)
            code = max(code, EXIT_INTERNAL, key=_SEVERITY.get)
            continue
        reports.append(rep)
        code = max(code, rep.exit_code(args.check), key=_SEVERITY.get)
        for k, msg in rep.errors.items():
            print(f"deltakit: {sc.name}: {k}: {msg}", file=sys.stderr)

    if not reports:
        return code
    if args.format == "json":
        docs = [r.to_json(timing=args.timing) for r in reports]
        out = docs[0] if len(docs) == 1 else docs
        sys.stdout.write(json.dumps(out, indent=2, ensure_ascii=False) + "\n")
    elif args.format == "md":
        sys.stdout.write("\n".join(r.to_markdown() for r in reports))
    else:
        for i, r in enumerate(reports):
            text = r.to_csv()
            sys.stdout.write(text if i == 0 else text.split("\n", 1)[1])
    return code


if __name__ == "__main__":
    sys.exit(main())
