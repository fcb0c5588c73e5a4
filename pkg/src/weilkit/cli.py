"""Command line: ``weilkit run``, ``weilkit restrict`` and ``weilkit corpus``."""

import argparse
import json
import sys
from pathlib import Path

from .config import overrides
from .dsl import Command, DSLError, parse_session
from .report import dumps, exit_code
from .runner import run_command, run_session

USAGE_ERROR = 2


def _budget_flags(parser):
    parser.add_argument("--point-budget", type=int, help="max assignments per enumeration")
    parser.add_argument("--gb-degree-cap", type=int, help="max S-polynomial degree in Buchberger")
    parser.add_argument("--height-bound", type=int, help="max root height searched over QQ")


def _options(args):
    return {"point_budget": args.point_budget, "gb_degree_cap": args.gb_degree_cap,
            "height_bound": args.height_bound}


def _load(path, options):
    text = Path(path).read_text(encoding="utf-8")
    with overrides(**options):
        return parse_session(text, {k: v for k, v in options.items() if v is not None})


def _parse_or_exit(path, options):
    try:
        return _load(path, options)
    except DSLError as exc:
        print(f"{path}:{exc.line}:{exc.column}: {exc.kind}: {exc.message}"
              + (f" (expected one of: {', '.join(exc.expected)})" if exc.expected else ""),
              file=sys.stderr)
        sys.exit(USAGE_ERROR)
    except OSError as exc:
        print(f"{path}: {exc.strerror}", file=sys.stderr)
        sys.exit(USAGE_ERROR)


def cmd_run(args):
    session = _parse_or_exit(args.file, _options(args))
    reports = run_session(session)
    sys.stdout.write(dumps(reports, timing=not args.no_timing))
    return exit_code(reports)


def cmd_restrict(args):
    session = _parse_or_exit(args.file, _options(args))
    decl = session.declarations.get(args.scheme)
    if decl is None or decl.kind != "scheme":
        print(f"{args.file}: no scheme named {args.scheme!r}", file=sys.stderr)
        return USAGE_ERROR
    cmd = Command("restrict", "", [args.scheme], text=f"restrict {args.scheme}")
    report = run_command(session, cmd)
    sys.stdout.write(report.to_json(timing=not args.no_timing, indent=2) + "\n")
    return report.exit_code


def default_corpus():
    here = Path("corpus")
    if here.is_dir():
        return here
    return Path(__file__).resolve().parents[2] / "corpus"


def golden_path(path):
    return Path(path).with_suffix(".json")


def run_file(path, options=None):
    """Reports of one corpus file, as golden data (no timing) plus the reports themselves."""
    session = _load(path, options or {})
    reports = run_session(session)
    return json.loads(dumps(reports, timing=False)), reports


def cmd_corpus(args):
    root = Path(args.dir) if args.dir else default_corpus()
    files = sorted(root.glob("*.wk"))
    if not files:
        print(f"no .wk files under {root}", file=sys.stderr)
        return USAGE_ERROR
    worst = 0
    for path in files:
        try:
            data, reports = run_file(path, _options(args))
        except DSLError as exc:
            print(f"FAIL {path.name}: {exc.kind}: {exc}")
            worst = max(worst, USAGE_ERROR)
            continue
        gold = golden_path(path)
        if args.update:
            gold.write_text(json.dumps(data, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        not_verified = [r.command for r in reports if r.status != "verified"]
        matches = gold.exists() and json.loads(gold.read_text(encoding="utf-8")) == data
        ms = sum(r.timing_ms for r in reports)
        if matches and not not_verified:
            print(f"PASS {path.name} ({len(reports)} commands, {ms:.0f} ms)")
            continue
        worst = max(worst, 1)
        why = "golden mismatch" if not matches else f"not verified: {'; '.join(not_verified)}"
        if not gold.exists():
            why = "missing golden file"
        print(f"FAIL {path.name}: {why}")
    return worst


def build_parser():
    parser = argparse.ArgumentParser(prog="weilkit", description="Weil restriction workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run every command of a session file, print JSON reports")
    run.add_argument("file")
    run.add_argument("--no-timing", action="store_true", help="omit timing_ms (golden form)")
    _budget_flags(run)
    run.set_defaults(func=cmd_run)

    res = sub.add_parser("restrict", help="print the restriction of one declared scheme")
    res.add_argument("file")
    res.add_argument("--scheme", required=True)
    res.add_argument("--no-timing", action="store_true")
    _budget_flags(res)
    res.set_defaults(func=cmd_restrict)

    corpus = sub.add_parser("corpus", help="run the corpus and compare with golden JSON")
    corpus.add_argument("dir", nargs="?", help="directory of .wk files (default: ./corpus)")
    corpus.add_argument("--update", action="store_true", help="rewrite the golden files")
    _budget_flags(corpus)
    corpus.set_defaults(func=cmd_corpus)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
