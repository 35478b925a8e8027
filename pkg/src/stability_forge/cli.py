"""Command line entry point ``stability-forge``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from . import corpus
from .algebra import parse_rational
from .runner import EXIT_INPUT, EXIT_OK, InputError, JobError, JobSpec, dumps, run, validate


def _rational(text: str) -> str:
    try:
        parse_rational(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational literal: {text!r}") from None
    return text


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stability-forge",
        description="Exact GIT stability invariants of projective varieties under 1-psg degenerations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def job_flags(p):
        p.add_argument("--m-cap", type=_positive, help="largest degree m probed for stabilization")
        p.add_argument("--budget", type=_positive, help="maximum number of S-pairs per Groebner basis")
        p.add_argument("--fd-slope", type=_rational, help="slope of the double Chow point, as p/q")

    p_run = sub.add_parser("run", help="run a job file and print the JSON report")
    p_run.add_argument("job", type=Path)
    job_flags(p_run)

    p_val = sub.add_parser("validate", help="print diagnostics for a job file")
    p_val.add_argument("job", type=Path)
    job_flags(p_val)

    p_corpus = sub.add_parser("corpus", help="built-in corpus with golden reports")
    p_corpus.add_argument("action", choices=["list", "run-all", "update"])
    p_corpus.add_argument("--corpus-dir", type=Path, default=None)
    return parser


def _load(path: Path, args) -> JobSpec:
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError("cli-runner", f"cannot read job file: {exc.strerror}", str(path)) from None
    job = JobSpec.from_json(text)
    return job.with_options(m_cap=args.m_cap, max_pairs=args.budget, fd_slope=args.fd_slope)


def _fail(exc: JobError) -> int:
    sys.stderr.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
    return exc.exit_code


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            out = dumps(run(_load(args.job, args)))
            sys.stdout.write(out)
            return EXIT_OK
        if args.command == "validate":
            diags = validate(_load(args.job, args))
            sys.stdout.write(json.dumps(diags, sort_keys=True, indent=2) + "\n")
            return EXIT_INPUT if any(d["level"] == "error" for d in diags) else EXIT_OK
        return _corpus(args)
    except JobError as exc:
        return _fail(exc)


def _corpus(args) -> int:
    if args.action == "list":
        for e in corpus.entries(args.corpus_dir):
            sys.stdout.write(f"{e.name}\t{e.description}\n")
        return EXIT_OK
    if args.action == "update":
        for name in corpus.write_goldens(args.corpus_dir):
            sys.stdout.write(f"wrote {name}\n")
        return EXIT_OK
    failed = 0
    code = EXIT_OK
    for e in corpus.entries(args.corpus_dir):
        try:
            result = corpus.run_entry(e)
        except JobError as exc:
            sys.stdout.write(f"ERROR {e.name}: {exc.message}\n")
            failed += 1
            code = max(code, exc.exit_code)
            continue
        if result.passed:
            sys.stdout.write(f"PASS  {e.name}\n")
        else:
            failed += 1
            sys.stdout.write(f"FAIL  {e.name}\n")
            for m in result.mismatches:
                sys.stdout.write(f"      {m['field']}: expected {json.dumps(m['expected'])}, "
                                 f"actual {json.dumps(m['actual'])}\n")
    sys.stdout.write(f"{failed} failed\n")
    if failed and code == EXIT_OK:
        code = EXIT_INPUT
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
