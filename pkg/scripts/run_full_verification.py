#!/usr/bin/env python3
"""Run every verification suite back to back and summarize the outcome.

Thin driver over `python -m mimoaf verify`: each suite runs in sequence
with shared seed/tolerance settings, timings are collected, and the
per-check report lines can be concatenated into a single file.  Exits
nonzero if any suite reports a failing check.

    python scripts/run_full_verification.py
    python scripts/run_full_verification.py --seed 3 --report /tmp/verify.txt
"""

import argparse
import sys
import tempfile
import time
from pathlib import Path

from mimoaf.cli import SUITES, main as cli_main


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0, help="seed for the randomized suites")
    ap.add_argument("--probes", type=int, default=8, help="probe count for the psd suites")
    ap.add_argument("--report", default=None, help="write all report lines to this file")
    ap.add_argument(
        "--suite", action="append", default=None,
        help="run only this suite (repeatable); default: all of them",
    )
    args = ap.parse_args()

    names = args.suite or [s for s in SUITES if s != "all"]
    combined: list[str] = []
    failures: list[str] = []
    t_total = time.perf_counter()
    for suite in names:
        argv = [
            "verify", "--suite", suite,
            "--seed", str(args.seed), "--probes", str(args.probes),
        ]
        with tempfile.NamedTemporaryFile(mode="r", suffix=".txt") as tmp:
            t0 = time.perf_counter()
            code = cli_main(argv + ["--report", tmp.name])
            elapsed = time.perf_counter() - t0
            combined.extend(Path(tmp.name).read_text().splitlines())
        status = "ok" if code == 0 else f"FAILED (exit {code})"
        print(f"# {suite}: {status} in {elapsed:.2f}s")
        if code != 0:
            failures.append(suite)

    print(f"# total: {len(names)} suites, {len(combined)} checks, "
          f"{time.perf_counter() - t_total:.2f}s")
    if args.report:
        Path(args.report).write_text("".join(ln + "\n" for ln in combined))
        print(f"# report written to {args.report}")
    if failures:
        print(f"# failing suites: {', '.join(failures)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
