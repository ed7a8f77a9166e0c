#!/usr/bin/env python3
"""Run the full verification suite and write text + JSON reports.

Usage: python scripts/run_verification_suite.py [outdir] [seed]
"""

import pathlib
import sys

from confalg.suite import DEFAULT_SEED, run_paper_suite


def main() -> int:
    outdir = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path("out")
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else DEFAULT_SEED
    outdir.mkdir(parents=True, exist_ok=True)
    report = run_paper_suite(seed=seed)
    (outdir / "suite.txt").write_text(report.to_text())
    (outdir / "suite.json").write_text(report.to_json())
    sys.stdout.write(report.to_text())
    print(f"reports written to {outdir}/suite.txt and {outdir}/suite.json")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
