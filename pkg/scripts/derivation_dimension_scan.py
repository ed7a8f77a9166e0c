#!/usr/bin/env python3
"""Scan derivation-space dimensions over a weight grid.

Prints, per (a, b) and grading degree, the solved dimension, the inner
rank on the same window, and their difference.  The difference is 1
exactly on the a = 1 line.

Usage: python scripts/derivation_dimension_scan.py [csv|chv] [bound] [window]
"""

import sys
from fractions import Fraction

from confalg.catalog import build_chv, build_csv
from confalg.derivations import solve_graded_derivations


def main() -> int:
    algebra = sys.argv[1] if len(sys.argv) > 1 else "csv"
    bound = int(sys.argv[2]) if len(sys.argv) > 2 else 4
    window = int(sys.argv[3]) if len(sys.argv) > 3 else 2
    builder = {"csv": build_csv, "chv": build_chv}[algebra]
    grid_a = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(-2))
    grid_b = (Fraction(0), Fraction(1), Fraction(-3))
    print(f"{algebra}: image degree <= {bound}, window |i| <= {window}")
    print(f"{'a':>6} {'b':>4} {'deg':>4} {'dim':>4} {'inner':>6} {'extra':>6}")
    for a in grid_a:
        for b in grid_b:
            spec = builder(a, b)
            for degree in (-1, 0, 1):
                res = solve_graded_derivations(spec, degree, bound, window)
                print(
                    f"{str(a):>6} {str(b):>4} {degree:>4} {res.dimension:>4} "
                    f"{res.inner_rank:>6} {res.extra_dimension:>6}"
                )
    return 0


if __name__ == "__main__":
    sys.exit(main())
