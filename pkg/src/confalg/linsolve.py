"""Exact Gaussian elimination over the Gaussian rationals.

The right-hand sides may be polynomials: row operations only ever multiply
them by scalars, so the general solution of ``A x = rhs`` is a particular
vector of polynomials plus the scalar kernel of ``A``.

Internally rows are sparse ``{column: coefficient}`` dictionaries; the
systems produced by the derivation solver are large but extremely sparse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import ONE, GaussianRational, Inconsistent, MPoly, ScalarLike

SparseRow = dict[int, GaussianRational]


@dataclass
class Echelon:
    """Reduced row echelon data for a sparse system."""

    ncols: int
    pivots: dict[int, SparseRow]          # pivot column -> normalized row
    pivot_rhs: dict[int, MPoly]           # pivot column -> reduced rhs

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.pivots]

    def kernel_basis(self) -> list[list[GaussianRational]]:
        zero = GaussianRational.of(0)
        basis = []
        for free in self.free_columns():
            vec = [zero] * self.ncols
            vec[free] = ONE
            for piv, row in self.pivots.items():
                coeff = row.get(free)
                if coeff:
                    vec[piv] = -coeff
            basis.append(vec)
        return basis

    def particular_solution(self) -> list[MPoly]:
        sol = [MPoly.zero()] * self.ncols
        for piv in self.pivots:
            sol[piv] = self.pivot_rhs[piv]
        return sol


def reduce_rows(
    rows: Sequence[SparseRow],
    rhs: Sequence[MPoly] | None,
    ncols: int,
) -> Echelon:
    """Run sparse Gauss-Jordan elimination; raises Inconsistent on 0 = rhs."""
    pivots: dict[int, SparseRow] = {}
    pivot_rhs: dict[int, MPoly] = {}
    zero_poly = MPoly.zero()
    for k, incoming in enumerate(rows):
        row = dict(incoming)
        b = rhs[k] if rhs is not None else zero_poly
        while True:
            hit = [c for c in row if c in pivots]
            if not hit:
                break
            for col in hit:
                factor = row.pop(col, None)
                if not factor:
                    continue
                prow = pivots[col]
                for c2, v2 in prow.items():
                    if c2 == col:
                        continue
                    acc = row.get(c2)
                    s = (-factor * v2) if acc is None else acc - factor * v2
                    if s:
                        row[c2] = s
                    elif acc is not None:
                        del row[c2]
                pb = pivot_rhs[col]
                if pb:
                    b = b - pb.scale(factor)
        if not row:
            if not b.is_zero():
                raise Inconsistent("linear system has no solution")
            continue
        col = min(row)
        inv = ONE / row[col]
        row = {c: v * inv for c, v in row.items()}
        b = b.scale(inv)
        # keep existing pivot rows fully reduced against the new pivot
        for piv, prow in pivots.items():
            coeff = prow.get(col)
            if not coeff:
                continue
            for c2, v2 in row.items():
                if c2 == col:
                    del prow[col]
                    continue
                acc = prow.get(c2)
                s = (-coeff * v2) if acc is None else acc - coeff * v2
                if s:
                    prow[c2] = s
                elif acc is not None:
                    del prow[c2]
            nb = b
            if nb:
                pivot_rhs[piv] = pivot_rhs[piv] - nb.scale(coeff)
        pivots[col] = row
        pivot_rhs[col] = b
    return Echelon(ncols=ncols, pivots=pivots, pivot_rhs=pivot_rhs)


@dataclass
class LinearSolution:
    """General solution of ``A x = rhs``: particular + span(kernel)."""

    solution: list[MPoly]
    kernel: list[list[GaussianRational]]


def linear_solve(
    matrix: Sequence[Sequence[ScalarLike]],
    rhs: Sequence[object],
) -> LinearSolution:
    """Solve a scalar-matrix system with polynomial right-hand sides.

    Raises Inconsistent when no solution exists.
    """
    if len(matrix) != len(rhs):
        raise ValueError("matrix and rhs size mismatch")
    ncols = max((len(r) for r in matrix), default=0)
    rows: list[SparseRow] = []
    for r in matrix:
        row: SparseRow = {}
        for j, v in enumerate(r):
            c = GaussianRational.of(v)
            if c:
                row[j] = c
        rows.append(row)
    rhs_polys = [MPoly.of(b) for b in rhs]
    ech = reduce_rows(rows, rhs_polys, ncols)
    return LinearSolution(solution=ech.particular_solution(), kernel=ech.kernel_basis())


def scalar_rank(vectors: Sequence[Sequence[ScalarLike]]) -> int:
    """Rank of a family of scalar vectors."""
    ncols = max((len(v) for v in vectors), default=0)
    rows: list[SparseRow] = []
    for v in vectors:
        row: SparseRow = {}
        for j, x in enumerate(v):
            c = GaussianRational.of(x)
            if c:
                row[j] = c
        rows.append(row)
    return reduce_rows(rows, None, ncols).rank
