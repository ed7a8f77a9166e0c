"""Constructors for the algebras handled by this package.

``build_csv(a, b)`` builds the infinite-rank Schroedinger-Virasoro type
conformal algebra with generator families L, M, Y and nonvanishing brackets

    [L_i _l L_j] = (d + 2l) L_{i+j}
    [L_i _l M_j] = (d + a*l + b) M_{i+j}
    [L_i _l Y_j] = (d + (a/2+1)*l + b/2) Y_{i+j}
    [Y_i _l Y_j] = (d + 2l) M_{i+j}

together with the skew-forced reverse orientations.  The other builders are
family or index restrictions of the same data.  ``build_construction`` keeps
the L-on-Y weights (ap, bp) free; ``solve_construction`` recovers the unique
values ap = a/2 + 1 and bp = b/2 that make the table a Lie conformal
algebra, by solving the coefficient equations of the (L, Y, Y) Jacobi
residual.

The module also carries a plain (non-conformal) graded Lie algebra checker
for the twisted Schroedinger-Virasoro bracket relations that motivate the
conformal construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping

from .lca import VAR_D, VAR_L, AlgebraSpec, check_jacobi, make_algebra
from .linsolve import linear_solve
from .poly import GaussianRational, MPoly, PolyLike

ParamLike = PolyLike | str

#: default symbol names used when a parameter is passed as "sym"
SYMBOL_FOR = {"a": "a", "b": "b", "ap": "ap", "bp": "bp"}


def as_param(value: ParamLike, default_symbol: str) -> MPoly:
    """Coerce a parameter: scalars stay exact, 'sym' becomes a variable."""
    if isinstance(value, str):
        name = default_symbol if value == "sym" else value
        return MPoly.var(name)
    return MPoly.of(value)


def _symbolic_names(*params: MPoly) -> tuple[str, ...]:
    names: list[str] = []
    for p in params:
        for v in p.variables():
            if v not in names:
                names.append(v)
    return tuple(names)


def build_construction(
    a: ParamLike = "sym",
    ap: ParamLike = "sym",
    b: ParamLike = "sym",
    bp: ParamLike = "sym",
    *,
    name: str = "mfam",
) -> AlgebraSpec:
    """The candidate bracket table with free L-on-Y weights ap, bp."""
    pa = as_param(a, "a")
    pap = as_param(ap, "ap")
    pb = as_param(b, "b")
    pbp = as_param(bp, "bp")
    d = MPoly.var(VAR_D)
    lam = MPoly.var(VAR_L)
    declared = {
        ("L", "L"): [("L", d + lam.scale(2))],
        ("L", "M"): [("M", d + pa * lam + pb)],
        ("L", "Y"): [("Y", d + pap * lam + pbp)],
        ("Y", "Y"): [("M", d + lam.scale(2))],
    }
    return make_algebra(
        name,
        ["L", "M", "Y"],
        declared,
        parameters=_symbolic_names(pa, pap, pb, pbp),
    )


def build_csv(a: ParamLike = "sym", b: ParamLike = "sym") -> AlgebraSpec:
    """The Schroedinger-Virasoro type algebra: ap = a/2 + 1, bp = b/2."""
    pa = as_param(a, "a")
    pb = as_param(b, "b")
    half = Fraction(1, 2)
    return build_construction(
        pa, pa.scale(half) + 1, pb, pb.scale(half), name="csv"
    )


def restrict_families(spec: AlgebraSpec, families: list[str], name: str) -> AlgebraSpec:
    """Keep only the given families and the brackets among them."""
    table = {
        (fa, fb): entries
        for (fa, fb), entries in spec.table.items()
        if fa in families and fb in families
    }
    return AlgebraSpec(
        name=name,
        families=tuple(families),
        table=table,
        index0_only=spec.index0_only,
        parameters=spec.parameters,
    )


def build_chv(a: ParamLike = "sym", b: ParamLike = "sym") -> AlgebraSpec:
    """The Heisenberg-Virasoro type subalgebra on families L, M."""
    return restrict_families(build_csv(a, b), ["L", "M"], "chv")


def build_cw() -> AlgebraSpec:
    """The loop Virasoro algebra: family L only."""
    return restrict_families(build_csv(0, 0), ["L"], "cw")


def _index0(spec: AlgebraSpec, name: str) -> AlgebraSpec:
    return AlgebraSpec(
        name=name,
        families=spec.families,
        table=spec.table,
        index0_only=True,
        parameters=spec.parameters,
    )


def build_sv(a: ParamLike = "sym", b: ParamLike = "sym") -> AlgebraSpec:
    """Finite Schroedinger-Virasoro type algebra (index-0 restriction)."""
    return _index0(build_csv(a, b), "sv")


def build_hv(a: ParamLike = "sym", b: ParamLike = "sym") -> AlgebraSpec:
    """Finite Heisenberg-Virasoro type algebra (index-0 restriction)."""
    return _index0(build_chv(a, b), "hv")


def build_cvir() -> AlgebraSpec:
    """The Virasoro conformal algebra (single generator L_0)."""
    return _index0(build_cw(), "cvir")


def subalgebra_check(parent: AlgebraSpec, sub: AlgebraSpec) -> bool:
    """True iff sub's table is parent's restriction and is bracket-closed."""
    if not set(sub.families) <= set(parent.families):
        return False
    fams = set(sub.families)
    for fa, fb in product(sub.families, repeat=2):
        parent_entries = parent.table.get((fa, fb), ())
        for target, _ in parent_entries:
            if target not in fams:
                return False
        if tuple(sub.table.get((fa, fb), ())) != tuple(parent_entries):
            return False
    return True


# ---------------------------------------------------------------------------
# the construction solver
# ---------------------------------------------------------------------------


@dataclass
class ConstructionSolution:
    """Unique weights making the candidate table a Lie conformal algebra."""

    ap: MPoly
    bp: MPoly
    equations: list[tuple[str, MPoly]]  # (monomial in d,l,m, coefficient equation)


def construction_jacobi_residual(
    a: ParamLike = "sym",
    ap: ParamLike = "sym",
    b: ParamLike = "sym",
    bp: ParamLike = "sym",
) -> MPoly:
    """The (L, Y, Y) Jacobi residual of the candidate table (Y-component)."""
    spec = build_construction(a, ap, b, bp)
    residual = check_jacobi(spec, "L", "Y", "Y")
    polys = [p for gen, p in residual.terms.items()]
    if not polys:
        return MPoly.zero()
    total = MPoly.zero()
    for p in polys:
        total = total + p
    return total


def solve_construction(restrict_to: list[str] | None = None) -> ConstructionSolution:
    """Solve the coefficient equations of the (L, Y, Y) Jacobi residual.

    Every monomial coefficient in (d, l, m) is linear in the unknown
    weights ap and bp with rational coefficients, so the whole system fits a
    scalar linear solve with polynomial right-hand sides.  ``restrict_to``
    optionally keeps only the equations for the named monomials
    (e.g. ["d*l", "d"]), which already determine the solution.
    """
    residual = construction_jacobi_residual()
    groups = residual.split_by([VAR_D, VAR_L, "m"])
    rows: list[list[GaussianRational]] = []
    rhs: list[MPoly] = []
    equations: list[tuple[str, MPoly]] = []
    for mono, coeff_poly in sorted(groups.items()):
        mono_txt = "*".join(nm if e == 1 else f"{nm}^{e}" for nm, e in mono) or "1"
        if restrict_to is not None and mono_txt not in restrict_to:
            continue
        cap = coeff_poly.coeff_extract(["ap"], {"ap": 1})
        cbp = coeff_poly.coeff_extract(["bp"], {"bp": 1})
        rest = coeff_poly.substitute("ap", 0).substitute("bp", 0)
        rows.append([cap.constant_value(), cbp.constant_value()])
        rhs.append(-rest)
        equations.append((mono_txt, coeff_poly))
    solution = linear_solve(rows, rhs)
    if solution.kernel:
        raise ValueError("construction system is underdetermined")
    return ConstructionSolution(
        ap=solution.solution[0], bp=solution.solution[1], equations=equations
    )


# ---------------------------------------------------------------------------
# the motivating graded Lie algebra (plain, non-conformal)
# ---------------------------------------------------------------------------

IndexCoeff = Callable[[int, int], Fraction]


@dataclass(frozen=True)
class LieAlgebraSpec:
    """Integer-graded Lie algebra with index-polynomial structure constants."""

    name: str
    families: tuple[str, ...]
    table: Mapping[tuple[str, str], tuple[str, IndexCoeff]]

    def bracket_basis(self, fam_a: str, i: int, fam_b: str, j: int) -> dict[tuple[str, int], Fraction]:
        entry = self.table.get((fam_a, fam_b))
        if entry is None:
            return {}
        target, coeff = entry
        c = coeff(i, j)
        if c == 0:
            return {}
        return {(target, i + j): c}


def build_tsv_lie() -> LieAlgebraSpec:
    """The twisted Schroedinger-Virasoro bracket relations at integer indices.

        [L_m, L_n] = (n - m) L_{m+n}
        [L_m, M_n] = n M_{m+n}
        [L_m, Y_p] = (p - m/2) Y_{m+p}
        [Y_p, Y_q] = (q - p) M_{p+q}

    Reverse orientations are stored explicitly with negated constants; the
    checker verifies anti-symmetry rather than assuming it.
    """
    half = Fraction(1, 2)
    table: dict[tuple[str, str], tuple[str, IndexCoeff]] = {
        ("L", "L"): ("L", lambda i, j: Fraction(j - i)),
        ("L", "M"): ("M", lambda i, j: Fraction(j)),
        ("M", "L"): ("M", lambda i, j: Fraction(-i)),
        ("L", "Y"): ("Y", lambda i, j: j - half * i),
        ("Y", "L"): ("Y", lambda i, j: -(i - half * j)),
        ("Y", "Y"): ("M", lambda i, j: Fraction(j - i)),
    }
    return LieAlgebraSpec(name="tsv", families=("L", "M", "Y"), table=table)


Vector = dict[tuple[str, int], Fraction]


def _lie_bracket(spec: LieAlgebraSpec, x: Vector, y: Vector) -> Vector:
    out: Vector = {}
    for (fa, i), ca in x.items():
        for (fb, j), cb in y.items():
            for key, c in spec.bracket_basis(fa, i, fb, j).items():
                s = out.get(key, Fraction(0)) + ca * cb * c
                if s:
                    out[key] = s
                elif key in out:
                    del out[key]
    return out


@dataclass
class LieCheckReport:
    algebra: str
    window: int
    antisymmetry_failures: list[tuple] = field(default_factory=list)
    jacobi_failures: list[tuple] = field(default_factory=list)

    @property
    def all_zero(self) -> bool:
        return not self.antisymmetry_failures and not self.jacobi_failures


def lie_jacobi_check(spec: LieAlgebraSpec, window: int) -> LieCheckReport:
    """Anti-symmetry and Jacobi over all basis triples with |index| <= window."""
    if window < 1:
        raise ValueError("window must be at least 1")
    report = LieCheckReport(algebra=spec.name, window=window)
    indices = range(-window, window + 1)
    basis = [(fam, i) for fam in spec.families for i in indices]
    for (fa, i) in basis:
        for (fb, j) in basis:
            x = {(fa, i): Fraction(1)}
            y = {(fb, j): Fraction(1)}
            fwd = _lie_bracket(spec, x, y)
            rev = _lie_bracket(spec, y, x)
            total = dict(fwd)
            for key, c in rev.items():
                s = total.get(key, Fraction(0)) + c
                if s:
                    total[key] = s
                elif key in total:
                    del total[key]
            if total:
                report.antisymmetry_failures.append((fa, i, fb, j, total))
    for (fa, i) in basis:
        for (fb, j) in basis:
            for (fc, k) in basis:
                x = {(fa, i): Fraction(1)}
                y = {(fb, j): Fraction(1)}
                z = {(fc, k): Fraction(1)}
                acc: Vector = {}
                for u, v, w in ((x, y, z), (y, z, x), (z, x, y)):
                    inner = _lie_bracket(spec, u, v)
                    outer = _lie_bracket(spec, inner, w)
                    for key, c in outer.items():
                        s = acc.get(key, Fraction(0)) + c
                        if s:
                            acc[key] = s
                        elif key in acc:
                            del acc[key]
                if acc:
                    report.jacobi_failures.append((fa, i, fb, j, fc, k, acc))
    return report


# ---------------------------------------------------------------------------
# registry for the command line
# ---------------------------------------------------------------------------

ALGEBRA_IDS = ("csv", "chv", "cw", "sv", "hv", "cvir", "mfam", "tsv")


def build_algebra(identifier: str, **params: ParamLike) -> AlgebraSpec:
    """Build a conformal algebra by its public identifier."""
    ident = identifier.lower()
    a = params.get("a", "sym")
    b = params.get("b", "sym")
    if ident == "csv":
        return build_csv(a, b)
    if ident == "chv":
        return build_chv(a, b)
    if ident == "cw":
        return build_cw()
    if ident == "sv":
        return build_sv(a, b)
    if ident == "hv":
        return build_hv(a, b)
    if ident == "cvir":
        return build_cvir()
    if ident == "mfam":
        return build_construction(
            a, params.get("ap", "sym"), b, params.get("bp", "sym")
        )
    if ident == "tsv":
        raise ValueError(
            "tsv is the plain graded Lie algebra; only verify-axioms handles it"
        )
    raise ValueError(f"unknown algebra identifier {identifier!r}")
