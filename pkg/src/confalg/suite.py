"""The full verification suite: every headline claim at desk scale.

Each criterion runs a fixed, seeded configuration and yields check records
for the report.  All checks are exact (zero-residual) statements; the
recorded timings are informative only.

Scope note: the classification and derivation theorems quantify over all
generator indices and unbounded polynomial degrees.  This suite certifies
them at the configured windows and degree bounds; the records carry that
scope in their claims.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from .catalog import (
    build_chv,
    build_construction,
    build_csv,
    build_tsv_lie,
    lie_jacobi_check,
    solve_construction,
)
from .classify import classify_graded, classify_rank1, materialize_rank1
from .derivations import (
    ad,
    check_derivation,
    d_vec,
    decompose,
    solve_graded_derivations,
)
from .lca import (
    Generator,
    GenPoly,
    bracket,
    check_all_axioms,
    check_jacobi,
    grading_project,
)
from .modules import (
    BitSeq,
    build_graded,
    build_rank1,
    check_module_axioms,
    reducibility_witness,
    relations_oracle,
)
from .poly import GaussianRational, MPoly, NotDivisible, parse_poly
from .report import CheckRecord, Report

DEFAULT_SEED = 20250809

DERIVATION_GRID_A = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2), Fraction(-2))
DERIVATION_GRID_B = (Fraction(0), Fraction(1), Fraction(-3))
MODULE_GRID = ((0, 0), (1, 0), (0, 1), (2, 5), (1, 1))


def _record(check_id: str, claim: str, started: float, passed: bool,
            status: str, **kw) -> CheckRecord:
    return CheckRecord(
        check_id=check_id,
        claim=claim,
        status=status,
        passed=passed,
        elapsed_ms=(time.perf_counter() - started) * 1000.0,
        **kw,
    )


def _rand_fraction(rng: random.Random, span: int = 6, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def _rand_scalar(rng: random.Random, complex_share: float = 0.0) -> GaussianRational:
    im = _rand_fraction(rng) if rng.random() < complex_share else Fraction(0)
    return GaussianRational(_rand_fraction(rng), im)


def _rand_poly(
    rng: random.Random,
    names: tuple[str, ...],
    max_degree: int = 4,
    max_terms: int = 4,
    complex_share: float = 0.0,
) -> MPoly:
    acc = MPoly.zero()
    for _ in range(rng.randint(0, max_terms)):
        term = MPoly.const(_rand_scalar(rng, complex_share))
        budget = rng.randint(0, max_degree)
        for _ in range(budget):
            term = term * MPoly.var(rng.choice(names))
        acc = acc + term
    return acc


# ---------------------------------------------------------------------------


def criterion_1() -> list[CheckRecord]:
    """Fully symbolic axiom check of the three-family construction."""
    t0 = time.perf_counter()
    report = check_all_axioms(build_csv("sym", "sym"))
    ok = report.all_zero and len(report.skew) == 6 and len(report.jacobi) == 10
    return [
        _record(
            "c1-axioms",
            "all 6 skew pairs and 10 Jacobi triples of csv(a,b) vanish "
            "identically with symbolic a, b",
            t0,
            ok,
            "zero" if report.all_zero else "nonzero: " + ", ".join(report.nonzero_checks()),
        )
    ]


def criterion_2(seed: int = DEFAULT_SEED) -> list[CheckRecord]:
    """Unique bracket weights, plus necessity off the solution locus."""
    out = []
    t0 = time.perf_counter()
    sol = solve_construction()
    expected_ap = parse_poly("(1/2)*a + 1")
    expected_bp = parse_poly("(1/2)*b")
    ok = sol.ap == expected_ap and sol.bp == expected_bp
    out.append(
        _record(
            "c2-solver",
            "the coefficient system forces ap = a/2 + 1 and bp = b/2",
            t0,
            ok,
            f"ap = {sol.ap}, bp = {sol.bp}",
        )
    )
    t0 = time.perf_counter()
    sub = solve_construction(restrict_to=["d*l", "d"])
    out.append(
        _record(
            "c2-solver-restricted",
            "the d*l and d coefficient equations alone give the same weights",
            t0,
            sub.ap == expected_ap and sub.bp == expected_bp,
            f"ap = {sub.ap}, bp = {sub.bp}",
        )
    )
    t0 = time.perf_counter()
    rng = random.Random(seed)
    failures = []
    for k in range(20):
        a = _rand_fraction(rng)
        b = _rand_fraction(rng)
        while True:
            ap = _rand_fraction(rng)
            bp = _rand_fraction(rng)
            if ap != Fraction(a, 2) + 1 or bp != Fraction(b, 2):
                break
        spec = build_construction(a, ap, b, bp)
        if check_jacobi(spec, "L", "Y", "Y").is_zero():
            failures.append((a, ap, b, bp))
    out.append(
        _record(
            "c2-necessity",
            "20 seeded weight pairs off the locus all break the (L, Y, Y) "
            "Jacobi identity",
            t0,
            not failures,
            "all nonzero" if not failures else f"unexpected zeros: {failures}",
            inputs={"seed": seed, "samples": 20},
        )
    )
    return out


def criterion_3() -> list[CheckRecord]:
    t0 = time.perf_counter()
    report = lie_jacobi_check(build_tsv_lie(), 5)
    return [
        _record(
            "c3-tsv",
            "anti-symmetry and Jacobi hold for all index triples with "
            "|index| <= 5 of the motivating graded Lie algebra",
            t0,
            report.all_zero,
            "zero"
            if report.all_zero
            else f"{len(report.antisymmetry_failures)} antisym / "
            f"{len(report.jacobi_failures)} jacobi failures",
        )
    ]


def criterion_4() -> list[CheckRecord]:
    """Derivation dichotomy: non-inner dimension is 1 iff a = 1."""
    out = []
    for name, builder in (("csv", build_csv), ("chv", build_chv)):
        t0 = time.perf_counter()
        failures = []
        for a in DERIVATION_GRID_A:
            for b in DERIVATION_GRID_B:
                for c in (-1, 0, 1):
                    res = solve_graded_derivations(
                        builder(a, b), degree=c, bound=4, window=2
                    )
                    want = 1 if a == 1 else 0
                    if res.extra_dimension != want:
                        failures.append((a, b, c, res.dimension, res.inner_rank))
        out.append(
            _record(
                f"c4-dichotomy-{name}",
                f"over the 5x3 weight grid and degrees -1..1, the non-inner "
                f"dimension of {name} equals 1 exactly at a = 1 "
                "(window 2, image degree 4)",
                t0,
                not failures,
                "dimensions match" if not failures else f"mismatches: {failures}",
            )
        )
    return out


def criterion_5(seed: int = DEFAULT_SEED) -> list[CheckRecord]:
    out = []
    rng = random.Random(seed)
    support = {rng.randint(-2, 2): _rand_scalar(rng) for _ in range(3)}
    support[0] = GaussianRational.of(1)
    t0 = time.perf_counter()
    ok = True
    detail = []
    for name, builder in (("csv", build_csv), ("chv", build_chv)):
        spec = builder(1, "sym")
        rep = check_derivation(spec, d_vec(spec, support, window=3))
        if not rep.all_zero:
            ok = False
            detail.append(f"{name}(1,b) residuals {sorted(rep.residuals)}")
    out.append(
        _record(
            "c5-dvec-derivation",
            "the M-valued family is a derivation of csv(1,b) and chv(1,b) "
            "with symbolic b and seeded finite support",
            t0,
            ok,
            "zero" if ok else "; ".join(detail),
            inputs={"seed": seed, "support": {k: str(v) for k, v in support.items()}},
        )
    )
    t0 = time.perf_counter()
    spec00 = build_csv(0, 0)
    rep = check_derivation(spec00, d_vec(spec00, {0: GaussianRational.of(1)}, window=3))
    out.append(
        _record(
            "c5-dvec-a0",
            "at a = 0 the same map is not a derivation (nonzero residual)",
            t0,
            not rep.all_zero,
            "nonzero" if not rep.all_zero else "unexpectedly zero",
        )
    )
    t0 = time.perf_counter()
    failures = []
    for trial in range(5):
        c = rng.randint(-1, 1)
        spec = build_csv(1, 0)
        x = GenPoly.zero()
        for fam in spec.families:
            poly = _rand_poly(rng, ("d",), max_degree=3, max_terms=2)
            if not poly.is_zero():
                x = x + GenPoly.unit(fam, c, poly)
        q = _rand_scalar(rng)
        deriv = ad(spec, x, window=3)
        for key, img in d_vec(spec, {c: q}, window=3).images.items():
            deriv.images[key] = deriv.images.get(key, GenPoly.zero()) + img
        deriv.degree = c
        if deriv.is_zero():
            continue
        dec = decompose(spec, deriv, bound=5)
        if dec.x != x or dec.q != q:
            failures.append((trial, str(x), str(q), str(dec.x), str(dec.q)))
    spec23 = build_csv(2, 3)
    x = GenPoly.unit("L", 1, parse_poly("d^2"))
    dec = decompose(spec23, ad(spec23, x, window=3), bound=5)
    if dec.x != x or dec.q:
        failures.append(("fixed", str(x), "0", str(dec.x), str(dec.q)))
    out.append(
        _record(
            "c5-decompose",
            "decompose recovers x and q exactly from ad(x) + q * family "
            "instances (seeded)",
            t0,
            not failures,
            "round trips" if not failures else f"failures: {failures}",
            inputs={"seed": seed},
        )
    )
    return out


def criterion_6() -> list[CheckRecord]:
    out = []
    for name, builder, ext_point, ext_family in (
        ("csv", build_csv, (0, 0), "Y"),
        ("chv", build_chv, (1, 0), "M"),
    ):
        t0 = time.perf_counter()
        failures = []
        for a, b in MODULE_GRID:
            outcome = classify_rank1(name, a, b, degree_bound=6)
            want_ext = (a, b) == ext_point
            if outcome.has_extension != want_ext:
                failures.append((a, b, "extension", outcome.families))
                continue
            if want_ext and outcome.families[ext_family] != "d*c^i":
                failures.append((a, b, "family", outcome.families))
            if not want_ext and any(
                outcome.families[f] != "0" for f in outcome.families if f != "L"
            ):
                failures.append((a, b, "nonzero tail", outcome.families))
            spec = builder(a, b)
            module = materialize_rank1(outcome, spec)
            rep = check_module_axioms(spec, module)
            if not rep.all_zero:
                failures.append((a, b, "round trip", sorted(rep.residuals)))
        out.append(
            _record(
                f"c6-rank1-{name}",
                f"rank-one classification over the grid finds the scalar "
                f"extension exactly at {ext_point} and the rematerialized "
                "family passes the module axioms with symbolic parameters",
                t0,
                not failures,
                "classified" if not failures else f"failures: {failures}",
            )
        )
    return out


def criterion_7(seed: int = DEFAULT_SEED) -> list[CheckRecord]:
    out = []
    rng = random.Random(seed)
    bitseqs = [BitSeq.random(rng, -9, 9) for _ in range(10)]

    for name, ext_point in (("csv", (0, 0)), ("chv", (1, 0))):
        ext_family = "Y" if name == "csv" else "M"
        t0 = time.perf_counter()
        failures = []
        for a, b in MODULE_GRID:
            outcome = classify_graded(name, a, b, "vab", 6, 3, 2)
            if name == "csv" and outcome.families["M"] != "0":
                failures.append((a, b, "vab", "g nonzero"))
            want_ext = (a, b) == ext_point
            got = outcome.families[ext_family]
            if want_ext and got != "d":
                failures.append((a, b, "vab", f"extension {got}"))
            if not want_ext and got != "0":
                failures.append((a, b, "vab", f"unexpected extension {got}"))
        out.append(
            _record(
                f"c7-graded-vab-{name}",
                f"uniform-weights graded classification finds the scalar "
                f"extension exactly at {ext_point} over the grid",
                t0,
                not failures,
                "classified" if not failures else f"failures: {failures}",
                inputs={"seed": seed},
            )
        )

        t0 = time.perf_counter()
        failures = []
        for a, b in MODULE_GRID:
            want_ext = (a, b) == ext_point
            for k, bits in enumerate(bitseqs):
                outcome = classify_graded(
                    name, a, b, "vAb", 6, 3, 2, bitseq=bits
                )
                if name == "csv" and outcome.families["M"] != "0":
                    failures.append((a, b, k, "g nonzero"))
                got = outcome.families[ext_family]
                if want_ext and got != "d":
                    failures.append((a, b, k, f"extension '{got}'"))
                if not want_ext and got != "0":
                    failures.append((a, b, k, f"unexpected extension '{got}'"))
        out.append(
            _record(
                f"c7-graded-vAb-{name}",
                f"case-split graded classification finds the flat scalar "
                f"extension exactly at {ext_point} for 10 seeded bit sequences",
                t0,
                not failures,
                "classified" if not failures else f"{len(failures)} failures, "
                f"first: {failures[0]}",
                inputs={"seed": seed},
                detail=(
                    "the flat extension of a case-split base fails the mixed-"
                    "index L-Y (or L-M) identity whenever the bit sequence is "
                    "non-constant; the classifier reports that collapse, so "
                    "this stated expectation cannot hold for generic seeds"
                    if failures
                    else ""
                ),
            )
        )

    t0 = time.perf_counter()
    mismatches = []
    pool = list(MODULE_GRID) + [(1, 1), (0, 0)]
    for k in range(50):
        a, b = pool[rng.randrange(len(pool))]
        kind = rng.choice(["vab", "vAb"])
        d_val = rng.choice([0, 1, _rand_fraction(rng)])
        beta = _rand_fraction(rng)
        spec = build_csv(a, b)
        if kind == "vab":
            module = build_graded(spec, "vab", _rand_fraction(rng), beta, d_val)
        else:
            module = build_graded(spec, "vAb", BitSeq.random(rng, -9, 9), beta, d_val)
        axioms = check_module_axioms(spec, module, n_basis=3, k_gen=2)
        oracle = relations_oracle(module, a, b, n_basis=3, k_gen=2)
        if axioms.all_zero != oracle.all_zero:
            mismatches.append((k, a, b, kind, str(d_val)))
    out.append(
        _record(
            "c7-oracle-equivalence",
            "the generic axiom checker and the hand-coded relation oracle "
            "agree (zero iff zero) on 50 seeded graded modules",
            t0,
            not mismatches,
            "agree" if not mismatches else f"mismatches: {mismatches}",
            inputs={"seed": seed, "samples": 50},
        )
    )
    return out


def criterion_8(seed: int = DEFAULT_SEED) -> list[CheckRecord]:
    out = []
    rng = random.Random(seed)
    t0 = time.perf_counter()
    failures = []
    for beta in (Fraction(5), Fraction(-1, 2), Fraction(0)):
        module = build_rank1(build_csv(0, 0), 0, beta, 1, 0)
        res = reducibility_witness(module, max_degree=3)
        expected = MPoly.var("d") + MPoly.const(beta)
        if res.witness != expected or res.degree != 1:
            failures.append((beta, str(res.witness)))
    out.append(
        _record(
            "c8-witness-found",
            "at alpha = 0 the witness d + beta is found at degree 1",
            t0,
            not failures,
            "found" if not failures else f"failures: {failures}",
        )
    )
    t0 = time.perf_counter()
    failures = []
    for k in range(10):
        alpha = _rand_fraction(rng)
        while alpha == 0:
            alpha = _rand_fraction(rng)
        c = _rand_fraction(rng)
        while c == 0:
            c = _rand_fraction(rng)
        module = build_rank1(build_csv(0, 0), alpha, _rand_fraction(rng), c, 0)
        res = reducibility_witness(module, max_degree=3)
        if res.witness is not None or res.undecided:
            failures.append((k, str(alpha), str(c), str(res.witness)))
    out.append(
        _record(
            "c8-witness-absent",
            "10 seeded modules with alpha, c nonzero admit no witness up to "
            "degree 3",
            t0,
            not failures,
            "none found" if not failures else f"failures: {failures}",
            inputs={"seed": seed},
        )
    )
    return out


def criterion_9(seed: int = DEFAULT_SEED) -> list[CheckRecord]:
    out = []
    rng = random.Random(seed)
    names = ("d", "l", "m", "a", "b")

    t0 = time.perf_counter()
    failures = 0
    for _ in range(1000):
        p = _rand_poly(rng, names, complex_share=0.15)
        q = _rand_poly(rng, names, complex_share=0.15)
        r = _rand_poly(rng, names, complex_share=0.15)
        if (p + q) + r != p + (q + r) or p * (q + r) != p * q + p * r or p * q != q * p:
            failures += 1
        if not (p - p).is_zero():
            failures += 1
    out.append(
        _record(
            "c9-ring-laws",
            "associativity, distributivity, commutativity and cancellation "
            "on 1000 seeded random polynomials",
            t0,
            failures == 0,
            f"{failures} failures",
            inputs={"seed": seed, "cases": 1000},
        )
    )

    t0 = time.perf_counter()
    failures = 0
    for _ in range(1000):
        p = _rand_poly(rng, names)
        q = _rand_poly(rng, names)
        if q.is_zero():
            q = MPoly.var("d") + 1
        try:
            if (p * q).divide_exact(q) != p:
                failures += 1
        except NotDivisible:
            failures += 1
    out.append(
        _record(
            "c9-divide-roundtrip",
            "divide_exact(p*q, q) == p on 1000 seeded random pairs",
            t0,
            failures == 0,
            f"{failures} failures",
            inputs={"seed": seed, "cases": 1000},
        )
    )

    t0 = time.perf_counter()
    failures = 0
    for _ in range(1000):
        p = _rand_poly(rng, names)
        subset = tuple(n for n in names if rng.random() < 0.5) or ("d",)
        total = MPoly.zero()
        for mono, coeff_poly in p.split_by(subset).items():
            total = total + coeff_poly * MPoly({mono: GaussianRational.of(1)})
        if total != p:
            failures += 1
    out.append(
        _record(
            "c9-coeff-reconstruction",
            "summing coefficient * monomial over any variable split "
            "reconstructs the polynomial (1000 seeded cases)",
            t0,
            failures == 0,
            f"{failures} failures",
            inputs={"seed": seed, "cases": 1000},
        )
    )

    t0 = time.perf_counter()
    failures = 0
    spec = build_csv("sym", "sym")
    for _ in range(100):
        fam_x = rng.choice(spec.families)
        fam_y = rng.choice(spec.families)
        i, j = rng.randint(-5, 5), rng.randint(-5, 5)
        p = _rand_poly(rng, ("d",), max_degree=3, max_terms=3)
        x = GenPoly.unit(fam_x, i, p)
        y = GenPoly.unit(fam_y, j)
        z = GenPoly.unit("L", rng.randint(-5, 5))
        lhs = bracket(spec, x + z, y)
        rhs = bracket(spec, x, y) + bracket(spec, z, y)
        if lhs != rhs:
            failures += 1
        value = bracket(spec, x, y)
        if not grading_project(value, i + j) == value:
            failures += 1
        base = bracket(spec, GenPoly.unit(fam_x, 0, p), GenPoly.unit(fam_y, 0))
        shifted = GenPoly(
            {
                Generator(gen.family, gen.index + i + j): poly
                for gen, poly in base.terms.items()
            }
        )
        if shifted != value:
            failures += 1
    out.append(
        _record(
            "c9-bracket-invariants",
            "bracket additivity, weight additivity and index-shift "
            "uniformity on 100 seeded cases",
            t0,
            failures == 0,
            f"{failures} failures",
            inputs={"seed": seed, "cases": 100},
        )
    )
    return out


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_paper_suite(seed: int = DEFAULT_SEED, only: list[int] | None = None) -> Report:
    report = Report(command="paper-suite", config={"seed": seed})
    for number in sorted(only or CRITERIA):
        fn = CRITERIA[number]
        records = fn(seed) if fn.__code__.co_argcount else fn()  # type: ignore[attr-defined]
        for record in records:
            report.add(record)
    return report
