import random
from fractions import Fraction

import pytest

from confalg.catalog import build_chv, build_csv
from confalg.derivations import (
    DerivationSpec,
    NotDecomposable,
    ad,
    apply_derivation,
    check_derivation,
    d_vec,
    decompose,
    derivation_degree,
    parse_derivation,
    serialize_derivation,
    solve_graded_derivations,
)
from confalg.lca import GenPoly, Generator
from confalg.poly import GaussianRational, MPoly, parse_poly

P = parse_poly
ONE = GaussianRational.of(1)


def combine(d1: DerivationSpec, d2: DerivationSpec, c1, c2) -> DerivationSpec:
    out = DerivationSpec(
        families=d1.families, window=min(d1.window, d2.window), degree=None
    )
    keys = set(d1.images) | set(d2.images)
    for key in keys:
        if abs(key[1]) > out.window:
            continue
        image = d1.image(*key).scale(MPoly.const(c1)) + d2.image(*key).scale(
            MPoly.const(c2)
        )
        if not image.is_zero():
            out.images[key] = image
    return out


class TestBuilders:
    def test_ad_of_l0(self):
        csv = build_csv("sym", "sym")
        deriv = ad(csv, GenPoly.unit("L", 0), window=2)
        assert deriv.image("L", 2) == GenPoly({Generator("L", 2): P("d + 2*l")})

    def test_ad_of_zero(self):
        csv = build_csv(0, 0)
        assert ad(csv, GenPoly.zero(), window=2).is_zero()

    def test_ad_of_m_at_loop_point(self):
        # skew-symmetry applied to the L-on-M bracket at (1, 0) leaves l*M
        csv = build_csv(1, 0)
        deriv = ad(csv, GenPoly.unit("M", 2), window=3)
        assert deriv.image("L", 1) == GenPoly({Generator("M", 3): P("l")})

    def test_dvec_images(self):
        csv = build_csv(1, 0)
        deriv = d_vec(csv, {0: ONE}, window=2)
        assert deriv.image("L", 1) == GenPoly({Generator("M", 1): MPoly.const(1)})
        assert deriv.image("M", 1).is_zero()
        assert deriv.image("Y", 0).is_zero()

    def test_dvec_linear_support(self):
        csv = build_csv(1, 0)
        deriv = d_vec(
            csv, {-1: GaussianRational.of(2), 3: GaussianRational.of(5)}, window=4
        )
        assert deriv.image("L", 0) == GenPoly(
            {Generator("M", -1): MPoly.const(2), Generator("M", 3): MPoly.const(5)}
        )

    def test_dvec_zero(self):
        csv = build_csv(1, 0)
        assert d_vec(csv, {}, window=2).is_zero()


class TestLeibniz:
    def test_dvec_is_derivation_at_a1(self):
        for builder in (build_csv, build_chv):
            spec = builder(1, "sym")
            deriv = d_vec(spec, {0: ONE, 2: GaussianRational.of(-3)}, window=4)
            assert check_derivation(spec, deriv, window=2).all_zero

    def test_dvec_fails_at_a0(self):
        spec = build_csv(0, 0)
        report = check_derivation(spec, d_vec(spec, {0: ONE}, window=2))
        pairs = {(k[0], k[2]) for k in report.residuals}
        assert pairs == {("L", "L")}

    def test_ad_is_derivation(self):
        rng = random.Random(7)
        spec = build_csv(Fraction(1, 2), -2)
        for _ in range(8):
            x = GenPoly.zero()
            for fam in spec.families:
                if rng.random() < 0.7:
                    x = x + GenPoly.unit(
                        fam,
                        rng.randint(-1, 1),
                        P(f"{rng.randint(-2, 2)}*d^2 + {rng.randint(-2, 2)}"),
                    )
            deriv = ad(spec, x, window=3)
            assert check_derivation(spec, deriv, window=1).all_zero

    def test_residual_linearity(self):
        spec = build_csv(0, 0)
        d1 = d_vec(spec, {0: ONE}, window=2)
        d2 = ad(spec, GenPoly.unit("L", 0, P("d")), window=2)
        c1, c2 = GaussianRational.of(3), GaussianRational.of(Fraction(-1, 2))
        mix = combine(d1, d2, c1, c2)
        from confalg.derivations import leibniz_residual

        for fam_x, i, fam_y, j in (("L", 0, "L", 1), ("L", -1, "M", 1), ("Y", 0, "Y", 0)):
            r1 = leibniz_residual(spec, d1, fam_x, i, fam_y, j)
            r2 = leibniz_residual(spec, d2, fam_x, i, fam_y, j)
            rm = leibniz_residual(spec, mix, fam_x, i, fam_y, j)
            assert rm == r1.scale(MPoly.const(c1)) + r2.scale(MPoly.const(c2))

    def test_compatibility_with_module_structure(self):
        # D(p(d) x) = p(d + l) D(x) holds structurally
        spec = build_csv(1, 0)
        deriv = d_vec(spec, {0: ONE}, window=3)
        x = GenPoly.unit("L", 1, P("d^2 + 3"))
        got = apply_derivation(deriv, x)
        assert got == deriv.image("L", 1).scale(P("(d + l)^2 + 3"))


class TestSolver:
    def test_generic_point_inner_only(self):
        res = solve_graded_derivations(build_csv(2, 3), degree=0, bound=4, window=2)
        assert (res.dimension, res.inner_rank, res.extra_dimension) == (12, 12, 0)

    def test_loop_point_extra_line(self):
        res = solve_graded_derivations(build_csv(1, 0), degree=0, bound=4, window=2)
        assert res.extra_dimension == 1

    def test_origin_degree_one_inner(self):
        res = solve_graded_derivations(build_csv(0, 0), degree=1, bound=4, window=2)
        assert res.extra_dimension == 0

    def test_chv_points(self):
        assert (
            solve_graded_derivations(build_chv(1, 0), degree=0, bound=4, window=2)
            .extra_dimension
            == 1
        )
        assert (
            solve_graded_derivations(build_chv(0, 0), degree=0, bound=4, window=2)
            .extra_dimension
            == 0
        )

    def test_pair_sets_agree(self):
        for builder, a in ((build_csv, 1), (build_csv, 2), (build_chv, 1)):
            spec = builder(a, 0)
            lzero = solve_graded_derivations(spec, 0, 3, 1, pairs="lzero")
            full = solve_graded_derivations(spec, 0, 3, 1, pairs="all")
            assert lzero.extra_dimension == full.extra_dimension

    def test_basis_elements_are_derivations(self):
        res = solve_graded_derivations(build_csv(1, 0), degree=0, bound=3, window=2)
        spec = build_csv(1, 0)
        for deriv in res.basis:
            assert check_derivation(spec, deriv, window=1).all_zero

    def test_symbolic_parameters_rejected(self):
        with pytest.raises(ValueError):
            solve_graded_derivations(build_csv("sym", 0))


class TestDecompose:
    def test_pure_inner_round_trip(self):
        spec = build_csv(2, 3)
        x = GenPoly.unit("L", 1, P("d^2"))
        dec = decompose(spec, ad(spec, x, window=3), bound=4)
        assert dec.x == x and not dec.q and dec.position == 1

    def test_mixed_round_trip(self):
        spec = build_csv(1, 0)
        x = GenPoly.unit("M", 0)
        deriv = ad(spec, x, window=3)
        for key, img in d_vec(spec, {0: GaussianRational.of(7)}, window=3).images.items():
            deriv.images[key] = deriv.images.get(key, GenPoly.zero()) + img
        dec = decompose(spec, deriv, bound=4)
        assert dec.x == x and dec.q == GaussianRational.of(7)

    def test_pure_family_part(self):
        spec = build_csv(1, 5)
        dec = decompose(spec, d_vec(spec, {2: ONE}, window=3), bound=4)
        assert dec.x.is_zero() and dec.q == ONE and dec.position == 2

    def test_family_not_decomposable_off_a1(self):
        spec = build_csv(0, 0)
        with pytest.raises(NotDecomposable):
            decompose(spec, d_vec(spec, {0: ONE}, window=3), bound=4)

    def test_degree_detection(self):
        spec = build_csv(1, 0)
        assert derivation_degree(ad(spec, GenPoly.unit("Y", -2), window=3)) == -2
        mixed = combine(
            ad(spec, GenPoly.unit("L", 0), window=3),
            ad(spec, GenPoly.unit("M", 1), window=3),
            ONE,
            ONE,
        )
        with pytest.raises(NotDecomposable):
            derivation_degree(mixed)


class TestSerialization:
    def test_round_trip(self):
        spec = build_csv(1, 0)
        deriv = ad(spec, GenPoly.unit("M", 0) + GenPoly.unit("L", 0, P("d")), window=2)
        text = serialize_derivation(deriv)
        back = parse_derivation(text)
        assert back.images == deriv.images
        assert serialize_derivation(back) == text
