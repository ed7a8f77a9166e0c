import random
from fractions import Fraction

import pytest

from confalg.catalog import build_csv
from confalg.classify import (
    certify_self_commuting_d_free,
    classify_graded,
    classify_rank1,
    materialize_graded,
    materialize_rank1,
    weight_equation_kernel,
)
from confalg.modules import BitSeq, check_module_axioms
from confalg.poly import GaussianRational, MPoly

GRID = [(0, 0), (1, 0), (0, 1), (2, 5), (1, 1)]


class TestCertificates:
    def test_leading_factorization(self):
        # raises on failure; covers every profile up to the bound
        certify_self_commuting_d_free(4)

    def test_weight_kernel_zero_off_origin(self):
        for A, B in ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(2)),
                     (Fraction(-1, 2), Fraction(1))):
            assert weight_equation_kernel(
                GaussianRational.of(A), GaussianRational.of(B), 6
            ) == []

    def test_weight_kernel_constants_at_origin(self):
        kernel = weight_equation_kernel(
            GaussianRational.of(0), GaussianRational.of(0), 6
        )
        assert len(kernel) == 1 and kernel[0] == MPoly.const(1)


class TestRank1:
    @pytest.mark.parametrize("a,b", GRID)
    def test_csv_grid(self, a, b):
        outcome = classify_rank1("csv", a, b)
        assert outcome.has_extension == ((a, b) == (0, 0))
        assert outcome.families["M"] == "0"
        if outcome.has_extension:
            assert outcome.families["Y"] == "d*c^i"
        else:
            assert outcome.families["Y"] == "0"

    @pytest.mark.parametrize("a,b", GRID)
    def test_chv_grid(self, a, b):
        outcome = classify_rank1("chv", a, b)
        assert outcome.has_extension == ((a, b) == (1, 0))
        assert outcome.families["M"] == ("d*c^i" if outcome.has_extension else "0")

    def test_round_trip_materialization(self):
        for a, b in ((0, 0), (2, 5)):
            spec = build_csv(a, b)
            outcome = classify_rank1("csv", a, b)
            module = materialize_rank1(outcome, spec)
            assert check_module_axioms(spec, module).all_zero

    def test_steps_are_recorded(self):
        outcome = classify_rank1("csv", 0, 0)
        names = [s.name for s in outcome.steps]
        assert "weight equation" in names
        assert all(s.ok for s in outcome.steps)

    def test_needs_numeric_weights(self):
        with pytest.raises(ValueError):
            classify_rank1("csv", "sym", 0)


class TestGradedUniformBase:
    @pytest.mark.parametrize("a,b", GRID)
    def test_csv(self, a, b):
        outcome = classify_graded("csv", a, b, "vab")
        assert outcome.families["M"] == "0"
        want = "d" if (a, b) == (0, 0) else "0"
        assert outcome.families["Y"] == want

    @pytest.mark.parametrize("a,b", GRID)
    def test_chv(self, a, b):
        outcome = classify_graded("chv", a, b, "vab")
        want = "d" if (a, b) == (1, 0) else "0"
        assert outcome.families["M"] == want

    def test_round_trip(self):
        spec = build_csv(0, 0)
        outcome = classify_graded("csv", 0, 0, "vab")
        module = materialize_graded(outcome, spec)
        assert check_module_axioms(spec, module, 3, 2).all_zero


class TestGradedCaseSplitBase:
    def test_constant_bits_keep_extension(self):
        for bit in (0, 1):
            bits = BitSeq(-9, (bit,) * 19)
            outcome = classify_graded("csv", 0, 0, "vAb", bitseq=bits)
            assert outcome.families["Y"] == "d"
            assert not outcome.collapsed
            spec = build_csv(0, 0)
            module = materialize_graded(outcome, spec, bitseq=bits)
            assert check_module_axioms(spec, module, 3, 2).all_zero

    def test_mixed_bits_collapse_extension(self):
        # a non-constant sequence admits no flat scalar extension: the
        # classifier must report the collapse the axiom checker confirms
        bits = BitSeq.from_string("0110100010101100000", -9)
        outcome = classify_graded("csv", 0, 0, "vAb", bitseq=bits)
        assert outcome.families["Y"] == "0"
        assert outcome.collapsed

    def test_mixed_bits_chv(self):
        bits = BitSeq.from_string("1001011110000101010", -9)
        outcome = classify_graded("chv", 1, 0, "vAb", bitseq=bits)
        assert outcome.families["M"] == "0"
        assert outcome.collapsed

    def test_off_extension_points_zero(self):
        rng = random.Random(23)
        bits = BitSeq.random(rng, -9, 9)
        for a, b in ((1, 0), (0, 1), (1, 1)):
            outcome = classify_graded("csv", a, b, "vAb", bitseq=bits)
            assert outcome.families["Y"] == "0"
            assert outcome.families["M"] == "0"

    def test_classifier_agrees_with_axiom_checker(self):
        # whenever the classifier keeps the extension, the flat family is a
        # module; whenever it collapses, the flat family fails the axioms
        rng = random.Random(31)
        spec = build_csv(0, 0)
        from confalg.modules import build_graded

        for _ in range(6):
            bits = BitSeq.random(rng, -9, 9)
            outcome = classify_graded("csv", 0, 0, "vAb", bitseq=bits)
            flat = build_graded(spec, "vAb", bits, "sym", "sym")
            flat_ok = check_module_axioms(spec, flat, 3, 2).all_zero
            assert flat_ok == (outcome.families["Y"] == "d")
