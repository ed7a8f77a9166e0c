import random
from fractions import Fraction

import pytest

from confalg.catalog import build_chv, build_csv, build_cw
from confalg.lca import GenPoly, WindowTooSmall
from confalg.modules import (
    BitSeq,
    apply_action,
    build_graded,
    build_rank1,
    check_module_axioms,
    graded_from_tables,
    parse_module,
    reducibility_witness,
    relations_oracle,
    serialize_module,
)
from confalg.poly import MPoly, parse_poly

P = parse_poly


class TestBitSeq:
    def test_window_and_lookup(self):
        bits = BitSeq.from_string("0110", -1)
        assert bits.at(-1) == 0 and bits.at(0) == 1 and bits.hi == 2
        with pytest.raises(WindowTooSmall):
            bits.at(3)

    def test_round_trip(self):
        bits = BitSeq.from_string("10101", -2)
        assert BitSeq.from_string(bits.to_string(), bits.lo) == bits

    def test_constant_detection(self):
        assert BitSeq(-1, (1, 1, 1)).is_constant()
        assert not BitSeq(-1, (1, 0, 1)).is_constant()


class TestRank1Builder:
    def test_extension_slot_follows_families(self):
        m_csv = build_rank1(build_csv(0, 0), 1, 0, 2, 3)
        assert m_csv.template("Y") == MPoly.const(3)
        assert m_csv.template("M").is_zero()
        m_chv = build_rank1(build_chv(1, 0), 1, 0, 2, 3)
        assert m_chv.template("M") == MPoly.const(3)

    def test_numeric_action_scaling(self):
        module = build_rank1(build_csv(0, 0), 1, 0, 2, 3)
        assert module.action("Y", 2) == MPoly.const(12)
        assert module.action("L", -1) == P("d + l").scale(Fraction(1, 2))

    def test_zero_scale_base(self):
        module = build_rank1(build_csv(0, 0), 1, 5, 0, 0)
        assert module.action("L", 1).is_zero()
        assert module.action("L", 0) == P("d + l + 5")


class TestRank1Axioms:
    def test_trivial_extension_symbolic(self):
        # d = 0 passes for fully symbolic algebra weights
        spec = build_csv("sym", "sym")
        module = build_rank1(spec, "sym", "sym", "sym", 0)
        assert check_module_axioms(spec, module).all_zero

    def test_extension_at_origin_symbolic(self):
        spec = build_csv(0, 0)
        module = build_rank1(spec, "sym", "sym", "sym", "sym")
        assert check_module_axioms(spec, module).all_zero

    def test_extension_blocked_elsewhere(self):
        spec = build_csv(1, 1)
        module = build_rank1(spec, "sym", "sym", "sym", "sym")
        report = check_module_axioms(spec, module)
        assert not report.all_zero
        assert any("dd" in str(res) for res in report.residuals.values())

    def test_chv_extension_point(self):
        spec = build_chv(1, 0)
        module = build_rank1(spec, "sym", "sym", "sym", "sym")
        assert check_module_axioms(spec, module).all_zero

    def test_template_residual_matches_explicit_indices(self):
        # explicit numeric actions agree with the index-free residual scaling
        spec = build_csv(0, 0)
        module = build_rank1(spec, 2, Fraction(1, 2), Fraction(-3, 2), 1)
        assert check_module_axioms(spec, module).all_zero
        c = module.c_value()
        for i, j in ((2, -1), (-2, -1), (0, 3)):
            scale = c ** (i + j)
            assert module.action("L", i) == module.template("L").scale(c**i)
            del scale

    def test_cw_rank1(self):
        spec = build_cw()
        module = build_rank1(spec, "sym", "sym", "sym")
        assert check_module_axioms(spec, module).all_zero


class TestGradedBuilder:
    def test_vab_action(self):
        spec = build_csv(0, 0)
        module = build_graded(spec, "vab", 2, 1, 0)
        assert module.action("L", 3, 0) == P("d + 2*l + 1")

    def test_vAb_cases(self):
        spec = build_csv(0, 0)
        bits = BitSeq.from_string("0101100", -3)
        module = build_graded(spec, "vAb", bits, "sym", 0)
        # (bits[m], bits[i+m]) selects the action shape
        assert module.action("L", 1, -3) == MPoly.const(1)              # (0, 1)
        assert module.action("L", 2, -2) == P("d + beta + l")           # (1, 1)
        assert module.action("L", 1, 1) == P("(d + beta)*(d + beta + l)")  # (1, 0)
        assert module.action("L", 2, -3) == P("d + beta")               # (0, 0)

    def test_vAb_needs_bits(self):
        with pytest.raises(TypeError):
            build_graded(build_csv(0, 0), "vAb", "sym", "sym", 0)

    def test_window_guard(self):
        spec = build_csv(0, 0)
        bits = BitSeq.from_string("01011", -2)
        module = build_graded(spec, "vAb", bits, "sym", 0)
        with pytest.raises(WindowTooSmall):
            check_module_axioms(spec, module, n_basis=3, k_gen=2)


class TestGradedAxioms:
    def test_uniform_extension_symbolic_at_origin(self):
        spec = build_csv(0, 0)
        module = build_graded(spec, "vab", "sym", "sym", "sym")
        assert check_module_axioms(spec, module, 3, 2).all_zero

    def test_uniform_extension_fails_off_origin(self):
        spec = build_csv(1, 0)
        module = build_graded(spec, "vab", "sym", "sym", "sym")
        assert not check_module_axioms(spec, module, 2, 1).all_zero

    def test_case_split_flat_extension_needs_constant_bits(self):
        # the flat extension of a case-split base is a module exactly when
        # the bit sequence is constant on the window
        spec = build_csv(0, 0)
        mixed = BitSeq.from_string("0" * 7 + "1" + "0" * 7, -7)
        module = build_graded(spec, "vAb", mixed, "sym", "sym")
        report = check_module_axioms(spec, module, 3, 2)
        assert not report.all_zero
        const = BitSeq(-7, (1,) * 15)
        module2 = build_graded(spec, "vAb", const, "sym", "sym")
        assert check_module_axioms(spec, module2, 3, 2).all_zero

    def test_chv_graded_extension(self):
        spec = build_chv(1, 0)
        module = build_graded(spec, "vab", "sym", "sym", "sym")
        assert check_module_axioms(spec, module, 3, 2).all_zero


class TestRelationsOracle:
    def test_matches_axioms_on_valid_module(self):
        spec = build_csv(0, 0)
        module = build_graded(spec, "vab", "sym", "sym", "sym")
        assert relations_oracle(module, 0, 0, 3, 2).all_zero

    def test_constant_g_with_d_dependent_h(self):
        e = MPoly.var("e")
        tables = {
            "L": lambda i, m: P("d + alpha*l + beta"),
            "M": lambda i, m: e,
            "Y": lambda i, m: P("d^2 + l"),
        }
        module = graded_from_tables(("L", "M", "Y"), tables)
        report = relations_oracle(module, 1, 0, 2, 1)
        broken = {key[0] for key in report.residuals}
        assert "MY" in broken

    def test_constant_g_flat_h_breaks_yy(self):
        e = MPoly.var("e")
        tables = {
            "L": lambda i, m: P("d + alpha*l + beta"),
            "M": lambda i, m: e,
            "Y": lambda i, m: MPoly.zero(),
        }
        module = graded_from_tables(("L", "M", "Y"), tables)
        report = relations_oracle(module, 1, 0, 2, 1)
        yy = [res for key, res in report.residuals.items() if key[0] == "YY"]
        assert yy and all(res == P("m - l") * e for res in yy)

    def test_all_zero_tables(self):
        tables = {
            "L": lambda i, m: P("d + alpha*l + beta"),
            "M": lambda i, m: MPoly.zero(),
            "Y": lambda i, m: MPoly.zero(),
        }
        module = graded_from_tables(("L", "M", "Y"), tables)
        report = relations_oracle(module, "sym", "sym", 2, 1)
        assert report.all_zero

    def test_equivalence_random_samples(self):
        rng = random.Random(99)
        grid = [(0, 0), (1, 0), (0, 1), (1, 1)]
        for _ in range(12):
            a, b = grid[rng.randrange(len(grid))]
            spec = build_csv(a, b)
            d_val = rng.choice([0, 1, Fraction(rng.randint(-3, 3), 2)])
            if rng.random() < 0.5:
                module = build_graded(spec, "vab", rng.randint(-2, 2), rng.randint(-2, 2), d_val)
            else:
                module = build_graded(
                    spec, "vAb", BitSeq.random(rng, -9, 9), rng.randint(-2, 2), d_val
                )
            axioms = check_module_axioms(spec, module, 3, 2)
            oracle = relations_oracle(module, a, b, 3, 2)
            assert axioms.all_zero == oracle.all_zero


class TestActionApplication:
    def test_sesquilinearity_rank1(self):
        rng = random.Random(17)
        spec = build_csv(0, 0)
        module = build_rank1(spec, 1, 2, 3, 1)
        lam = MPoly.var("l")
        for _ in range(10):
            fam = rng.choice(spec.families)
            i = rng.randint(-2, 2)
            p = P(f"{rng.randint(-3, 3)}*d + {rng.randint(0, 2)}")
            vec = {0: P(f"d^2 + {rng.randint(-2, 2)}")}
            x = GenPoly.unit(fam, i)
            dx = GenPoly.unit(fam, i, MPoly.var("d"))
            lhs = apply_action(module, dx, vec)
            rhs = {k: P("-l") * v for k, v in apply_action(module, x, vec).items()}
            assert lhs == {k: v for k, v in rhs.items() if not v.is_zero()}
            # a . (d v) = (d + l) (a . v)
            dvec = {0: MPoly.var("d") * vec[0]}
            lhs2 = apply_action(module, x, dvec)
            rhs2 = {
                k: (MPoly.var("d") + lam) * v
                for k, v in apply_action(module, x, vec).items()
            }
            assert lhs2 == {k: v for k, v in rhs2.items() if not v.is_zero()}
            del p

    def test_graded_action_lands_at_index_sum(self):
        spec = build_csv(0, 0)
        module = build_graded(spec, "vab", "sym", "sym", "sym")
        out = apply_action(module, GenPoly.unit("Y", 2), {1: MPoly.const(1)})
        assert set(out) == {3}


class TestWitness:
    def test_alpha_zero_finds_linear_witness(self):
        module = build_rank1(build_csv(0, 0), 0, 5, 1, 0)
        res = reducibility_witness(module, 3)
        assert res.witness == P("d + 5") and res.degree == 1
        # submodule condition verified independently
        shifted = res.witness.shift("d", MPoly.var("l"))
        assert (shifted * module.template("L")).divide_exact(res.witness)

    def test_alpha_nonzero_no_witness(self):
        module = build_rank1(build_csv(0, 0), 1, 0, 1, 0)
        res = reducibility_witness(module, 3)
        assert res.witness is None and not res.undecided

    def test_nonzero_extension_blocks_witness(self):
        module = build_rank1(build_csv(0, 0), 0, 5, 1, 2)
        res = reducibility_witness(module, 3)
        assert res.witness is None

    def test_zero_scale_base_flagged(self):
        module = build_rank1(build_csv(0, 0), 1, 5, 0, 0)
        res = reducibility_witness(module, 3)
        assert res.trivial_module
        assert not res.all_actions_zero

    def test_symbolic_parameters_rejected(self):
        module = build_rank1(build_csv(0, 0), "sym", 0, 1, 0)
        with pytest.raises(ValueError):
            reducibility_witness(module)


class TestSerialization:
    def test_rank1_round_trip(self):
        spec = build_csv(0, 0)
        module = build_rank1(spec, Fraction(1, 2), "sym", 2, "sym")
        text = serialize_module(module)
        back = parse_module(text, spec)
        assert serialize_module(back) == text
        assert back.template("L") == module.template("L")

    def test_graded_round_trip(self):
        spec = build_csv(0, 0)
        bits = BitSeq.from_string("011010", -3)
        module = build_graded(spec, "vAb", bits, "sym", 1)
        text = serialize_module(module)
        back = parse_module(text, spec)
        assert back.bitseq == bits
        assert serialize_module(back) == text
