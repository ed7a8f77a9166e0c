"""Acceptance gate: one test per verification-suite criterion.

Every criterion is exact (zero residual / exact dimension or family match)
at its stated desk-scale configuration.  Each test prints one line per
check record; run with ``pytest tests/test_acceptance.py -v -s`` to see
them.

Known red: criterion 7 asserts that the case-split graded base admits the
flat scalar extension at the distinguished weight point for seeded random
bit sequences.  Exact computation shows the flat extension of a
non-constant case-split base fails the mixed-index module identity (see
tests/test_modules.py::TestGradedAxioms and the classifier's collapse
reports), so that sub-assertion fails for generic seeds.  The checks are
implemented as stated rather than weakened to fit.
"""

from confalg.suite import (
    DEFAULT_SEED,
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
)


def _assert_records(records):
    for record in records:
        mark = "PASS" if record.passed else "FAIL"
        print(f"[{mark}] {record.check_id}: {record.status} ({record.elapsed_ms:.0f} ms)")
    bad = [r for r in records if not r.passed]
    assert not bad, "; ".join(
        f"{r.check_id}: {r.status}" + (f" [{r.detail}]" if r.detail else "")
        for r in bad
    )


def test_criterion_1_construction_sufficiency():
    _assert_records(criterion_1())


def test_criterion_2_construction_necessity_and_solver():
    _assert_records(criterion_2(DEFAULT_SEED))


def test_criterion_3_motivating_lie_algebra():
    _assert_records(criterion_3())


def test_criterion_4_derivation_dichotomy():
    _assert_records(criterion_4())


def test_criterion_5_m_valued_family_and_decompose():
    _assert_records(criterion_5(DEFAULT_SEED))


def test_criterion_6_rank_one_classification():
    _assert_records(criterion_6())


def test_criterion_7_graded_classification():
    # the vAb sub-checks fail for non-constant seeded bit sequences: the
    # stated flat extension is not a module there (verified exactly); kept
    # as stated, not weakened
    _assert_records(criterion_7(DEFAULT_SEED))


def test_criterion_8_reducibility_witness():
    _assert_records(criterion_8(DEFAULT_SEED))


def test_criterion_9_property_suites():
    _assert_records(criterion_9(DEFAULT_SEED))
