"""One test per acceptance criterion, each backed by a registered claim.

Every test prints the claim report; the terminal summary lists one
PASS/FAIL line per criterion.
"""

import resource

from winshift.claims import CLAIMS, get_claim

BY_CRITERION = {c.criterion: c.claim for c in CLAIMS.values()}


def check(record_claim, criterion):
    result = record_claim(get_claim(BY_CRITERION[criterion]).check())
    assert result.passed, result.report()
    return result


def test_every_criterion_is_registered():
    assert sorted(BY_CRITERION) == list(range(1, 12))


def test_criterion_01_intro_example(record_claim):
    check(record_claim, 1)


def test_criterion_02_thue_morse_length_four(record_claim):
    check(record_claim, 2)


def test_criterion_03_cardinality_preserved(record_claim):
    check(record_claim, 3)


def test_criterion_04_thue_morse_characterization(record_claim):
    check(record_claim, 4)


def test_criterion_05_period_doubling_characterization(record_claim):
    check(record_claim, 5)


def test_criterion_06_coding_dimensions(record_claim):
    check(record_claim, 6)
    peak = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss * 1024
    assert peak <= 8 * 2**30


def test_criterion_07_engine_matches_oracle(record_claim):
    check(record_claim, 7)


def test_criterion_08_boolean_automaton(record_claim):
    check(record_claim, 8)


def test_criterion_09_z_numeration_table(record_claim):
    check(record_claim, 9)


def test_criterion_10_z_sum_four_witness(record_claim):
    check(record_claim, 10)


def test_criterion_11_base2_arithmetic(record_claim):
    check(record_claim, 11)
