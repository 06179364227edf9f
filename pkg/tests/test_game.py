import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from winshift.game import (
    FactorIndex,
    StrategyTree,
    TargetSet,
    format_compressed,
    is_winning,
    max_branchings,
    read_word_list,
    shortest_sum_witness,
    slice_target,
    verify_strategy,
    winning_set,
    winning_slice_bounded,
)
from winshift.words import get_word, right_special


def brute_winning_set(x: TargetSet) -> set:
    """Every choice sequence checked with the memoized game recursion."""
    q = len(x.alphabet)
    return {a for a in itertools.product(range(q), repeat=x.length) if is_winning(x, a) is not None}


@st.composite
def target_sets(draw, max_len=5, letters="01"):
    n = draw(st.integers(1, max_len))
    alphabet = letters[: draw(st.integers(2, len(letters)))]
    universe = ["".join(w) for w in itertools.product(alphabet, repeat=n)]
    words = draw(st.sets(st.sampled_from(universe), max_size=min(len(universe), 24)))
    return TargetSet.of(words, alphabet, n)


def test_intro_example():
    x = TargetSet.of(["000", "110", "111"])
    assert winning_set(x) == {(0, 0, 0), (0, 0, 1), (1, 0, 0)}
    assert is_winning(x, "101") is None


def test_strategy_for_1101():
    x = slice_target(get_word("tm"), 4)
    tree = is_winning(x, "1101")
    assert tree.branch_pattern() == (2, 2, 1, 2)
    assert verify_strategy(tree, x, "1101")
    assert sorted(tree.words()) == sorted(set(tree.words()))
    assert len(list(tree.words())) == 8
    assert not verify_strategy(tree, x, "1111")
    assert not verify_strategy(StrategyTree(), x, "0000")


def test_length_mismatch():
    with pytest.raises(ValueError):
        is_winning(TargetSet.of(["00"]), "0")
    with pytest.raises(ValueError):
        TargetSet.of(["0", "00"])


def test_word_list_file(tmp_path):
    f = tmp_path / "w.txt"
    f.write_text("000\n110\n\n111\n")
    assert read_word_list(f).words == {"000", "110", "111"}


@given(target_sets())
def test_trunk_search_equals_brute_force(x):
    assert winning_set(x) == brute_winning_set(x)


@given(target_sets(max_len=4, letters="012"))
def test_trunk_search_ternary(x):
    assert winning_set(x) == brute_winning_set(x)


@given(target_sets())
def test_winning_sets_are_hereditary(x):
    w = winning_set(x)
    for a in w:
        for i, v in enumerate(a):
            if v:
                b = a[:i] + (v - 1,) + a[i + 1 :]
                assert b in w


@given(target_sets(letters="012"))
def test_cardinality_is_preserved(x):
    assert len(winning_set(x)) == len(x)


@given(target_sets(), st.data())
def test_monotone(x, data):
    smaller = TargetSet.of(data.draw(st.sets(st.sampled_from(sorted(x.words)))) if x.words else [], x.alphabet, x.length)
    assert winning_set(smaller) <= winning_set(x)


@given(target_sets())
def test_strategies_verify(x):
    for a in winning_set(x):
        assert verify_strategy(is_winning(x, a), x, a)


@given(target_sets())
def test_max_branchings(x):
    w = winning_set(x)
    assert max_branchings(x) == (max(sum(a) for a in w) if w else -1)


def test_bounded_slice():
    tm = get_word("tm")
    full = winning_set(slice_target(tm, 10))
    for k in range(4):
        assert winning_slice_bounded(tm, 10, k) == {a for a in full if sum(a) <= k}


def test_max_branchings_of_words():
    assert max_branchings(slice_target(get_word("tm"), 64)) == 3
    assert max_branchings(slice_target(get_word("pd"), 64)) == 2


@pytest.mark.parametrize("m", [0, 1, 4, 9, 17, 30])
def test_factor_index_right_special(m):
    tm = get_word("tm")
    idx = FactorIndex(tm.prefix(3000), 40)
    assert idx.right_special(m) == right_special(tm.prefix(3000), m)


@given(st.lists(st.text("ab", min_size=1, max_size=30), min_size=1, max_size=4), st.integers(0, 8))
def test_factor_index_many_texts(texts, m):
    idx = FactorIndex(texts, 10)
    ext: dict = {}
    for t in texts:
        for p in range(len(t) - m):
            ext.setdefault(t[p : p + m], set()).add(t[p + m])
    assert idx.right_special(m) == {u for u, cs in ext.items() if len(cs) >= 2}


def test_shortest_witness_thue_morse():
    tm = get_word("tm")
    assert shortest_sum_witness(tm, 3, 40) == (1, 1, 0, 1)
    assert shortest_sum_witness(tm, 4, 200, prefix_len=8192) is None


@given(target_sets(max_len=6).filter(lambda x: len(x.words) > 1), st.integers(1, 3))
def test_shortest_witness_matches_brute_force(x, k):
    # the words act as texts; the witness ranges over factors of any of them
    texts = sorted(x.words)
    best = None
    for n in range(1, x.length + 1):
        facts = {t[p : p + n] for t in texts for p in range(len(t) - n + 1)}
        cands = [a for a in winning_set(TargetSet.of(facts, x.alphabet, n)) if sum(a) >= k]
        if cands:
            best = min(cands)
            break
    idx = FactorIndex(texts, x.length)
    assert shortest_sum_witness(None, k, x.length, index=idx) == best


def test_format_compressed():
    assert format_compressed((1, 0, 1) + (0,) * 4 + (1,) + (0,) * 197 + (1,)) == "1 0 1 0^4 1 0^197 1"
    assert format_compressed(()) == ""


def test_period_doubling_boundary_case():
    # ones at 2 and 4: gap 2 = 2^1 and a - 1 = 1 = 2^0, yet no strategy exists;
    # the winning pairs are those with a - 1 < 2^(k-1)
    from winshift.claims import _characterization, _power_of_two_gap

    pd = get_word("pd")
    assert is_winning(slice_target(pd, 4), "0101") is None
    assert {"".join(f) for f in slice_target(pd, 4).words} == {"0001", "0010", "0100", "0101", "1000", "1010"}

    def strict(ones):
        if len(ones) <= 1:
            return True
        if len(ones) == 2:
            a, b = ones
            k = _power_of_two_gap(a, b)
            return k is not None and a - 1 < 2 ** (k - 1)
        return False

    expected, actual, _ = _characterization("period-doubling", strict)
    assert actual == expected == (0, 0)
