import pytest
from hypothesis import given
from hypothesis import strategies as st

from winshift.errors import UnknownWord
from winshift.words import (
    THUE_MORSE,
    Substitution,
    factor_complexity,
    factor_set,
    fixed_point_prefix,
    get_word,
    right_special,
    z_cover,
    z_prefix_recurrence,
)


def tm_closed(n):
    return bin(n).count("1") % 2


def pd_closed(n):
    m = n + 1
    v = 0
    while m % 2 == 0:
        m //= 2
        v += 1
    return v % 2


def pf_closed(n):
    m = n + 1
    while m % 2 == 0:
        m //= 2
    return 1 if (m // 2) % 2 == 0 else 0


def rs_closed(n):
    b = bin(n)[2:]
    return sum(1 for i in range(len(b) - 1) if b[i : i + 2] == "11") % 2


CLOSED = {"thue-morse": tm_closed, "period-doubling": pd_closed, "paperfolding": pf_closed, "rudin-shapiro": rs_closed}


@pytest.mark.parametrize("name", sorted(CLOSED))
def test_prefix_and_dfao_agree_with_closed_form(name):
    w = get_word(name)
    f = CLOSED[name]
    text = w.prefix(4096)
    assert text == "".join(str(f(n)) for n in range(4096))
    for n in range(0, 4096, 37):
        assert w.letter(n) == f(n)


@given(st.integers(0, 10**9))
def test_tm_letter_any_index(n):
    assert get_word("tm").letter(n) == tm_closed(n)


def test_known_prefixes():
    assert get_word("tm").prefix(16) == "0110100110010110"
    assert get_word("pd").prefix(16) == "0100010101000100"
    assert get_word("pf").prefix(16) == "1101100111001001"
    assert get_word("rs").prefix(16) == "0001001000011101"


def test_cassaigne_word():
    z = get_word("z")
    assert z.prefix(30) == z_prefix_recurrence(30)
    assert z.prefix(10_000) == z_prefix_recurrence(10_000)
    text = z_prefix_recurrence(3000)
    for n in range(3000):
        assert z.letter(n) == text[n]


def test_substitution_basics():
    assert THUE_MORSE.is_uniform() and THUE_MORSE.is_prolongable(0)
    assert fixed_point_prefix(THUE_MORSE, 0, 8) == [0, 1, 1, 0, 1, 0, 0, 1]
    s = Substitution({"a": "abab", "b": "b"})
    assert not s.is_uniform()
    assert "".join(s.apply("ab")) == "ababb"


def test_tm_factors():
    assert sorted(factor_set(get_word("tm"), 4)) == [
        "0010", "0011", "0100", "0101", "0110", "1001", "1010", "1011", "1100", "1101",
    ]
    # Thue-Morse factor complexity
    assert [factor_complexity(get_word("tm"), n) for n in range(1, 11)] == [2, 4, 6, 10, 12, 16, 20, 22, 24, 28]


@pytest.mark.parametrize("name", sorted(CLOSED))
def test_safe_prefix_is_enough(name):
    w = get_word(name)
    for n in (1, 5, 12, 20):
        assert factor_set(w, n) == factor_set(w, n, prefix_len=200_000)


def test_right_special():
    tm = get_word("tm")
    assert right_special(tm, 0) == {""}
    assert right_special(tm, 1) == {"0", "1"}
    for n in range(1, 12):
        rs = right_special(tm, n)
        ext = factor_set(tm, n + 1)
        for u in factor_set(tm, n):
            assert (u in rs) == ({u + "0", u + "1"} <= ext)


def test_z_cover_matches_long_prefix():
    z = get_word("z")
    text = z.prefix(2_000_000)
    for n in range(1, 19):
        assert factor_set(z, n) == factor_set(text, n)
    # a long prefix misses factors that only occur after long runs of b
    assert factor_set(z, 30) > factor_set(text, 30)


def test_z_cover_shape():
    p3 = "ababbaba"
    assert z_prefix_recurrence(8) == p3
    assert z_cover(5) == [p3 + "b" * j + p3 for j in (3, 4, 5)]


def test_unknown_word():
    with pytest.raises(UnknownWord):
        get_word("fibonacci-word")
