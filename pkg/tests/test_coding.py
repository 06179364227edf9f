import pytest
from hypothesis import given
from hypothesis import strategies as st

from winshift.coding import (
    FiniteSupportSeq,
    abc_decode,
    abc_encode,
    compositions,
    erase,
    is_abc_tuple,
    nu_decode,
    nu_encode,
    nu_from_pv,
    pv_extract,
    support,
    tuples_from_csv,
    tuples_to_csv,
)

words = st.lists(st.integers(0, 3), max_size=12)
binary = st.lists(st.integers(0, 1), max_size=10)


def test_nu_example():
    y = "1002010"
    assert nu_encode(y) == (0, 3, 3, 5)
    assert erase(y) == (1, 2, 1)
    assert support(y) == (0, 3, 5)
    assert nu_decode((0, 3, 3, 5)).to_word(7) == (1, 0, 0, 2, 0, 1, 0)


def test_abc_examples():
    assert abc_encode("1000100000001") == (1, 5, 13)
    assert abc_encode("00100000001") == (0, 3, 11)
    assert abc_encode("") == (0, 0, 0)
    assert abc_decode((1, 5, 13)).to_word() == tuple(int(c) for c in "1000100000001")
    assert not is_abc_tuple((3, 0, 11)) and not is_abc_tuple((0, 5, 5)) and is_abc_tuple((0, 0, 2))
    with pytest.raises(ValueError):
        abc_encode("12")
    with pytest.raises(ValueError):
        abc_encode("1111")


def test_sequence_validation():
    with pytest.raises(ValueError):
        FiniteSupportSeq(((2, 1), (1, 1)))
    with pytest.raises(ValueError):
        FiniteSupportSeq(((0, 0),))
    with pytest.raises(ValueError):
        nu_decode((3, 1))
    with pytest.raises(ValueError):
        FiniteSupportSeq.from_word("101").to_word(2)


@given(words)
def test_nu_roundtrip(w):
    y = FiniteSupportSeq.from_word(w)
    assert nu_decode(nu_encode(y)) == y
    assert len(nu_encode(y)) == y.total == sum(w)
    assert nu_from_pv(erase(y), support(y)) == nu_encode(y)


@given(binary)
def test_abc_roundtrip(w):
    if sum(w) <= 4:
        t = abc_encode(w, 4)
        assert is_abc_tuple(t)
        assert abc_decode(t) == FiniteSupportSeq.from_word(w)


@given(st.sets(st.tuples(st.integers(0, 50), st.integers(0, 50))))
def test_csv_roundtrip(ts):
    assert tuples_from_csv(tuples_to_csv(ts)) == ts


def test_csv_empty_tuple():
    assert tuples_from_csv(tuples_to_csv({(), (1,)})) == {(), (1,)}


def test_pv_extract():
    ws = ["0", "1", "01", "11", "0101", "2"]
    assert pv_extract(ws, "1") == {(0,), (1,)}
    assert pv_extract(ws, "11") == {(0, 1), (1, 3)}
    assert pv_extract(ws, "2") == {(0,)}


@pytest.mark.parametrize("k", range(7))
def test_compositions(k):
    comps = list(compositions(k))
    assert len(comps) == (2 ** (k - 1) if k else 1)
    assert all(sum(c) == k and min(c, default=1) >= 1 for c in comps)
    assert len(set(comps)) == len(comps)
    assert all(max(c, default=0) <= 2 for c in compositions(k, 2))
