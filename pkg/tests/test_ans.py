import pytest
from hypothesis import given
from hypothesis import strategies as st

from winshift.ans import (
    BASE2,
    FIBONACCI,
    Z_SYSTEM,
    NumerationSystem,
    get_system,
    pad_tuple,
    rep_tuple,
    rep_z_recursive,
    unpad,
    z_regex_match,
)
from winshift.automata import PAD
from winshift.claims import Z_TABLE
from winshift.errors import RepresentationError, UnsupportedFeature


def s(w) -> str:
    return "".join(map(str, w))


def test_base2_examples():
    assert s(BASE2.rep(0)) == ""
    assert s(BASE2.rep(6)) == "110"
    assert BASE2.val("1011") == 11
    with pytest.raises(RepresentationError):
        BASE2.val("011")
    with pytest.raises(RepresentationError):
        BASE2.val("2")


def test_fibonacci_examples():
    # Zeckendorf: 1, 2, 3, 5, 8, ...
    assert [s(FIBONACCI.rep(n)) for n in range(1, 9)] == ["1", "10", "100", "101", "1000", "1001", "1010", "10000"]
    with pytest.raises(RepresentationError):
        FIBONACCI.val("110")


def test_z_table():
    assert {n: s(Z_SYSTEM.rep(n)) for n in Z_TABLE} == Z_TABLE
    assert s(Z_SYSTEM.rep(0)) == ""


def test_z_recursive_definition_agrees():
    for n in range(3000):
        assert rep_z_recursive(n) == Z_SYSTEM.rep(n)


def test_z_regex():
    assert z_regex_match("2020") and z_regex_match("2203000") and z_regex_match("3000") and z_regex_match("")
    assert not z_regex_match("11") and not z_regex_match("0") and not z_regex_match("2301") and not z_regex_match("2213")


def test_iter_reps_matches_rep():
    for n, w in zip(range(2000), Z_SYSTEM.iter_reps()):
        assert w == Z_SYSTEM.rep(n)


@pytest.mark.parametrize("system", [BASE2, FIBONACCI, Z_SYSTEM, NumerationSystem("base", 3)])
def test_generic_ranking_agrees(system):
    for n in range(500):
        w = system.rep(n)
        assert system.val(w) == n
        assert system.generic_rep(n) == w
        assert system.generic_val(w) == n


@given(st.integers(0, 10**6))
def test_base2_rep_val(n):
    assert BASE2.val(BASE2.rep(n)) == n
    assert s(BASE2.rep(n)) == (bin(n)[2:] if n else "")


@given(st.integers(0, 10**5))
def test_fibonacci_rep_val(n):
    w = FIBONACCI.rep(n)
    assert FIBONACCI.val(w) == n
    assert "11" not in s(w)


def test_only_base_systems_add():
    assert BASE2.addable and not Z_SYSTEM.addable
    with pytest.raises(UnsupportedFeature):
        Z_SYSTEM.adder_automaton()


def test_padding_roundtrip():
    t = pad_tuple([(1, 0, 1), (1,), ()])
    assert t.rows == ((1, 0, 1), (PAD, PAD, 1), (PAD, PAD, PAD))
    assert unpad(t) == [(1, 0, 1), (1,), ()]
    assert rep_tuple(BASE2, [5, 1]) == [(1, PAD), (0, PAD), (1, 1)]


def test_language_automata():
    for system in (BASE2, FIBONACCI, Z_SYSTEM):
        lang = system.language_automaton(2)
        for x in range(40):
            for y in range(0, 40, 7):
                assert lang.accepts(rep_tuple(system, [x, y]))
        assert not lang.accepts([(0, 1)])


@pytest.mark.parametrize("system", [BASE2, FIBONACCI, Z_SYSTEM])
def test_comparators(system):
    le = system.comparator_automaton()
    lt = system.comparator_automaton(strict=True)
    for x in range(40):
        for y in range(40):
            w = rep_tuple(system, [x, y])
            assert le.accepts(w) == (x <= y)
            assert lt.accepts(w) == (x < y)


def test_adder_small():
    add = BASE2.adder_automaton()
    for x in range(20):
        for y in range(20):
            for z in range(40):
                assert add.accepts(rep_tuple(BASE2, [x, y, z])) == (x + y == z)


def test_get_system():
    assert get_system("z") is Z_SYSTEM
    assert get_system("base-3") == NumerationSystem("base", 3)
    with pytest.raises(ValueError):
        get_system("roman")
