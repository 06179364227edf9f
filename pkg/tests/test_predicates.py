import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from winshift.ans import BASE2, rep_tuple
from winshift.coding import abc_encode, pv_extract
from winshift.errors import DimensionExceeded, FormulaError, ResourceError, UnsupportedFeature
from winshift.game import winning_slice_bounded
from winshift.predicates import (
    Context,
    coding_dimension,
    ext_rs,
    factor_eq,
    is_rs,
    parse_formula,
    parse_program,
    psi_automaton,
    rs_closure,
    standard_context,
    winning_shift_automaton,
)
from winshift.predicates.formula import And, Call, Exists, Forall, Implies, free_vars
from winshift.predicates.oracle import evaluate, factor_eq_direct, is_rs_direct, psi_direct
from winshift.words import get_word, right_special

TM = get_word("tm")
PD = get_word("pd")
CTX = standard_context(TM)


@pytest.fixture(scope="module")
def tm_ctx():
    return CTX


@pytest.fixture(scope="module")
def pd_ctx():
    return standard_context(PD)


def game_positions(word, n, v):
    """0-based supports of winning slice members spelling ``v``."""
    return pv_extract(winning_slice_bounded(word, n, len(v)), v)


# parsing


def test_parse_quantifiers_and_precedence():
    f = parse_formula("Ai (0 <= i & i < k) => T[n+i] = T[m+i]")
    assert isinstance(f, Forall) and f.vars == ("i",)
    assert isinstance(f.body, Implies)
    assert free_vars(f) == {"k", "n", "m"}
    g = parse_formula("Em1,m2 $factorEq(k,n,m1) & T[m1+k] != T[m2+k]")
    assert isinstance(g, Exists) and g.vars == ("m1", "m2") and isinstance(g.body, And)
    assert isinstance(g.body.parts[0], Call)


def test_parse_program_forms():
    items = parse_program('def p "x < y": def q(a,b) := $p(b,a); x = 1')
    assert [getattr(i, "name", None) for i in items[:2]] == ["p", "q"]
    assert items[1].params == ("a", "b")
    assert len(items) == 3


@pytest.mark.parametrize("text", ["x <", "Ex", "T[x = 1", "x + = y", "(x = y", "x ? y"])
def test_malformed(text):
    with pytest.raises(FormulaError):
        parse_formula(text)


def test_compile_errors(tm_ctx):
    with pytest.raises(FormulaError):
        tm_ctx.compile(parse_formula("x < y"), ("x",))
    with pytest.raises(FormulaError):
        tm_ctx.compile(parse_formula("$nothing(x)"))
    with pytest.raises(UnsupportedFeature):
        Context(get_word("z"))


def test_state_cap_names_subformula():
    ctx = standard_context(TM, cap=3)
    with pytest.raises(ResourceError) as exc:
        ctx.predicate("isRS")
    assert exc.value.subformula is not None


# compiled examples


def test_addition(tm_ctx):
    add = tm_ctx.compile(parse_formula("x + y = z"), ("x", "y", "z"))
    xs, ys, zs = np.meshgrid(np.arange(65), np.arange(65), np.arange(129), indexing="ij")
    vals = np.stack([xs.ravel(), ys.ravel(), zs.ravel()], axis=1)
    assert (add.accepts_many(vals) == (vals[:, 0] + vals[:, 1] == vals[:, 2])).all()
    assert add.accepts(200, 312, 512) and not add.accepts(200, 312, 511)


def test_exists_gives_all_naturals(tm_ctx):
    p = tm_ctx.compile(parse_formula("Ex x = y"), ("y",))
    assert p.tuples_upto(100) == {(v,) for v in range(101)}


def test_letters(tm_ctx):
    p = tm_ctx.compile(parse_formula("T[x] = @0"))
    got = p.accepts_many(np.arange(1025)[:, None])
    assert list(got) == [TM.letter(n) == 0 for n in range(1025)]


def test_natural_subtraction(tm_ctx):
    p = tm_ctx.compile(parse_formula("x - y = z"), ("x", "y", "z"))
    assert p.accepts(7, 3, 4) and not p.accepts(3, 7, 0)


def test_factor_eq_exhaustive(tm_ctx):
    fe = factor_eq(tm_ctx)
    assert fe.vars == ("k", "n", "m")
    text = TM.prefix(200)
    grid = np.array(list(itertools.product(range(65), repeat=3)))
    got = fe.accepts_many(grid)
    want = [factor_eq_direct(text, k, n, m) for k, n, m in grid]
    assert list(got) == want
    assert fe.accepts(2, 0, 3)


@pytest.mark.parametrize("name", ["tm", "pd", "pf", "rs"])
def test_is_rs(name):
    word = get_word(name)
    p = is_rs(standard_context(word))
    grid = np.array(list(itertools.product(range(33), range(65))))
    got = p.accepts_many(grid)
    assert list(got) == [is_rs_direct(word, k, n) for k, n in grid]
    assert p.accepts(0, 5)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_literal_and_staged_trees_agree(tm_ctx, d):
    assert rs_closure(tm_ctx, d).dfa == rs_closure(tm_ctx, d, literal=True).dfa


def test_literal_depth_four_closure_is_empty(tm_ctx):
    assert rs_closure(tm_ctx, 4, literal=True).is_empty()
    assert not rs_closure(tm_ctx, 3, literal=True).is_empty()
    with pytest.raises(FormulaError):
        ext_rs(tm_ctx, 5, literal=True)


@pytest.mark.parametrize("word,v", [(TM, "1"), (TM, "11"), (TM, "111"), (PD, "11")])
def test_closures_match_game(word, v):
    got = rs_closure(standard_context(word), len(v)).tuples_upto(64)
    assert got == game_positions(word, 65, v)


def test_tree_predicate_positions(tm_ctx):
    tree = ext_rs(tm_ctx, 2)
    assert tree.vars == ("i1", "i2", "n")
    # the factor at n must itself be a leaf of a tree branching at i1 < i2
    for i1, i2 in rs_closure(tm_ctx, 2).tuples_upto(10):
        assert any(tree.accepts(i1, i2, n) for n in range(64))


@pytest.mark.parametrize("name,dim", [("tm", 3), ("pd", 2), ("pf", 3), ("rs", 4)])
def test_coding_dimensions(name, dim):
    assert coding_dimension(get_word(name)) == dim


def test_dimension_exceeded():
    with pytest.raises(DimensionExceeded) as exc:
        coding_dimension(get_word("rs"), dmax=2)
    assert len(exc.value.witness) == 3
    with pytest.raises(DimensionExceeded) as exc:
        winning_shift_automaton(TM, 2)
    assert exc.value.witness == (1, 2, 4)


def test_winning_shift(tm_ctx):
    w = winning_shift_automaton(TM, 3, tm_ctx)
    assert w.vars == ("a", "b", "c")
    assert w.accepts(1, 5, 13) and w.accepts(0, 3, 11) and w.accepts(0, 0, 0)
    assert not w.accepts(3, 0, 11) and not w.accepts(2, 2, 5)
    want = {abc_encode(y, 3) for y in winning_slice_bounded(TM, 64, 3)}
    assert w.tuples_upto(64) == want


def test_winning_shift_pd(pd_ctx):
    w = winning_shift_automaton(PD, 2, pd_ctx)
    assert w.tuples_upto(64) == {abc_encode(y, 2) for y in winning_slice_bounded(PD, 64, 2)}


# the naive tree formula


@pytest.mark.parametrize("word", [TM, PD], ids=["tm", "pd"])
@pytest.mark.parametrize("depth", [1, 2])
def test_naive_formula_equals_staged(word, depth):
    ctx = standard_context(word)
    assert psi_automaton(ctx, depth).dfa == rs_closure(ctx, depth).dfa


def test_naive_formula_meaning_depth_three(tm_ctx):
    # the depth-3 formula itself is too large to compile; its meaning is
    # checked by direct factor search against the staged closure and the game
    pairs = [c for c in itertools.combinations(range(65), 2) if psi_direct(TM, c)]
    direct = {(a, b, c) for a, b in pairs for c in range(b + 1, 65) if psi_direct(TM, (a, b, c))}
    assert direct == rs_closure(tm_ctx, 3).tuples_upto(64)
    assert direct == game_positions(TM, 65, "111")
    assert (0, 1, 3) in direct


# encodings


def test_padded_form(tm_ctx):
    fe = factor_eq(tm_ctx)
    padded = fe.to_padded()
    for t in [(2, 0, 3), (3, 0, 3), (0, 9, 1), (5, 17, 40)]:
        assert padded.accepts(rep_tuple(BASE2, t)) == fe.accepts(*t)


@given(st.tuples(st.integers(0, 300), st.integers(0, 300)), st.integers(1, 4))
def test_leading_zero_columns(t, extra):
    p = is_rs(CTX)
    digits = [format(v, "b") for v in t]
    width = max(len(s) for s in digits) + extra
    cols = list(zip(*(s.zfill(width) for s in digits)))
    state = p.dfa.initial
    for col in cols:
        state = p.dfa.delta[state, p.dfa.alphabet.encode(tuple(int(c) for c in col))]
    assert bool(p.dfa.accepting[state]) == p.accepts(*t)


# soundness against direct evaluation

VARS = ("x", "y")
BOUND = 12


@st.composite
def terms(draw, names):
    v = draw(st.sampled_from(names))
    kind = draw(st.sampled_from(["var", "num", "add", "sub"]))
    if kind == "var":
        return v
    if kind == "num":
        return str(draw(st.integers(0, 5)))
    w = draw(st.sampled_from(names))
    return f"{v}{'+' if kind == 'add' else '-'}{w}"


@st.composite
def atoms(draw, names):
    a, b = draw(terms(names)), draw(terms(names))
    kind = draw(st.sampled_from(["cmp", "letter", "same"]))
    if kind == "cmp":
        return f"{a} {draw(st.sampled_from(['=', '!=', '<', '<=']))} {b}"
    if kind == "letter":
        return f"T[{a}] = @{draw(st.integers(0, 1))}"
    return f"T[{a}] {draw(st.sampled_from(['=', '!=']))} T[{b}]"


@st.composite
def formulas(draw, names=VARS, depth=2):
    if depth == 0 or draw(st.booleans()):
        return draw(atoms(names))
    kind = draw(st.sampled_from(["and", "or", "not", "imp", "ex", "all"]))
    if kind in ("and", "or", "imp"):
        op = {"and": "&", "or": "|", "imp": "=>"}[kind]
        return f"({draw(formulas(names, depth - 1))}) {op} ({draw(formulas(names, depth - 1))})"
    if kind == "not":
        return f"~({draw(formulas(names, depth - 1))})"
    guard = draw(st.sampled_from(names))
    body = draw(formulas(names + ("z",), depth - 1))
    if kind == "ex":
        return f"Ez z < {guard} & ({body})"
    return f"Az z < {guard} => ({body})"


@settings(max_examples=40)
@given(formulas())
def test_compiler_matches_evaluator(text):
    # the trivial atoms keep both variables free
    f = parse_formula(f"({text}) & x = x & y <= y")
    p = CTX.compile(f, VARS)
    grid = list(itertools.product(range(BOUND + 1), repeat=2))
    got = p.accepts_many(grid)
    want = [evaluate(f, TM, dict(zip(VARS, g)), BOUND) for g in grid]
    assert list(got) == want, text


def test_library_matches_evaluator(tm_ctx):
    # factorEq and isRS through the evaluator, with defs expanded
    f = parse_formula("$factorEq(k,n,m)")
    p = tm_ctx.compile(f, ("k", "n", "m"))
    for t in itertools.product(range(7), repeat=3):
        assert p.accepts(*t) == evaluate(f, TM, dict(zip("knm", t)), 8, tm_ctx.defs)


@pytest.mark.parametrize("name,arity,bound", [("pf", 3, 48), ("rs", 4, 32)])
def test_winning_shift_other_words(name, arity, bound):
    word = get_word(name)
    w = winning_shift_automaton(word, arity)
    assert w.tuples_upto(bound) == {abc_encode(y, arity) for y in winning_slice_bounded(word, bound, arity)}
