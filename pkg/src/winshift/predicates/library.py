"""Named predicates for branching trees in the factor language of ``T``.

``factorEq(k,n,m)`` says the length-``k`` factors at ``n`` and ``m`` agree,
``isRS(k,n)`` that the length-``k`` factor at ``n`` is right special.  The
tree predicates come in two forms:

* ``extRS1`` .. ``extRS4`` are the doubling definitions, where ``extRS_d``
  carries ``2^(d-1)`` position variables;
* ``rsTree_d(i1,..,id,n)`` is the staged form used for computations: the
  factor at ``n`` is a root-to-leaf word of a tree branching in two at depths
  ``i1 < .. < id``.  It keeps a single position variable per level.

Both satisfy: the projection onto ``i1..id`` accepts exactly the tuples for
which some tree with those branchings lives in the factor language, i.e. the
supports of the binary members of the winning shift.
"""

from __future__ import annotations

import itertools
import string

from ..errors import DimensionExceeded, FormulaError
from ..words import AutomaticWord
from .compiler import Context, PredicateAutomaton
from .formula import parse_formula

BASE_DEFINITIONS = """
def factorEq "Ai (0 <= i & i < k) => T[n+i] = T[m+i]":
def isRS "Em1,m2 $factorEq(k,n,m1) & $factorEq(k,n,m2) & T[m1+k] != T[m2+k]":
def extRS1 "En $isRS(i,n)":
def extRS2 "i < j & Em1,m2 $isRS(j,m1) & $isRS(j,m2) & $factorEq(i,m1,m2) & $factorEq(i,n,m1) & T[m1+i] != T[m2+i]":
def extRS3 "i < j & $extRS2(j,k,n1) & $extRS2(j,k,n2) & $factorEq(i,n1,n2) & T[n1+i] != T[n2+i]":
def extRS4 "i < j & $extRS3(j,k,l,n1,n2) & $extRS3(j,k,l,n3,n4) & $factorEq(i,n1,n2) & $factorEq(i,n2,n3) & $factorEq(i,n3,n4) & T[n1+i] = T[n2+i] & T[n2+i] != T[n3+i] & T[n3+i] = T[n4+i]":
"""

# free variables of the literal definitions, alphabetical
LITERAL_VARS = {
    1: ("i",),
    2: ("i", "j", "n"),
    3: ("i", "j", "k", "n1", "n2"),
    4: ("i", "j", "k", "l", "n1", "n2", "n3", "n4"),
}
LITERAL_POSITIONS = {1: ("i",), 2: ("i", "j"), 3: ("i", "j", "k"), 4: ("i", "j", "k", "l")}


def positions(d: int) -> tuple:
    return tuple(f"i{r}" for r in range(1, d + 1))


def staged_definition(d: int) -> str:
    if d < 1:
        raise ValueError("tree depth must be positive")
    if d == 1:
        return "def rsTree1(i1,n) := $isRS(i1,n);"
    ps = positions(d)
    inner = ",".join(ps[1:])
    return (
        f"def rsTree{d}({','.join(ps)},n) := i1 < i2 & Ep $rsTree{d - 1}({inner},n) & "
        f"$rsTree{d - 1}({inner},p) & $factorEq(i1,n,p) & T[n+i1] != T[p+i1];"
    )


def standard_context(word: AutomaticWord, cap: int | None = None) -> Context:
    ctx = Context(word) if cap is None else Context(word, cap=cap)
    ctx.load(BASE_DEFINITIONS)
    return ctx


def _ensure_staged(ctx: Context, d: int) -> None:
    for r in range(1, d + 1):
        if f"rsTree{r}" not in ctx.defs:
            ctx.load(staged_definition(r))


def factor_eq(ctx: Context) -> PredicateAutomaton:
    """Tracks ``(k, n, m)``."""
    return ctx.predicate("factorEq").reorder(("k", "n", "m"))


def is_rs(ctx: Context) -> PredicateAutomaton:
    """Tracks ``(k, n)``."""
    return ctx.predicate("isRS")


def ext_rs(ctx: Context, d: int, literal: bool = False) -> PredicateAutomaton:
    """The depth-``d`` tree predicate with its position variables first."""
    if literal:
        if d not in LITERAL_VARS:
            raise FormulaError(f"literal extRS{d} is only defined for d = 1..4")
        return ctx.predicate(f"extRS{d}").reorder(LITERAL_VARS[d])
    _ensure_staged(ctx, d)
    return ctx.predicate(f"rsTree{d}")


def rs_closure(ctx: Context, d: int, literal: bool = False) -> PredicateAutomaton:
    """Branching depths ``(i1, .., id)`` (0-based) of trees in the language."""
    if literal:
        if d not in LITERAL_VARS:
            raise FormulaError(f"literal extRS{d} is only defined for d = 1..4")
        fv = LITERAL_VARS[d]
        ps = LITERAL_POSITIONS[d]
        rest = [v for v in fv if v not in ps]
        text = f"$extRS{d}({','.join(fv)})"
        if rest:
            text = f"E{','.join(rest)} {text}"
        return ctx.compile(parse_formula(text), ps)
    _ensure_staged(ctx, d)
    ps = positions(d)
    return ctx.compile(parse_formula(f"En $rsTree{d}({','.join(ps)},n)"), ps)


def coding_dimension(word: AutomaticWord, dmax: int = 6, ctx: Context | None = None) -> int:
    """Least ``d`` such that no tree branches ``d + 1`` times.

    Raises :class:`DimensionExceeded` if trees with ``dmax + 1`` branchings
    exist; its ``witness`` holds such branching depths.
    """
    if dmax < 1:
        raise ValueError("dmax must be at least 1")
    ctx = ctx or standard_context(word)
    witness = None
    for d in range(1, dmax + 2):
        closure = rs_closure(ctx, d)
        if closure.is_empty():
            return d - 1
        witness = closure.shortest_tuple()
    raise DimensionExceeded(f"coding dimension of {word.name} is >= {dmax + 1}", witness)


def abc_names(arity: int) -> tuple:
    if not 1 <= arity <= 26:
        raise ValueError("arity must be between 1 and 26")
    return tuple(string.ascii_lowercase[:arity])


def winning_shift_formula(arity: int) -> str:
    """Formula text over ``abc_names(arity)`` for the right-aligned encoding.

    A tuple lists the 1-based positions of the ones, with unused leading
    entries set to 0.
    """
    names = abc_names(arity)
    disjuncts = []
    for m in range(arity + 1):
        zeros, ones = names[: arity - m], names[arity - m :]
        atoms = [f"{v} = 0" for v in zeros] + [f"{v} > 0" for v in ones]
        atoms += [f"{u} < {v}" for u, v in zip(ones, ones[1:])]
        if m:
            args = ",".join(f"{v}-1" for v in ones)
            atoms.append(f"En $rsTree{m}({args},n)")
        disjuncts.append("(" + " & ".join(atoms) + ")")
    return " | ".join(disjuncts)


def winning_shift_automaton(word: AutomaticWord, arity: int, ctx: Context | None = None) -> PredicateAutomaton:
    """Binary members of the winning shift with at most ``arity`` ones.

    Raises :class:`DimensionExceeded` when some member has more ones than
    ``arity`` allows, since the encoding would then be incomplete.
    """
    ctx = ctx or standard_context(word)
    _ensure_staged(ctx, arity + 1)
    over = rs_closure(ctx, arity + 1)
    if not over.is_empty():
        w = over.shortest_tuple()
        raise DimensionExceeded(
            f"{word.name} has winning sequences with {arity + 1} ones, e.g. ones at {tuple(p + 1 for p in w)}",
            tuple(p + 1 for p in w),
        )
    return ctx.compile(parse_formula(winning_shift_formula(arity)), abc_names(arity))


def psi_formula(depth: int = 3) -> str:
    """Branchings at ``depth`` positions with ``2^depth`` explicit leaves.

    For depth 3 the positions are ``a < b < c`` and the leaf ``n_def``
    carries letter ``d`` at ``a``, ``e`` at ``b`` and ``f`` at ``c``.  Before
    the first position all leaves agree, and between consecutive positions
    leaves agree when they share the letters chosen so far.
    """
    names = abc_names(depth)
    leaves = ["".join(bits) for bits in itertools.product("01", repeat=depth)]
    atoms = [f"{u} < {v}" for u, v in zip(names, names[1:])]
    for leaf in leaves:
        atoms += [f"T[n{leaf}+{x}] = @{bit}" for x, bit in zip(names, leaf)]
    for r in range(depth):
        guard = f"i < {names[0]}" if r == 0 else f"({names[r - 1]} < i & i < {names[r]})"
        pairs = [(leaf[:r] + "0" * (depth - r), leaf) for leaf in leaves if leaf[r:] != "0" * (depth - r)]
        atoms.append(f"(Ai {guard} => " + " & ".join(f"T[n{x}+i] = T[n{y}+i]" for x, y in pairs) + ")")
    return "E" + ",".join(f"n{leaf}" for leaf in leaves) + " " + " & ".join(atoms)


def psi_automaton(ctx: Context, depth: int = 3) -> PredicateAutomaton:
    return ctx.compile(parse_formula(psi_formula(depth)), abc_names(depth))
