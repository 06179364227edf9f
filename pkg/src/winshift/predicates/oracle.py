"""Direct evaluation of formulas and library predicates, without automata.

:func:`evaluate` interprets a formula over the naturals with every quantifier
ranging over ``0..bound``.  That is exact whenever the quantified variables
are semantically bounded by ``bound`` (as in guarded ``A i (i < k) => ...``);
for unguarded existentials it under-approximates.  The ``*_direct`` functions
give the intended meaning of the library predicates by plain string
comparison on a long prefix.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Mapping

from ..errors import FormulaError
from ..words import AutomaticWord, factor_set, right_special
from .formula import (
    Add,
    And,
    At,
    Call,
    Cmp,
    Const,
    Definition,
    Exists,
    Forall,
    Iff,
    Implies,
    Letter,
    Not,
    Num,
    Or,
    Sub,
    Var,
)

_OPS = {
    "=": lambda a, b: a == b,
    "!=": lambda a, b: a != b,
    "<": lambda a, b: a < b,
    "<=": lambda a, b: a <= b,
    ">": lambda a, b: a > b,
    ">=": lambda a, b: a >= b,
}


class Evaluator:
    def __init__(self, word: AutomaticWord, bound: int, defs: Mapping[str, Definition] | None = None):
        self.word = word
        self.bound = bound
        self.defs = dict(defs or {})

    def letter(self, n: int):
        return self.word.letter(n)

    def term(self, t, env):
        """Value of ``t``, or ``None`` when a subtraction goes negative."""
        if isinstance(t, Var):
            if t.name not in env:
                raise FormulaError(f"unbound variable {t.name}")
            return env[t.name]
        if isinstance(t, Num):
            return t.value
        if isinstance(t, (Add, Sub)):
            a, b = self.term(t.left, env), self.term(t.right, env)
            if a is None or b is None:
                return None
            v = a + b if isinstance(t, Add) else a - b
            return v if v >= 0 else None
        if isinstance(t, Letter):
            return ("letter", t.value)
        if isinstance(t, At):
            if t.word != "T":
                raise FormulaError(f"unknown word {t.word!r}")
            i = self.term(t.index, env)
            return None if i is None else ("letter", self.letter(i))
        raise FormulaError(f"{t} is not a term")

    def holds(self, f, env) -> bool:
        if isinstance(f, Const):
            return f.value
        if isinstance(f, Cmp):
            a, b = self.term(f.left, env), self.term(f.right, env)
            if a is None or b is None:
                return False
            la, lb = isinstance(a, tuple), isinstance(b, tuple)
            if la or lb:
                # a bare number facing a letter is a letter constant
                a = a if la else ("letter", a)
                b = b if lb else ("letter", b)
            return _OPS[f.op](a, b)
        if isinstance(f, Not):
            return not self.holds(f.body, env)
        if isinstance(f, And):
            return all(self.holds(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(self.holds(p, env) for p in f.parts)
        if isinstance(f, Implies):
            return not self.holds(f.left, env) or self.holds(f.right, env)
        if isinstance(f, Iff):
            return self.holds(f.left, env) == self.holds(f.right, env)
        if isinstance(f, (Exists, Forall)):
            pick = any if isinstance(f, Exists) else all
            rng = range(self.bound + 1)
            return pick(
                self.holds(f.body, {**env, **dict(zip(f.vars, vals))}) for vals in product(rng, repeat=len(f.vars))
            )
        if isinstance(f, Call):
            d = self.defs.get(f.name)
            if d is None:
                raise FormulaError(f"unknown predicate ${f.name}")
            args = [self.term(t, env) for t in f.args]
            if any(a is None for a in args):
                return False
            return self.holds(d.body, dict(zip(d.params, args)))
        raise FormulaError(f"cannot evaluate {f!r}")


def evaluate(f, word: AutomaticWord, env: Mapping[str, int], bound: int, defs=None) -> bool:
    return Evaluator(word, bound, defs).holds(f, dict(env))


def factor_eq_direct(text: str, k: int, n: int, m: int) -> bool:
    if max(n, m) + k > len(text):
        raise ValueError("prefix too short")
    return text[n : n + k] == text[m : m + k]


def is_rs_direct(word: AutomaticWord, k: int, n: int, prefix_len: int | None = None) -> bool:
    text = word.prefix(n + k)
    return text[n : n + k] in _rs(word, k, prefix_len)


@lru_cache(maxsize=None)
def _rs(word: AutomaticWord, k: int, prefix_len) -> frozenset:
    return frozenset(right_special(word, k, prefix_len))


@lru_cache(maxsize=None)
def _ext2_prefixes(word: AutomaticWord, i: int, j: int, prefix_len) -> frozenset:
    rs = _rs(word, j, prefix_len)
    by_prefix: dict = {}
    for v in rs:
        by_prefix.setdefault(v[:i], set()).add(v[i])
    return frozenset(u for u, nxt in by_prefix.items() if len(nxt) > 1)


def ext_rs2_direct(word: AutomaticWord, i: int, j: int, n: int, prefix_len: int | None = None) -> bool:
    """Two right-special length-``j`` factors split at ``i`` after the length-``i`` factor at ``n``."""
    if not i < j:
        return False
    text = word.prefix(n + i)
    return text[n : n + i] in _ext2_prefixes(word, i, j, prefix_len)


def factors_direct(word: AutomaticWord, n: int, prefix_len: int | None = None) -> set:
    return factor_set(word, n, prefix_len)


def tree_direct(factors, positions) -> bool:
    """Some binary tree branching at ``positions`` (0-based, increasing) lies in ``factors``.

    ``factors`` are words of a common length greater than the last position.
    """
    if not positions:
        return bool(factors)
    p, rest = positions[0], positions[1:]
    groups: dict = {}
    for f in factors:
        groups.setdefault(f[:p], {}).setdefault(f[p], set()).add(f[p + 1 :])
    shifted = tuple(q - p - 1 for q in rest)
    for children in groups.values():
        if sum(1 for tails in children.values() if tree_direct(tails, shifted)) >= 2:
            return True
    return False


def psi_direct(word: AutomaticWord, positions, prefix_len: int | None = None) -> bool:
    """Meaning of the naive tree formula at the given branching positions."""
    positions = tuple(positions)
    if any(a >= b for a, b in zip(positions, positions[1:])):
        return False
    length = positions[-1] + 1 if positions else 0
    return tree_direct(_factors(word, length, prefix_len), positions)


@lru_cache(maxsize=None)
def _factors(word: AutomaticWord, n: int, prefix_len) -> frozenset:
    return frozenset(factor_set(word, n, prefix_len))
