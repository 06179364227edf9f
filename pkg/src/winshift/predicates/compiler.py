"""Compile first-order formulas over a base-k automatic word into automata.

Internally every automaton reads base-``k`` digits, most significant first,
one track per variable, with shorter values padded by leading zeros; all of
them are closed under prepending all-zero columns.  Tracks are kept in
alphabetical order of the variable names.  :meth:`PredicateAutomaton.to_padded`
converts to the canonical ``#``-padded form used elsewhere in the package.

Existential quantifiers over conjunctions are eliminated one variable at a
time, picking the variable whose conjuncts span the fewest tracks.  Every
intermediate result is minimized.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ..ans import NumerationSystem, zero_to_padded
from ..automata import (
    DEFAULT_STATE_CAP,
    Dfa,
    TrackAlphabet,
    complement,
    determinize,
    is_empty,
    live_states,
    minimize,
    product,
    project,
)
from ..errors import FormulaError, ResourceError, UnsupportedFeature
from ..words import AutomaticWord
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
    free_vars,
    parse_program,
)


@dataclass(frozen=True, eq=False)
class PredicateAutomaton:
    """An automaton for a predicate, one track per variable in ``vars``."""

    dfa: Dfa
    vars: tuple
    base: int

    @property
    def arity(self) -> int:
        return len(self.vars)

    @property
    def n_states(self) -> int:
        return self.dfa.n_states

    def _columns(self, values: np.ndarray, length: int) -> np.ndarray:
        # (N, d) values -> (N, length) column codes
        k = self.base
        powers = k ** np.arange(length - 1, -1, -1, dtype=np.int64)
        digits = (values[:, :, None] // powers[None, None, :]) % k
        weights = k ** np.arange(self.arity - 1, -1, -1, dtype=np.int64)
        return (digits * weights[None, :, None]).sum(axis=1)

    def accepts_many(self, values) -> np.ndarray:
        values = np.asarray(values, dtype=np.int64).reshape(-1, self.arity)
        if (values < 0).any():
            raise ValueError("values must be natural numbers")
        top = int(values.max()) if values.size else 0
        length = 1
        while self.base**length <= top:
            length += 1
        cols = self._columns(values, length)
        state = np.full(len(values), self.dfa.initial, dtype=np.int64)
        for pos in range(length):
            state = self.dfa.delta[state, cols[:, pos]]
        return self.dfa.accepting[state]

    def accepts(self, *values) -> bool:
        if len(values) == 1 and isinstance(values[0], (tuple, list)):
            values = tuple(values[0])
        if len(values) != self.arity:
            raise ValueError(f"expected {self.arity} values for {self.vars}")
        return bool(self.accepts_many([values])[0]) if self.arity else bool(self.dfa.accepting[self.dfa.initial])

    def tuples_upto(self, bound: int) -> set:
        """All accepted tuples with every entry at most ``bound``."""
        if self.arity == 0:
            return {()} if self.accepts() else set()
        out = set()
        grid = np.arange(bound + 1, dtype=np.int64)
        # chunk over the first coordinate to bound memory
        rest = list(itertools.product(range(bound + 1), repeat=self.arity - 1))
        rest = np.array(rest, dtype=np.int64).reshape(len(rest), self.arity - 1)
        for a in grid:
            vals = np.concatenate([np.full((len(rest), 1), a), rest], axis=1)
            for row in vals[self.accepts_many(vals)]:
                out.add(tuple(int(v) for v in row))
        return out

    def shortest_tuple(self):
        """An accepted tuple of minimal representation length, or ``None``."""
        d = self.dfa
        live = live_states(d)
        if not live[d.initial]:
            return None
        alph = d.alphabet
        prev = {d.initial: None}
        frontier = [d.initial]
        while frontier:
            nxt = []
            for q in frontier:
                if d.accepting[q]:
                    word = []
                    while prev[q] is not None:
                        q, s = prev[q]
                        word.append(s)
                    cols = [alph.digits[s] for s in reversed(word)]
                    vals = [0] * self.arity
                    for col in cols:
                        vals = [v * self.base + int(alph.letters[c]) for v, c in zip(vals, col)]
                    return tuple(vals)
                for s in range(alph.size):
                    t = int(d.delta[q, s])
                    if live[t] and t not in prev:
                        prev[t] = (q, s)
                        nxt.append(t)
            frontier = nxt
        return None

    def is_empty(self) -> bool:
        return is_empty(self.dfa)

    def to_padded(self) -> Dfa:
        """Canonical ``#``-padded automaton over the same tracks."""
        if self.arity == 0:
            return self.dfa
        return zero_to_padded(self.dfa)

    def reorder(self, names: Sequence[str]) -> "PredicateAutomaton":
        names = tuple(names)
        if sorted(names) != sorted(self.vars) or len(set(names)) != len(names):
            raise FormulaError(f"cannot reorder {self.vars} as {names}")
        return PredicateAutomaton(lift(self.dfa, self.vars, names, self.base), names, self.base)


# ----------------------------------------------------------- track plumbing


def digit_alphabet(base: int, tracks: int) -> TrackAlphabet:
    return TrackAlphabet(tracks, tuple(range(base)), None)


def lift(d: Dfa, names: Sequence[str], target: Sequence[str], base: int) -> Dfa:
    """Re-read ``d`` (track ``t`` is variable ``names[t]``) over ``target`` tracks.

    Repeated names identify tracks; target variables not in ``names`` are
    unconstrained.
    """
    names, target = list(names), list(target)
    if names == target:
        return d
    new = digit_alphabet(base, len(target))
    if not names:
        cmap = np.zeros(new.size, dtype=np.int64)
    else:
        where = [target.index(v) for v in names]
        old_idx = new.digits[:, where]
        cmap = d.alphabet.code_of_indices(old_idx)
    return Dfa(new, d.delta[:, cmap], d.initial, d.accepting)


@dataclass(frozen=True)
class _C:
    """Intermediate result: ``dfa`` over the sorted variable tuple ``vars``."""

    dfa: Dfa
    vars: tuple


# ----------------------------------------------------------------- atoms


def _eq_dfa(base: int) -> Dfa:
    alph = digit_alphabet(base, 2)
    ok = alph.digits[:, 0] == alph.digits[:, 1]
    delta = np.where(ok, 0, 1)[None, :].repeat(2, axis=0)
    delta[1] = 1
    return Dfa(alph, delta, 0, [0])


def _cmp_dfa(base: int, strict: bool) -> Dfa:
    alph = digit_alphabet(base, 2)
    a, b = alph.digits[:, 0], alph.digits[:, 1]
    delta = np.zeros((3, alph.size), dtype=np.int64)
    delta[0] = np.where(a == b, 0, np.where(a < b, 1, 2))
    delta[1] = 1
    delta[2] = 2
    return Dfa(alph, delta, 0, [1] if strict else [0, 1])


def _add_dfa(base: int) -> Dfa:
    # state c: carry the unread low-order digits must produce; 2 is dead
    alph = digit_alphabet(base, 3)
    delta = np.full((3, alph.size), 2, dtype=np.int64)
    x, y, z = alph.digits.T
    for c in (0, 1):
        need = z + base * c - x - y
        delta[c] = np.where((need == 0) | (need == 1), need, 2)
    return Dfa(alph, delta, 0, [0])


def _const_dfa(base: int, value: int) -> Dfa:
    # state i: read the first i digits of rep(value) after any leading zeros
    digits = []
    while value:
        digits.append(value % base)
        value //= base
    digits.reverse()
    n = len(digits)
    dead = n + 1
    delta = np.full((n + 2, base), dead, dtype=np.int64)
    delta[0, 0] = 0
    for i, dgt in enumerate(digits):
        delta[i, dgt] = i + 1
    return Dfa(digit_alphabet(base, 1), delta, 0, [n])


class Context:
    """Compilation context: the word ``T``, named definitions and caches."""

    def __init__(self, word: AutomaticWord, cap: int = DEFAULT_STATE_CAP, definitions: Iterable[Definition] = ()):
        system: NumerationSystem = word.system
        if system.kind != "base":
            raise UnsupportedFeature(f"the predicate engine needs a base-k word, {word.name} uses {system.name}")
        self.word = word
        self.base = system.base
        self.cap = cap
        self.defs: dict = {}
        self._compiled_defs: dict = {}
        self._cache: dict = {}
        self._fresh = itertools.count()
        skel = word.dfao.skeleton
        if skel.alphabet != digit_alphabet(self.base, 1):
            raise UnsupportedFeature("the word automaton must read plain base-k digits")
        if int(skel.delta[skel.initial, 0]) != skel.initial:
            raise UnsupportedFeature("the word automaton must ignore leading zeros")
        self.stats = {"max_states": 0, "max_tracks": 0}
        for d in definitions:
            self.define(d)

    # definitions

    def define(self, d: Definition) -> None:
        self.defs[d.name] = d
        self._compiled_defs.pop(d.name, None)

    def load(self, text: str) -> list:
        """Add every definition of a program; returns the bare formulas in it."""
        rest = []
        for item in parse_program(text):
            if isinstance(item, Definition):
                self.define(item)
            else:
                rest.append(item)
        return rest

    def predicate(self, name: str) -> PredicateAutomaton:
        if name not in self.defs:
            raise FormulaError(f"unknown predicate ${name}")
        if name not in self._compiled_defs:
            d = self.defs[name]
            c = self._guard(d.body, lambda: self._compile(d.body))
            pa = PredicateAutomaton(lift(c.dfa, c.vars, d.params, self.base), d.params, self.base)
            self._compiled_defs[name] = pa
        return self._compiled_defs[name]

    def compile(self, f, order: Sequence[str] | None = None) -> PredicateAutomaton:
        fv = sorted(free_vars(f))
        order = tuple(fv if order is None else order)
        if sorted(order) != fv:
            raise FormulaError(f"free variables {fv} do not match declared order {list(order)}")
        c = self._guard(f, lambda: self._compile(f))
        return PredicateAutomaton(lift(c.dfa, c.vars, order, self.base), order, self.base)

    # core

    def _guard(self, f, thunk):
        try:
            return thunk()
        except ResourceError as exc:
            if exc.subformula is None:
                raise ResourceError(str(exc), str(f)) from exc
            raise

    def _fresh_var(self) -> str:
        return f"_t{next(self._fresh)}"

    def _note(self, d: Dfa) -> Dfa:
        self.stats["max_states"] = max(self.stats["max_states"], d.n_states)
        self.stats["max_tracks"] = max(self.stats["max_tracks"], d.alphabet.tracks)
        if d.n_states > self.cap:
            raise ResourceError(f"automaton with {d.n_states} states exceeds cap {self.cap}")
        return d

    def _atom(self, d: Dfa, names: Sequence[str]) -> _C:
        target = tuple(sorted(set(names)))
        return _C(self._note(minimize(lift(d, names, target, self.base))), target)

    def _const(self, value: bool) -> _C:
        alph = digit_alphabet(self.base, 0)
        return _C(Dfa.universal(alph) if value else Dfa.empty(alph), ())

    def _and(self, a: _C, b: _C) -> _C:
        target = tuple(sorted(set(a.vars) | set(b.vars)))
        da = lift(a.dfa, a.vars, target, self.base)
        db = lift(b.dfa, b.vars, target, self.base)
        return _C(self._note(minimize(product(da, db, "and", self.cap))), target)

    def _or(self, a: _C, b: _C) -> _C:
        target = tuple(sorted(set(a.vars) | set(b.vars)))
        da = lift(a.dfa, a.vars, target, self.base)
        db = lift(b.dfa, b.vars, target, self.base)
        return _C(self._note(minimize(product(da, db, "or", self.cap))), target)

    def _not(self, a: _C) -> _C:
        return _C(complement(a.dfa), a.vars)

    def _exists1(self, a: _C, v: str) -> _C:
        if v not in a.vars:
            return a
        keep = [i for i, name in enumerate(a.vars) if name != v]
        if not keep:
            return self._const(not is_empty(a.dfa))
        nfa = project(a.dfa, keep, saturate=0)
        d = self._note(minimize(determinize(nfa, self.cap)))
        return _C(d, tuple(name for name in a.vars if name != v))

    def _exists(self, parts: list, qvars: Iterable[str]) -> _C:
        """``E qvars: AND parts`` by greedy variable elimination."""
        parts = list(parts)
        pending = [v for v in dict.fromkeys(qvars)]
        while True:
            pending = [v for v in pending if any(v in p.vars for p in parts)]
            if not pending:
                break

            def cost(v):
                group = [p for p in parts if v in p.vars]
                span = set().union(*(p.vars for p in group))
                return (len(span), sum(p.dfa.n_states for p in group), v)

            v = min(pending, key=cost)
            group = sorted((p for p in parts if v in p.vars), key=lambda p: (len(p.vars), p.dfa.n_states))
            parts = [p for p in parts if v not in p.vars]
            acc = group[0]
            for p in group[1:]:
                acc = self._and(acc, p)
            # drop every pending variable local to this group at once
            local = [u for u in pending if u in acc.vars and not any(u in p.vars for p in parts)]
            for u in sorted(local, key=lambda u: u != v):
                acc = self._exists1(acc, u)
            parts.append(acc)
        if not parts:
            return self._const(True)
        parts.sort(key=lambda p: (len(p.vars), p.dfa.n_states))
        acc = parts[0]
        for p in parts[1:]:
            acc = self._and(acc, p)
        return acc

    def _compile(self, f) -> _C:
        if f in self._cache:
            return self._cache[f]
        out = self._guard(f, lambda: self._compile_node(f))
        self._cache[f] = out
        return out

    def _compile_node(self, f) -> _C:
        if isinstance(f, Const):
            return self._const(f.value)
        if isinstance(f, Cmp):
            return self._cmp(f)
        if isinstance(f, Not):
            inner = f.body
            if isinstance(inner, Not):
                return self._compile(inner.body)
            return self._not(self._compile(inner))
        if isinstance(f, And):
            return self._exists([self._compile(p) for p in conjuncts(f)], ())
        if isinstance(f, Or):
            acc = self._compile(f.parts[0])
            for p in f.parts[1:]:
                acc = self._or(acc, self._compile(p))
            return acc
        if isinstance(f, Implies):
            return self._or(self._not(self._compile(f.left)), self._compile(f.right))
        if isinstance(f, Iff):
            a, b = self._compile(f.left), self._compile(f.right)
            target = tuple(sorted(set(a.vars) | set(b.vars)))
            da = lift(a.dfa, a.vars, target, self.base)
            db = lift(b.dfa, b.vars, target, self.base)
            return _C(self._note(minimize(product(da, db, "iff", self.cap))), target)
        if isinstance(f, Exists):
            body = f.body
            if isinstance(body, Or):
                return self._compile(Or(tuple(Exists(f.vars, p) for p in body.parts)))
            return self._exists([self._compile(p) for p in conjuncts(body)], f.vars)
        if isinstance(f, Forall):
            split = miniscope_forall(f)
            if split is not None:
                return self._compile(split)
            return self._not(self._compile(Exists(f.vars, negate(f.body))))
        if isinstance(f, Call):
            return self._call(f)
        raise FormulaError(f"cannot compile {f!r}")

    # terms and atoms

    def _term(self, t, parts: list, fresh: list) -> str:
        """Variable holding the value of ``t``; constraints go to ``parts``."""
        if isinstance(t, Var):
            return t.name
        if isinstance(t, Num):
            v = self._fresh_var()
            fresh.append(v)
            parts.append(self._atom(_const_dfa(self.base, t.value), [v]))
            return v
        if isinstance(t, (Add, Sub)):
            a = self._term(t.left, parts, fresh)
            b = self._term(t.right, parts, fresh)
            v = self._fresh_var()
            fresh.append(v)
            names = [a, b, v] if isinstance(t, Add) else [v, b, a]
            parts.append(self._atom(_add_dfa(self.base), names))
            return v
        raise FormulaError(f"{t} is not a numeric term")

    def _cmp(self, f: Cmp) -> _C:
        parts: list = []
        fresh: list = []
        left, right = f.left, f.right
        if isinstance(left, (Letter, Num)) and isinstance(right, At):
            left, right = right, left
        if isinstance(left, At) or isinstance(right, At):
            if f.op not in ("=", "!="):
                raise FormulaError(f"letters can only be compared with = or !=: {f}")
            if not isinstance(left, At):
                raise FormulaError(f"unsupported letter comparison {f}")
            self._check_word(left.word)
            p = self._term(left.index, parts, fresh)
            if isinstance(right, At):
                self._check_word(right.word)
                q = self._term(right.index, parts, fresh)
                core = self._atom(self._same_letter_dfa(), [p, q])
            else:
                letter = right.value
                core = self._atom(self._letter_dfa(letter), [p])
            if f.op == "!=":
                core = self._not(core)
        else:
            if isinstance(left, Letter) or isinstance(right, Letter):
                raise FormulaError(f"letter constant outside a letter comparison: {f}")
            a = self._term(left, parts, fresh)
            b = self._term(right, parts, fresh)
            op = f.op
            if op in (">", ">="):
                a, b, op = b, a, {">": "<", ">=": "<="}[op]
            if op in ("=", "!="):
                core = self._atom(_eq_dfa(self.base), [a, b])
                if op == "!=":
                    core = self._not(core)
            else:
                core = self._atom(_cmp_dfa(self.base, op == "<"), [a, b])
        if not fresh:
            return core
        return self._exists(parts + [core], fresh)

    def _check_word(self, name: str) -> None:
        if name != "T":
            raise FormulaError(f"unknown word {name!r}; formulas refer to the context word as T")

    def _letter_dfa(self, letter) -> Dfa:
        outputs = self.word.dfao.outputs
        if letter not in outputs:
            # a letter that never occurs: the atom is false everywhere
            return Dfa.empty(digit_alphabet(self.base, 1))
        return self.word.dfao.letter_dfa(letter)

    def _same_letter_dfa(self) -> Dfa:
        skel = self.word.dfao.skeleton
        out = self.word.dfao.outputs
        n = skel.n_states
        alph = digit_alphabet(self.base, 2)
        d1, d2 = alph.digits.T
        q1, q2 = np.divmod(np.arange(n * n), n)
        delta = skel.delta[q1][:, d1] * n + skel.delta[q2][:, d2]
        acc = np.array([out[a] == out[b] for a, b in zip(q1, q2)])
        return Dfa(alph, delta, skel.initial * n + skel.initial, acc)

    def _call(self, f: Call) -> _C:
        pa = self.predicate(f.name)
        if len(f.args) != len(pa.vars):
            raise FormulaError(f"${f.name} takes {len(pa.vars)} arguments, got {len(f.args)}")
        parts: list = []
        fresh: list = []
        names = [self._term(t, parts, fresh) for t in f.args]
        core = self._atom(pa.dfa, names)
        if not fresh:
            return core
        return self._exists(parts + [core], fresh)


def miniscope_forall(f: Forall):
    """``A x (P => A1 & A2)`` as ``(A x P => A1) & (A x P => A2)``, else ``None``."""
    body = f.body
    if isinstance(body, And):
        return And(tuple(Forall(f.vars, p) for p in body.parts))
    if isinstance(body, Implies) and isinstance(body.right, And):
        return And(tuple(Forall(f.vars, Implies(body.left, p)) for p in body.right.parts))
    return None


def conjuncts(f) -> list:
    """Flatten nested conjunctions, splitting universal ones on the way."""
    if isinstance(f, Forall):
        split = miniscope_forall(f)
        if split is not None:
            f = split
    if isinstance(f, And):
        return [q for p in f.parts for q in conjuncts(p)]
    return [f]


def negate(f):
    """Push a negation one level in where that keeps conjunctions visible."""
    if isinstance(f, Not):
        return f.body
    if isinstance(f, Implies):
        return And((f.left, negate(f.right)))
    if isinstance(f, Or):
        return And(tuple(negate(p) for p in f.parts))
    if isinstance(f, Forall):
        return Exists(f.vars, negate(f.body))
    if isinstance(f, Const):
        return Const(not f.value)
    return Not(f)
