"""Winning sets of regular languages through boolean automata.

From a DFA ``(Q, Sigma, delta, q0, F)`` for ``X`` the boolean automaton has
the same states and, on choice ``a``, the positive formula

    tau(q, a) = OR over (a+1)-subsets C of Sigma of AND_{c in C} delta(q, c)

which accepts exactly ``W(X)``.  Positive formulas are stored in
disjunctive normal form as antichains of state sets, which is a canonical
form for monotone boolean functions, and the DFA is obtained by a subset
construction over antichains.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .automata import Dfa, TrackAlphabet, minimize
from .errors import ResourceError

DEFAULT_ANTICHAIN_CAP = 1_000_000

Antichain = frozenset  # of frozensets of states


def minimal_sets(sets: Iterable[frozenset]) -> Antichain:
    """Drop every set that strictly contains another."""
    ordered = sorted(set(sets), key=len)
    kept: list = []
    for s in ordered:
        if not any(k <= s for k in kept):
            kept.append(s)
    return frozenset(kept)


def conjoin(a: Antichain, b: Antichain) -> Antichain:
    return minimal_sets(x | y for x in a for y in b)


TRUE: Antichain = frozenset([frozenset()])
FALSE: Antichain = frozenset()


@dataclass(frozen=True)
class BooleanAutomaton:
    n_states: int
    n_choices: int
    tau: tuple  # tau[q][a] is an Antichain
    initial: int
    accepting: frozenset

    def formula(self, q: int, a: int) -> str:
        clauses = sorted(sorted(c) for c in self.tau[q][a])
        if not clauses:
            return "false"
        return " | ".join("&".join(f"q{s}" for s in c) or "true" for c in clauses)

    def step(self, f: Antichain, a: int) -> Antichain:
        """Substitute ``tau(., a)`` for every state of ``f``."""
        out: set = set()
        for clause in f:
            acc = TRUE
            for s in sorted(clause):
                acc = conjoin(acc, self.tau[s][a])
                if not acc:
                    break
            out.update(acc)
        return minimal_sets(out)

    def holds(self, f: Antichain) -> bool:
        """Value of ``f`` when exactly the accepting states are true."""
        return any(c <= self.accepting for c in f)

    def accepts(self, choices: Iterable[int]) -> bool:
        f: Antichain = frozenset([frozenset([self.initial])])
        for a in choices:
            if not 0 <= a < self.n_choices:
                return False
            f = self.step(f, a)
        return self.holds(f)


def build_boolean(d: Dfa) -> BooleanAutomaton:
    if d.alphabet.tracks != 1:
        raise ValueError("boolean construction needs a single-track automaton")
    size = d.alphabet.size
    tau = []
    for q in range(d.n_states):
        row = []
        for a in range(size):
            row.append(minimal_sets(frozenset(int(d.delta[q, c]) for c in sub) for sub in combinations(range(size), a + 1)))
        tau.append(tuple(row))
    accepting = frozenset(int(q) for q in range(d.n_states) if d.accepting[q])
    return BooleanAutomaton(d.n_states, size, tuple(tau), d.initial, accepting)


def boolean_to_dfa(b: BooleanAutomaton, cap: int = DEFAULT_ANTICHAIN_CAP) -> Dfa:
    """Subset construction whose states are the reachable antichains."""
    start: Antichain = frozenset([frozenset([b.initial])])
    index = {start: 0}
    queue = [start]
    delta: list = []
    while len(delta) < len(queue):
        f = queue[len(delta)]
        row = []
        for a in range(b.n_choices):
            g = b.step(f, a)
            if g not in index:
                if len(index) >= cap:
                    raise ResourceError(f"more than {cap} antichain states", "boolean_to_dfa")
                index[g] = len(queue)
                queue.append(g)
            row.append(index[g])
        delta.append(row)
    accepting = [i for i, f in enumerate(queue) if b.holds(f)]
    return Dfa(choice_alphabet(b.n_choices), delta, 0, accepting)


def choice_alphabet(n_choices: int) -> TrackAlphabet:
    return TrackAlphabet(1, tuple(range(n_choices)), None)


def winning_language_automaton(d: Dfa, cap: int = DEFAULT_ANTICHAIN_CAP) -> Dfa:
    return minimize(boolean_to_dfa(build_boolean(d), cap))


def finite_language_dfa(words: Iterable, symbols: Iterable) -> Dfa:
    """Trie automaton accepting exactly ``words``, plus a sink."""
    alph = TrackAlphabet(1, tuple(symbols), None)
    nodes = {(): 0}
    edges: dict = {}
    final = set()
    for w in words:
        w = tuple(w)
        for i in range(len(w)):
            u = w[: i + 1]
            if u not in nodes:
                nodes[u] = len(nodes)
            edges[(nodes[w[:i]], alph.encode(w[i]))] = nodes[u]
        final.add(nodes[w])
    sink = len(nodes)
    delta = [[edges.get((q, s), sink) for s in range(alph.size)] for q in range(sink + 1)]
    return Dfa(alph, delta, 0, sorted(final))
