"""Abstract numeration systems and their recognizability automata.

Three systems are built in: base ``k``, Fibonacci (Zeckendorf) and the
Dumont-Thomas system ``Z`` attached to the substitution ``a -> abab, b -> b``.
All three order their languages by radix order (shorter first, then
lexicographic), and ``rep(0)`` is the empty word in each of them.

Words are tuples of digit values.  Padded tuples put ``#`` on the left of the
shorter components.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

import numpy as np

from .automata import PAD, Dfa, TrackAlphabet, minimize, product, well_formed
from .errors import RepresentationError, UnsupportedFeature

Word = tuple

_Z_PATTERN = re.compile(r"(?:2[02]*|2[02]*[13]0*|30*|10*)?")


def as_word(w) -> Word:
    """Accept ``"110"``, ``[1, 1, 0]`` or ``(1, 1, 0)``."""
    if isinstance(w, str):
        return tuple(int(c) for c in w)
    return tuple(int(c) for c in w)


def word_str(w: Sequence) -> str:
    return "".join(str(c) for c in w)


@dataclass(frozen=True)
class NumerationSystem:
    """``kind`` is ``"base"``, ``"fibonacci"`` or ``"z"``; ``base`` only matters for ``"base"``."""

    kind: str
    base: int = 2
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in ("base", "fibonacci", "z"):
            raise ValueError(f"unknown numeration system kind {self.kind!r}")
        if self.kind == "base" and self.base < 2:
            raise ValueError("base must be at least 2")
        if not self.name:
            label = {"base": f"base-{self.base}", "fibonacci": "fibonacci", "z": "z"}[self.kind]
            object.__setattr__(self, "name", label)

    @property
    def digits(self) -> tuple:
        if self.kind == "base":
            return tuple(range(self.base))
        if self.kind == "fibonacci":
            return (0, 1)
        return (0, 1, 2, 3)

    @property
    def radix_order(self) -> bool:
        return True

    @property
    def addable(self) -> bool:
        return self.kind == "base"

    def alphabet(self, tracks: int = 1, padded: bool = True) -> TrackAlphabet:
        return TrackAlphabet(tracks, self.digits, PAD if padded else None)

    @cached_property
    def _language_dfa(self) -> Dfa:
        """Single-track unpadded acceptor of the representation language."""
        alph = self.alphabet(1, padded=False)
        k = len(self.digits)
        if self.kind == "base":
            # 0 start, 1 inside, 2 dead
            delta = [[2] + [1] * (k - 1), [1] * k, [2] * k]
            acc = [0, 1]
        elif self.kind == "fibonacci":
            # 0 start, 1 after 1, 2 after 0, 3 dead
            delta = [[3, 1], [2, 3], [2, 1], [3, 3]]
            acc = [0, 1, 2]
        else:
            # 0 start, 1 in 2(0+2)*, 2 in the 0* tail, 3 dead
            delta = [[3, 2, 1, 2], [1, 2, 1, 2], [2, 3, 3, 3], [3, 3, 3, 3]]
            acc = [0, 1, 2]
        return Dfa(alph, delta, 0, acc)

    def in_language(self, w) -> bool:
        return self._language_dfa.accepts(as_word(w))

    # -------------------------------------------------------------- rep / val

    def rep(self, n: int) -> Word:
        if n < 0:
            raise ValueError("only natural numbers are represented")
        if self.kind == "base":
            out = []
            while n:
                n, d = divmod(n, self.base)
                out.append(d)
            return tuple(reversed(out))
        if self.kind == "fibonacci":
            return _fib_rep(n)
        return self._unrank(n)

    def val(self, w) -> int:
        w = as_word(w)
        self.check(w)
        if self.kind == "base":
            n = 0
            for d in w:
                n = n * self.base + d
            return n
        if self.kind == "fibonacci":
            weights = _fib_weights(len(w))
            return sum(d * u for d, u in zip(reversed(w), weights))
        return self._rank(w)

    def check(self, w: Word) -> None:
        """Raise :class:`RepresentationError` naming why ``w`` is not a representation."""
        bad = [d for d in w if d not in self.digits]
        if bad:
            raise RepresentationError(f"bad digit {bad[0]} for {self.name}")
        if w and w[0] == 0:
            raise RepresentationError(f"leading zero in {word_str(w)!r}")
        if self.kind == "fibonacci" and any(a == b == 1 for a, b in zip(w, w[1:])):
            raise RepresentationError(f"consecutive ones in {word_str(w)!r}")
        if self.kind == "z" and not self.in_language(w):
            raise RepresentationError(f"{word_str(w)!r} violates the pattern of the z system")

    # Radix-order ranking over the language automaton; used for Z and as a
    # cross-check of the closed forms for the other systems.

    def _completions(self, length: int) -> list:
        """``table[r][q]`` = number of accepted words of length ``r`` read from ``q``."""
        return _completion_table(self, length)

    def _count_of_length(self, length: int) -> int:
        return self._completions(length)[length][self._language_dfa.initial]

    def _unrank(self, n: int) -> Word:
        length = 0
        while True:
            c = self._count_of_length(length)
            if n < c:
                break
            n -= c
            length += 1
        table = self._completions(length)
        d = self._language_dfa
        q = d.initial
        out = []
        for r in range(length, 0, -1):
            for digit in self.digits:
                t = int(d.delta[q, digit])
                c = table[r - 1][t]
                if n < c:
                    out.append(digit)
                    q = t
                    break
                n -= c
        return tuple(out)

    def _rank(self, w: Word) -> int:
        n = sum(self._count_of_length(length) for length in range(len(w)))
        table = self._completions(len(w))
        d = self._language_dfa
        q = d.initial
        for i, digit in enumerate(w):
            r = len(w) - i - 1
            for smaller in self.digits:
                if smaller == digit:
                    break
                n += table[r][int(d.delta[q, smaller])]
            q = int(d.delta[q, digit])
        return n

    def generic_rep(self, n: int) -> Word:
        return self._unrank(n)

    def generic_val(self, w) -> int:
        w = as_word(w)
        self.check(w)
        return self._rank(w)

    def iter_reps(self) -> Iterator[Word]:
        """``rep(0), rep(1), ...`` generated in radix order."""
        d = self._language_dfa
        length = 0
        while True:
            table = self._completions(length)
            stack = [((), d.initial)]
            # depth-first in reverse digit order so pops come out lexicographically
            while stack:
                w, q = stack.pop()
                if len(w) == length:
                    if d.accepting[q]:
                        yield w
                    continue
                r = length - len(w) - 1
                for digit in reversed(self.digits):
                    t = int(d.delta[q, digit])
                    if table[r][t]:
                        stack.append((w + (digit,), t))
            length += 1

    # ------------------------------------------------------------ automata

    def language_automaton(self, tracks: int = 1, padded: bool = True) -> Dfa:
        """Acceptor of padded ``tracks``-tuples of representations."""
        base = self._language_dfa
        if not padded:
            if tracks != 1:
                raise UnsupportedFeature("unpadded tuples are only defined through leading zeros")
            return minimize(base)
        alph = self.alphabet(tracks, padded=True)
        n = base.n_states
        pad = alph.pad_index
        digits = alph.digits
        # each track runs its own copy; a pad keeps the copy at the initial state
        state_codes = np.indices((n,) * tracks).reshape(tracks, -1).T
        weights = n ** np.arange(tracks - 1, -1, -1)
        delta = np.zeros((len(state_codes), alph.size), dtype=np.int64)
        for i, qs in enumerate(state_codes):
            nxt = np.where(digits == pad, qs[None, :], base.delta[qs[None, :], np.minimum(digits, pad - 1)])
            delta[i] = (nxt * weights).sum(axis=1)
        acc = base.accepting[state_codes].all(axis=1)
        init = int((np.full(tracks, base.initial) * weights).sum())
        return minimize(product(Dfa(alph, delta, init, acc), well_formed(alph)))

    def comparator_automaton(self, strict: bool = False, padded: bool = True) -> Dfa:
        """Pairs ``(x, y)`` with ``x <= y`` (``x < y`` when ``strict``)."""
        if not padded:
            if self.kind != "base":
                raise UnsupportedFeature("leading-zero comparators are provided for base-k only")
            return _zero_comparator(self.base, strict)
        alph = self.alphabet(2, padded=True)
        pad = alph.pad_index
        # 0 equal so far, 1 x < y, 2 x > y
        delta = np.zeros((3, alph.size), dtype=np.int64)
        for s, (a, b) in enumerate(alph.digits):
            if a == b:
                first = 0
            elif a == pad:
                first = 1
            elif b == pad:
                first = 2
            else:
                first = 1 if a < b else 2
            delta[0, s] = first
            delta[1, s] = 1
            delta[2, s] = 2
        acc = [1] if strict else [0, 1]
        cmp = Dfa(alph, delta, 0, acc)
        return minimize(product(cmp, self.language_automaton(2)))

    def adder_automaton(self, padded: bool = True) -> Dfa:
        """Triples ``(x, y, z)`` with ``x + y = z``."""
        if self.kind != "base":
            raise UnsupportedFeature(f"no adder is provided for the {self.name} system")
        zero = _zero_adder(self.base)
        return zero_to_padded(zero) if padded else zero


@lru_cache(maxsize=None)
def _completion_table_cached(system: NumerationSystem, length: int) -> tuple:
    d = system._language_dfa
    row = d.accepting.astype(object)
    rows = [tuple(int(x) for x in row)]
    for _ in range(length):
        prev = rows[-1]
        rows.append(tuple(sum(prev[int(t)] for t in d.delta[q]) for q in range(d.n_states)))
    return tuple(rows)


def _completion_table(system: NumerationSystem, length: int) -> tuple:
    # round the length up so the cache holds few distinct tables
    return _completion_table_cached(system, max(32, 1 << (length - 1).bit_length()))


@lru_cache(maxsize=None)
def _fib_weights(length: int) -> tuple:
    u = [1, 2]
    while len(u) < length:
        u.append(u[-1] + u[-2])
    return tuple(u[:length])


def _fib_rep(n: int) -> Word:
    if n == 0:
        return ()
    u = [1, 2]
    while u[-1] <= n:
        u.append(u[-1] + u[-2])
    out = []
    for weight in reversed(u[:-1]):
        if weight <= n:
            out.append(1)
            n -= weight
        else:
            out.append(0)
    while out and out[0] == 0:
        out.pop(0)
    return tuple(out)


def _zero_adder(k: int) -> Dfa:
    """Leading-zero adder, most significant digit first.

    State ``c`` is the carry the unread low-order digits must produce; state 2 is dead.
    """
    alph = TrackAlphabet(3, tuple(range(k)), None)
    delta = np.full((3, alph.size), 2, dtype=np.int64)
    for s, (x, y, z) in enumerate(alph.digits):
        for c in (0, 1):
            need = z + k * c - x - y
            if need in (0, 1):
                delta[c, s] = need
    return Dfa(alph, delta, 0, [0])


def _zero_comparator(k: int, strict: bool) -> Dfa:
    alph = TrackAlphabet(2, tuple(range(k)), None)
    delta = np.zeros((3, alph.size), dtype=np.int64)
    for s, (a, b) in enumerate(alph.digits):
        delta[0, s] = 0 if a == b else (1 if a < b else 2)
        delta[1, s] = 1
        delta[2, s] = 2
    return Dfa(alph, delta, 0, [1] if strict else [0, 1])


def zero_to_padded(d: Dfa) -> Dfa:
    """Convert a leading-zero numeric automaton to canonical ``#``-padded form.

    A track reads ``#`` until its first nonzero digit; a leading ``0`` digit
    and an all-pad column are rejected, so each tuple has one encoding.
    """
    src = d.alphabet
    if src.pad is not None:
        raise ValueError("automaton is already padded")
    m = src.tracks
    alph = TrackAlphabet(m, src.symbols, PAD)
    pad = alph.pad_index
    zero = src.symbols.index(0)
    digits = alph.digits
    is_pad = digits == pad
    code = src.code_of_indices(np.where(is_pad, zero, digits))
    starts = (~is_pad) * (1 << np.arange(m))
    start_mask = starts.sum(axis=1)
    lead_zero_tracks = ((digits == zero) * (1 << np.arange(m))).sum(axis=1)
    pad_tracks = (is_pad * (1 << np.arange(m))).sum(axis=1)
    all_pad = is_pad.all(axis=1)
    n_masks = 1 << m
    dead = d.n_states * n_masks
    delta = np.full((dead + 1, alph.size), dead, dtype=np.int64)
    for mask in range(n_masks):
        # a started track may not read a pad; an unstarted one may not read a leading zero
        ok = ((pad_tracks & mask) == 0) & ((lead_zero_tracks & ~mask) == 0) & ~all_pad
        new_mask = mask | start_mask
        for q in range(d.n_states):
            delta[q * n_masks + mask] = np.where(ok, d.delta[q, code] * n_masks + new_mask, dead)
    acc = np.zeros(dead + 1, dtype=bool)
    acc[:dead] = np.repeat(d.accepting, n_masks)
    return minimize(Dfa(alph, delta, d.initial * n_masks, acc))


# ------------------------------------------------------------- padded tuples


@dataclass(frozen=True)
class PaddedTuple:
    rows: tuple

    def columns(self) -> list:
        if not self.rows:
            return []
        return list(zip(*self.rows))

    def __len__(self):
        return len(self.rows[0]) if self.rows else 0


def pad_tuple(ws: Sequence, pad=PAD) -> PaddedTuple:
    ws = [tuple(w) for w in ws]
    width = max((len(w) for w in ws), default=0)
    return PaddedTuple(tuple((pad,) * (width - len(w)) + w for w in ws))


def unpad(t: PaddedTuple, pad=PAD) -> list:
    return [tuple(c for c in row if c != pad) for row in t.rows]


def rep_tuple(system: NumerationSystem, values: Sequence[int]) -> list:
    """Column word of the padded representation of an integer tuple."""
    return pad_tuple([system.rep(v) for v in values]).columns()


def rep_z_recursive(n: int) -> Word:
    """Representation in the z system from the prefix decomposition of the fixed point.

    Lengths of ``sigma^l(a)`` satisfy ``A_{l+1} = 2 A_l + 2`` with ``A_0 = 1``;
    then ``|sigma^l(ab)| = A_l + 1`` and ``|sigma^l(aba)| = 2 A_l + 1``.
    """
    if n == 0:
        return ()
    lengths = [1]
    while lengths[-1] * 2 + 2 <= n:
        lengths.append(lengths[-1] * 2 + 2)
    ell = len(lengths) - 1
    a = lengths[ell]
    if n == a:
        m, delta = a, 1
    elif a + 1 <= n < 2 * a + 1:
        m, delta = a + 1, 2
    else:
        m, delta = 2 * a + 1, 3
    rest = rep_z_recursive(n - m)
    return (delta,) + (0,) * (ell - len(rest)) + rest


def z_regex_match(w) -> bool:
    return _Z_PATTERN.fullmatch(word_str(as_word(w))) is not None


BASE2 = NumerationSystem("base", 2)
FIBONACCI = NumerationSystem("fibonacci")
Z_SYSTEM = NumerationSystem("z")

SYSTEMS = {"base-2": BASE2, "2": BASE2, "fibonacci": FIBONACCI, "fib": FIBONACCI, "z": Z_SYSTEM}


def get_system(name: str) -> NumerationSystem:
    if name in SYSTEMS:
        return SYSTEMS[name]
    m = re.fullmatch(r"(?:base-)?(\d+)", name)
    if m:
        return NumerationSystem("base", int(m.group(1)))
    raise ValueError(f"unknown numeration system {name!r}")
