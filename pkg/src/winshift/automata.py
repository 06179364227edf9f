"""Finite automata over single- and multi-track alphabets.

A multi-track word is a sequence of columns; column ``t`` of a ``d``-track word
holds one letter per track.  Tracks that represent numbers are written most
significant digit first, and shorter components are filled on the left with a
pad letter (``#`` by default), so a canonical padded word never starts with a
column made only of pads.

Transition tables are dense ``numpy`` arrays indexed by ``(state, symbol)``
where ``symbol`` is the mixed-radix code of a column (track 0 most
significant).  All automata are immutable after construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import AlphabetError, ResourceError

PAD = "#"

DEFAULT_STATE_CAP = 2_000_000


@dataclass(frozen=True)
class TrackAlphabet:
    """``tracks`` components, each drawn from ``symbols`` plus an optional pad."""

    tracks: int
    symbols: tuple
    pad: object = PAD

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if self.tracks < 0:
            raise AlphabetError("track count must be nonnegative")
        if len(set(self.symbols)) != len(self.symbols) or not self.symbols:
            raise AlphabetError(f"bad symbol list {self.symbols!r}")
        if self.pad is not None and self.pad in self.symbols:
            raise AlphabetError(f"pad {self.pad!r} collides with a track symbol")

    @cached_property
    def letters(self) -> tuple:
        return self.symbols + ((self.pad,) if self.pad is not None else ())

    @property
    def width(self) -> int:
        return len(self.letters)

    @property
    def size(self) -> int:
        return self.width**self.tracks

    @cached_property
    def _letter_index(self) -> dict:
        return {c: i for i, c in enumerate(self.letters)}

    @cached_property
    def digits(self) -> np.ndarray:
        """``(size, tracks)`` table of per-track letter indices for each symbol."""
        if self.tracks == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grid = np.indices((self.width,) * self.tracks).reshape(self.tracks, -1).T
        return np.ascontiguousarray(grid, dtype=np.int64)

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.width ** np.arange(self.tracks - 1, -1, -1, dtype=np.int64)

    def with_tracks(self, tracks: int) -> "TrackAlphabet":
        return TrackAlphabet(tracks, self.symbols, self.pad)

    def encode(self, column) -> int:
        """Symbol code of a column; a bare letter is accepted for one track."""
        if self.tracks == 1 and not isinstance(column, tuple):
            column = (column,)
        column = tuple(column)
        if len(column) != self.tracks:
            raise AlphabetError(f"column {column!r} does not have {self.tracks} tracks")
        code = 0
        for c in column:
            try:
                code = code * self.width + self._letter_index[c]
            except (KeyError, TypeError):
                raise AlphabetError(f"letter {c!r} not in alphabet {self.letters!r}") from None
        return code

    def decode(self, code: int):
        row = self.digits[code]
        column = tuple(self.letters[i] for i in row)
        return column[0] if self.tracks == 1 else column

    def encode_word(self, word: Iterable) -> list[int]:
        return [self.encode(c) for c in word]

    def code_of_indices(self, idx: np.ndarray) -> np.ndarray:
        """Vectorised inverse of :attr:`digits` (last axis holds tracks)."""
        return (np.asarray(idx, dtype=np.int64) * self._weights).sum(axis=-1)

    @property
    def pad_index(self):
        return None if self.pad is None else len(self.symbols)


def _as_table(delta, size: int) -> np.ndarray:
    table = np.array(delta, dtype=np.int64)
    if table.ndim != 2 or table.shape[1] != size:
        raise AlphabetError(f"transition table must have shape (states, {size})")
    return table


class Dfa:
    """Deterministic automaton with a total transition table."""

    __slots__ = ("alphabet", "delta", "initial", "accepting")

    def __init__(self, alphabet: TrackAlphabet, delta, initial: int, accepting):
        table = _as_table(delta, alphabet.size)
        n = table.shape[0]
        if n == 0:
            raise ValueError("an automaton needs at least one state")
        if table.min() < 0 or table.max() >= n:
            raise ValueError("transition table is not total")
        acc = np.zeros(n, dtype=bool)
        accepting = np.asarray(accepting)
        if accepting.dtype == bool and accepting.shape == (n,):
            acc[:] = accepting
        else:
            acc[np.asarray(list(accepting), dtype=np.int64)] = True
        table.setflags(write=False)
        acc.setflags(write=False)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "delta", table)
        object.__setattr__(self, "initial", int(initial))
        object.__setattr__(self, "accepting", acc)
        if not 0 <= self.initial < n:
            raise ValueError("initial state out of range")

    def __setattr__(self, name, value):
        raise AttributeError("Dfa is immutable")

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    def run(self, word: Iterable, state: int | None = None) -> int:
        q = self.initial if state is None else state
        for code in self.alphabet.encode_word(word):
            q = int(self.delta[q, code])
        return q

    def accepts(self, word: Iterable) -> bool:
        return bool(self.accepting[self.run(word)])

    def __eq__(self, other):
        """Structural equality (same numbering, same tables)."""
        if not isinstance(other, Dfa):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.initial == other.initial
            and np.array_equal(self.delta, other.delta)
            and np.array_equal(self.accepting, other.accepting)
        )

    def __hash__(self):
        return hash((self.alphabet, self.initial, self.delta.tobytes(), self.accepting.tobytes()))

    def __repr__(self):
        return f"Dfa(states={self.n_states}, tracks={self.alphabet.tracks}, accepting={int(self.accepting.sum())})"

    @classmethod
    def from_function(cls, alphabet: TrackAlphabet, n_states: int, step, initial: int, accepting) -> "Dfa":
        """Build from ``step(state, column) -> state``."""
        columns = [alphabet.decode(s) for s in range(alphabet.size)]
        delta = [[step(q, col) for col in columns] for q in range(n_states)]
        return cls(alphabet, delta, initial, accepting)

    @classmethod
    def universal(cls, alphabet: TrackAlphabet) -> "Dfa":
        return cls(alphabet, np.zeros((1, alphabet.size), dtype=np.int64), 0, [0])

    @classmethod
    def empty(cls, alphabet: TrackAlphabet) -> "Dfa":
        return cls(alphabet, np.zeros((1, alphabet.size), dtype=np.int64), 0, [])


class OutputAutomaton:
    """DFA skeleton with an output letter attached to every state (a DFAO)."""

    __slots__ = ("skeleton", "outputs")

    def __init__(self, skeleton: Dfa, outputs: Sequence):
        if len(outputs) != skeleton.n_states:
            raise ValueError("output map must cover every state")
        object.__setattr__(self, "skeleton", skeleton)
        object.__setattr__(self, "outputs", tuple(outputs))

    def __setattr__(self, name, value):
        raise AttributeError("OutputAutomaton is immutable")

    @property
    def alphabet(self) -> TrackAlphabet:
        return self.skeleton.alphabet

    def __call__(self, word: Iterable):
        return self.outputs[self.skeleton.run(word)]

    def __eq__(self, other):
        if not isinstance(other, OutputAutomaton):
            return NotImplemented
        return self.skeleton == other.skeleton and self.outputs == other.outputs

    def __hash__(self):
        return hash((self.skeleton, self.outputs))

    def letter_dfa(self, letter) -> Dfa:
        """Acceptor for the inputs whose output is ``letter``."""
        sk = self.skeleton
        return Dfa(sk.alphabet, sk.delta, sk.initial, np.array([o == letter for o in self.outputs]))


def run_output(a: OutputAutomaton, word: Iterable):
    return a(word)


class Nfa:
    """Nondeterministic automaton.

    ``delta[q, s]`` is a row of successor states padded with ``-1``.
    """

    __slots__ = ("alphabet", "delta", "initial", "accepting")

    def __init__(self, alphabet: TrackAlphabet, delta: np.ndarray, initial, accepting):
        delta = np.asarray(delta, dtype=np.int64)
        if delta.ndim != 3 or delta.shape[1] != alphabet.size:
            raise AlphabetError(f"NFA table must have shape (states, {alphabet.size}, fanout)")
        n = delta.shape[0]
        acc = np.zeros(n, dtype=bool)
        accepting = np.asarray(accepting)
        if accepting.dtype == bool and accepting.shape == (n,):
            acc[:] = accepting
        else:
            acc[np.asarray(list(accepting), dtype=np.int64)] = True
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "initial", tuple(sorted(set(int(q) for q in initial))))
        object.__setattr__(self, "accepting", acc)

    def __setattr__(self, name, value):
        raise AttributeError("Nfa is immutable")

    @property
    def n_states(self) -> int:
        return self.delta.shape[0]

    @classmethod
    def from_transitions(cls, alphabet: TrackAlphabet, n_states: int, transitions: dict, initial, accepting) -> "Nfa":
        """``transitions`` maps ``(state, column)`` to an iterable of states."""
        fan = max([len(set(v)) for v in transitions.values()] + [1])
        delta = np.full((n_states, alphabet.size, fan), -1, dtype=np.int64)
        for (q, column), targets in transitions.items():
            targets = sorted(set(targets))
            delta[q, alphabet.encode(column), : len(targets)] = targets
        return cls(alphabet, delta, initial, accepting)

    @classmethod
    def from_dfa(cls, d: Dfa) -> "Nfa":
        return cls(d.alphabet, d.delta[:, :, None], [d.initial], d.accepting)

    def accepts(self, word: Iterable) -> bool:
        current = set(self.initial)
        for code in self.alphabet.encode_word(word):
            nxt = set()
            for q in current:
                nxt.update(int(t) for t in self.delta[q, code] if t >= 0)
            current = nxt
        return any(self.accepting[q] for q in current)


# ---------------------------------------------------------------- basic queries


def accepts(d: Dfa, word: Iterable) -> bool:
    return d.accepts(word)


def reachable(d: Dfa) -> np.ndarray:
    seen = np.zeros(d.n_states, dtype=bool)
    seen[d.initial] = True
    frontier = np.array([d.initial])
    while frontier.size:
        nxt = np.unique(d.delta[frontier])
        nxt = nxt[~seen[nxt]]
        seen[nxt] = True
        frontier = nxt
    return seen


def live_states(d: Dfa) -> np.ndarray:
    """States from which some accepting state is reachable."""
    live = d.accepting.copy()
    while True:
        grown = live | live[d.delta].any(axis=1)
        if grown.sum() == live.sum():
            return live
        live = grown


def is_empty(d: Dfa) -> bool:
    return not bool((reachable(d) & d.accepting).any())


def is_universal(d: Dfa) -> bool:
    return bool(d.accepting[reachable(d)].all())


def enumerate_words(d: Dfa, max_len: int) -> list:
    """Accepted words of length at most ``max_len`` in length-lexicographic order."""
    live = live_states(d)
    out = []
    layer = [((), d.initial)] if live[d.initial] else []
    for length in range(max_len + 1):
        out.extend(w for w, q in layer if d.accepting[q])
        if length == max_len:
            break
        nxt = []
        for w, q in layer:
            row = d.delta[q]
            for s in range(d.alphabet.size):
                t = int(row[s])
                if live[t]:
                    nxt.append((w + (d.alphabet.decode(s),), t))
        layer = nxt
    return [_shape_word(d.alphabet, w) for w in out]


def _shape_word(alphabet: TrackAlphabet, word: tuple):
    if alphabet.tracks == 1 and all(isinstance(c, str) and len(c) == 1 for c in alphabet.letters):
        return "".join(word)
    return word


def shortest_accepted(d: Dfa):
    """A shortest accepted word (lexicographically least among those), or None."""
    parent = {d.initial: None}
    frontier = [d.initial]
    while frontier:
        for q in frontier:
            if d.accepting[q]:
                word = []
                while parent[q] is not None:
                    q, s = parent[q]
                    word.append(d.alphabet.decode(s))
                return _shape_word(d.alphabet, tuple(reversed(word)))
        nxt = []
        for q in frontier:
            for s in range(d.alphabet.size):
                t = int(d.delta[q, s])
                if t not in parent:
                    parent[t] = (q, s)
                    nxt.append(t)
        frontier = nxt
    return None


# ------------------------------------------------------------- transformations


def canonical(d: Dfa) -> Dfa:
    """Renumber breadth-first from the initial state, dropping unreachable states."""
    pos = np.full(d.n_states, -1, dtype=np.int64)
    pos[d.initial] = 0
    order = [d.initial]
    i = 0
    while i < len(order):
        row = d.delta[order[i]]
        uniq, first = np.unique(row, return_index=True)
        for s in uniq[np.argsort(first, kind="stable")]:
            if pos[s] < 0:
                pos[s] = len(order)
                order.append(int(s))
        i += 1
    perm = np.array(order, dtype=np.int64)
    return Dfa(d.alphabet, pos[d.delta[perm]], 0, d.accepting[perm])


def minimize(d: Dfa) -> Dfa:
    """Minimal automaton with canonical breadth-first numbering."""
    d = canonical(d)
    _, cls = np.unique(d.accepting, return_inverse=True)
    cls = cls.reshape(-1).astype(np.int64)
    count = int(cls.max()) + 1
    while True:
        sig = np.concatenate([cls[:, None], cls[d.delta]], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.reshape(-1)
        new_count = int(new.max()) + 1
        if new_count == count:
            break
        cls, count = new, new_count
    rep = np.zeros(count, dtype=np.int64)
    rep[cls[::-1]] = np.arange(d.n_states - 1, -1, -1)
    return canonical(Dfa(d.alphabet, cls[d.delta[rep]], int(cls[d.initial]), d.accepting[rep]))


def complement(d: Dfa) -> Dfa:
    return Dfa(d.alphabet, d.delta, d.initial, ~d.accepting)


_MODES = {
    "and": np.logical_and,
    "or": np.logical_or,
    "xor": np.logical_xor,
    "iff": lambda a, b: ~np.logical_xor(a, b),
    "implies": lambda a, b: ~a | b,
    "diff": lambda a, b: a & ~b,
}


def product(a: Dfa, b: Dfa, mode: str = "and", cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Synchronous product; ``mode`` selects how acceptance combines."""
    if a.alphabet != b.alphabet:
        raise AlphabetError(f"alphabet mismatch: {a.alphabet} vs {b.alphabet}")
    try:
        combine = _MODES[mode]
    except KeyError:
        raise ValueError(f"unknown product mode {mode!r}") from None
    nb = b.n_states
    start = a.initial * nb + b.initial
    seen = np.array([start], dtype=np.int64)
    frontier = seen
    while frontier.size:
        pa, pb = np.divmod(frontier, nb)
        nxt = np.unique(a.delta[pa] * nb + b.delta[pb])
        new = np.setdiff1d(nxt, seen, assume_unique=True)
        if new.size:
            seen = np.union1d(seen, new)
            if seen.size > cap:
                raise ResourceError(f"product exceeded {cap} states")
        frontier = new
    pa, pb = np.divmod(seen, nb)
    delta = np.searchsorted(seen, a.delta[pa] * nb + b.delta[pb])
    acc = combine(a.accepting[pa], b.accepting[pb])
    return Dfa(a.alphabet, delta, int(np.searchsorted(seen, start)), acc)


def determinize(n: Nfa, cap: int = DEFAULT_STATE_CAP) -> Dfa:
    """Subset construction; subsets are hash-consed by their packed bitsets."""
    size = n.alphabet.size
    ns = n.n_states
    flat = n.delta.reshape(ns, -1)
    sym_of = np.repeat(np.arange(size), n.delta.shape[2])

    def key_of(mask: np.ndarray) -> bytes:
        return np.packbits(mask).tobytes()

    start = np.zeros(ns, dtype=bool)
    start[list(n.initial)] = True
    ids = {key_of(start): 0}
    subsets = [np.flatnonzero(start)]
    rows = []
    accepting = [bool(n.accepting[start].any())]
    i = 0
    while i < len(subsets):
        members = subsets[i]
        mask = np.zeros((size, ns + 1), dtype=bool)
        if members.size:
            succ = flat[members]
            mask[np.broadcast_to(sym_of, succ.shape), succ] = True
        mask = mask[:, :ns]
        packed = np.packbits(mask, axis=1)
        uniq, inverse = np.unique(packed, axis=0, return_inverse=True)
        targets = np.empty(len(uniq), dtype=np.int64)
        first_row = np.zeros(len(uniq), dtype=np.int64)
        first_row[inverse.reshape(-1)[::-1]] = np.arange(size - 1, -1, -1)
        for u in range(len(uniq)):
            key = uniq[u].tobytes()
            t = ids.get(key)
            if t is None:
                t = len(subsets)
                ids[key] = t
                row_mask = mask[first_row[u]]
                subsets.append(np.flatnonzero(row_mask))
                accepting.append(bool(n.accepting[row_mask].any()))
                if len(subsets) > cap:
                    raise ResourceError(f"determinization exceeded {cap} states")
            targets[u] = t
        rows.append(targets[inverse.reshape(-1)])
        i += 1
    return Dfa(n.alphabet, np.array(rows, dtype=np.int64), 0, np.array(accepting))


def reindex_tracks(d: Dfa, sources: Sequence, tracks: int | None = None) -> Dfa:
    """Re-lay the tracks of ``d``.

    New track ``t`` reads old track ``sources[t]``; ``None`` marks a new track
    the automaton ignores.  Every old track must appear exactly once.
    """
    alph = d.alphabet
    tracks = len(sources) if tracks is None else tracks
    used = [s for s in sources if s is not None]
    if sorted(used) != list(range(alph.tracks)):
        raise ValueError(f"sources {sources!r} must name each of {alph.tracks} tracks once")
    new_alph = alph.with_tracks(tracks)
    old_idx = np.zeros((new_alph.size, alph.tracks), dtype=np.int64)
    for t, s in enumerate(sources):
        if s is not None:
            old_idx[:, s] = new_alph.digits[:, t]
    col_map = alph.code_of_indices(old_idx) if alph.tracks else np.zeros(new_alph.size, dtype=np.int64)
    return Dfa(new_alph, d.delta[:, col_map], d.initial, d.accepting)


def well_formed(alphabet: TrackAlphabet) -> Dfa:
    """Padded words: pads form a prefix on every track, no all-pad column."""
    if alphabet.pad is None:
        return Dfa.universal(alphabet)
    d = alphabet.tracks
    pad = alphabet.pad_index
    digits = alphabet.digits
    # state = bitmask of tracks that have started (seen a non-pad letter); 2**d is dead
    dead = 2**d
    delta = np.full((dead + 1, alphabet.size), dead, dtype=np.int64)
    is_pad = digits == pad
    all_pad = is_pad.all(axis=1)
    bits = (~is_pad) * (1 << np.arange(d))
    started_by = bits.sum(axis=1)
    for mask in range(dead):
        started = np.array([(mask >> t) & 1 for t in range(d)], dtype=bool)
        ok = ~(is_pad & started).any(axis=1) & ~all_pad
        delta[mask] = np.where(ok, mask | started_by, dead)
    return Dfa(alphabet, delta, 0, np.arange(dead + 1) < dead)


def project(d: Dfa, keep: Sequence[int], saturate=None) -> Nfa:
    """Existentially quantify the tracks not in ``keep``.

    With a padded alphabet the result reads canonical words over the kept
    tracks; dropped tracks may be longer than every kept one, which is the
    leading run of columns whose kept part is all pad.  For an unpadded
    alphabet, ``saturate`` names a letter that plays the role of padding
    (the digit 0 for leading-zero encodings): a kept word is accepted when
    some number of leading all-``saturate`` columns makes it acceptable.
    """
    alph = d.alphabet
    keep = list(keep)
    if not keep:
        raise ValueError("projection must keep at least one track")
    if len(set(keep)) != len(keep) or any(not 0 <= t < alph.tracks for t in keep):
        raise ValueError(f"invalid track list {keep!r}")
    if alph.pad is not None:
        d = product(d, well_formed(alph))
    dropped = [t for t in range(alph.tracks) if t not in keep]
    new_alph = alph.with_tracks(len(keep))
    fan = alph.width ** len(dropped)
    old_idx = np.zeros((new_alph.size, fan, alph.tracks), dtype=np.int64)
    drop_alph = alph.with_tracks(len(dropped))
    for j, t in enumerate(keep):
        old_idx[:, :, t] = new_alph.digits[:, j][:, None]
    for j, t in enumerate(dropped):
        old_idx[:, :, t] = drop_alph.digits[:, j][None, :]
    col_map = alph.code_of_indices(old_idx)
    delta = d.delta[:, col_map]

    if alph.pad is not None:
        filler = alph.pad_index
    elif saturate is not None:
        filler = alph.letters.index(saturate)
    else:
        filler = None
    initial = {d.initial}
    if filler is not None:
        fill_code = new_alph.code_of_indices(np.full(len(keep), filler))
        frontier = [d.initial]
        while frontier:
            nxt = set(int(t) for t in delta[frontier, fill_code].reshape(-1)) - initial
            initial |= nxt
            frontier = list(nxt)
        if alph.pad is not None:
            delta = delta.copy()
            delta[:, fill_code, :] = -1
    return Nfa(new_alph, delta, initial, d.accepting)


def language_equal(a: Dfa, b: Dfa) -> bool:
    return minimize(a) == minimize(b)


def words_up_to(alphabet: TrackAlphabet, max_len: int):
    """Every word over the full column alphabet, length-lex order."""
    letters = [alphabet.decode(s) for s in range(alphabet.size)]
    for n in range(max_len + 1):
        for w in itertools.product(letters, repeat=n):
            yield w
