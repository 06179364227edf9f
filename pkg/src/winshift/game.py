"""The finite word game: target sets, strategy trees and winning sets.

Alice and Bob build a word letter by letter.  On round ``j`` Alice offers
``alpha[j] + 1`` distinct letters and Bob picks one; Alice wins when the
finished word lies in the target set ``X``.  ``W(X)`` is the set of choice
sequences for which Alice has a winning strategy.

Two independent routes are implemented.  :func:`is_winning` recurses over the
trie of ``X`` for one fixed choice sequence and returns the strategy tree.
The set-valued searches (:func:`winning_set`, :func:`winning_slice_bounded`,
:func:`max_branchings`, :func:`shortest_sum_witness`) instead walk the
positions of nonzero choices from right to left, carrying the set of trunk
words from which Alice can still finish; pruning an empty set is sound
because ``W(X)`` is hereditary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import AlphabetError
from .words import AutomaticWord, factor_set, factor_texts

ChoiceSequence = tuple


def as_choice(alpha) -> ChoiceSequence:
    if isinstance(alpha, str):
        return tuple(int(c) for c in alpha)
    return tuple(int(a) for a in alpha)


def choice_str(alpha) -> str:
    return "".join(str(a) for a in alpha)


@dataclass(frozen=True)
class TargetSet:
    """A finite set of words of one common length, with its prefix trie."""

    words: frozenset
    length: int
    alphabet: tuple

    @classmethod
    def of(cls, words: Iterable[str], alphabet: Iterable[str] | None = None, length: int | None = None) -> "TargetSet":
        ws = frozenset(words)
        lengths = {len(w) for w in ws}
        if len(lengths) > 1:
            raise ValueError(f"target words have different lengths {sorted(lengths)}")
        n = lengths.pop() if lengths else (length or 0)
        if length is not None and n != length:
            raise ValueError(f"target words have length {n}, expected {length}")
        letters = sorted({c for w in ws for c in w})
        if alphabet is None:
            alph = tuple(letters)
        else:
            alph = tuple(alphabet)
            stray = set(letters) - set(alph)
            if stray:
                raise AlphabetError(f"letters {sorted(stray)} not in alphabet {alph}")
        return cls(ws, n, alph)

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, w) -> bool:
        return w in self.words

    @property
    def children(self) -> dict:
        """Trie as ``prefix -> sorted next letters``."""
        cached = self.__dict__.get("_children")
        if cached is None:
            kids: dict = {}
            for w in self.words:
                for i in range(self.length):
                    kids.setdefault(w[:i], set()).add(w[i])
            cached = {u: tuple(sorted(cs)) for u, cs in kids.items()}
            object.__setattr__(self, "_children", cached)
        return cached


def read_word_list(path: str | Path) -> TargetSet:
    """Target set from a file with one word per line (blank lines skipped)."""
    lines = Path(path).read_text().split()
    return TargetSet.of(lines)


@dataclass
class StrategyTree:
    children: dict = field(default_factory=dict)

    def words(self, prefix: str = "") -> Iterator[str]:
        if not self.children:
            yield prefix
        for c, sub in self.children.items():
            yield from sub.words(prefix + c)

    def branch_pattern(self) -> tuple:
        """Out-degree of the nodes at each depth, read along the first branch."""
        out, node = [], self
        while node.children:
            out.append(len(node.children))
            node = next(iter(node.children.values()))
        return tuple(out)

    def render(self, indent: str = "") -> str:
        lines = []
        for c, sub in self.children.items():
            lines.append(f"{indent}{c}")
            if sub.children:
                lines.append(sub.render(indent + "  "))
        return "\n".join(lines)


def verify_strategy(tree: StrategyTree, x: TargetSet, alpha) -> bool:
    """Replay every Bob response: degrees match ``alpha`` and every leaf word is in ``x``."""
    alpha = as_choice(alpha)
    if len(alpha) != x.length:
        return False

    def walk(node: StrategyTree, depth: int, prefix: str) -> bool:
        if depth == len(alpha):
            return not node.children and prefix in x.words
        if len(node.children) != alpha[depth] + 1:
            return False
        return all(c in x.alphabet and walk(sub, depth + 1, prefix + c) for c, sub in node.children.items())

    return walk(tree, 0, "")


def is_winning(x: TargetSet, alpha) -> StrategyTree | None:
    """Strategy tree for ``alpha`` into ``x``, or ``None`` if Bob wins."""
    alpha = as_choice(alpha)
    if len(alpha) != x.length:
        raise ValueError(f"choice sequence has length {len(alpha)}, target words have length {x.length}")
    if any(a < 0 or a >= max(len(x.alphabet), 1) for a in alpha):
        return None
    kids = x.children
    memo: dict = {}

    def win(prefix: str) -> StrategyTree | None:
        if prefix in memo:
            return memo[prefix]
        depth = len(prefix)
        if depth == x.length:
            result = StrategyTree() if prefix in x.words else None
        else:
            need = alpha[depth] + 1
            subs = {}
            for c in kids.get(prefix, ()):
                t = win(prefix + c)
                if t is not None:
                    subs[c] = t
                    if len(subs) == need:
                        break
            result = StrategyTree(subs) if len(subs) == need else None
        memo[prefix] = result
        return result

    return win("")


# ------------------------------------------------------ trunk-set searches


def _branch(trunks: set, i: int, v: int) -> set:
    """Length-``i`` prefixes offering at least ``v + 1`` letters into ``trunks``."""
    ext: dict = {}
    for w in trunks:
        ext.setdefault(w[:i], set()).add(w[i])
    return {u for u, cs in ext.items() if len(cs) > v}


def _min_leaves(r: int, q: int) -> int:
    """Fewest trunks that can still carry ``r`` more units of choice (``q`` letters)."""
    if r <= 0:
        return 1
    top = q - 1
    return q ** (r // top) * (r % top + 1)


def _search(trunks: set, j: int, used: int, max_sum: int, q: int, choice: dict, visit, exact: bool = False) -> None:
    # exact: only sequences reaching max_sum matter, so prune trunk sets too
    # small to carry the remaining branchings
    visit(choice, used, trunks)
    for i in range(j - 1, -1, -1):
        for v in range(1, min(q - 1, max_sum - used) + 1):
            nxt = _branch(trunks, i, v)
            if not nxt:
                break
            if exact and len(nxt) < _min_leaves(max_sum - used - v, q):
                continue
            choice[i] = v
            _search(nxt, i, used + v, max_sum, q, choice, visit, exact)
            del choice[i]


def _from_choice(choice: dict, n: int) -> ChoiceSequence:
    out = [0] * n
    for i, v in choice.items():
        out[i] = v
    return tuple(out)


def _slice_members(words: set, n: int, q: int, max_sum: int) -> set:
    found: set = set()
    if not words:
        return found
    _search(set(words), n, 0, max_sum, q, {}, lambda ch, s, t: found.add(_from_choice(ch, n)))
    return found


def winning_set(x: TargetSet) -> set:
    q = max(len(x.alphabet), 1)
    return _slice_members(set(x.words), x.length, q, x.length * (q - 1))


def max_branchings(x: TargetSet) -> int:
    """Largest ``sum(alpha)`` over ``alpha`` in ``W(x)``; -1 for an empty set."""
    if not x.words:
        return -1
    q = max(len(x.alphabet), 1)
    best = [0]

    def visit(ch, s, t):
        best[0] = max(best[0], s)

    _search(set(x.words), x.length, 0, x.length * (q - 1), q, {}, visit)
    return best[0]


def _source_words(source, n: int, prefix_len: int | None) -> tuple[set, int]:
    if isinstance(source, TargetSet):
        return set(source.words), max(len(source.alphabet), 1)
    if isinstance(source, AutomaticWord):
        q = len(source.letters)
    else:
        text = source if prefix_len is None else source[:prefix_len]
        q = len(set(text))
    return factor_set(source, n, prefix_len), q


def winning_slice_bounded(source, n: int, max_sum: int, prefix_len: int | None = None) -> set:
    """Members of ``W(L_n)`` with ``sum <= max_sum``, ``L_n`` the length-``n`` factors."""
    if max_sum < 0:
        raise ValueError("max_sum must be non-negative")
    words, q = _source_words(source, n, prefix_len)
    return _slice_members(words, n, q, max_sum)


def slice_target(source, n: int, prefix_len: int | None = None) -> TargetSet:
    words, _ = _source_words(source, n, prefix_len)
    letters = None
    if isinstance(source, AutomaticWord):
        letters = tuple(sorted(str(c) for c in source.letters))
    return TargetSet.of(words, letters, n)


# ------------------------------------------------------ shortest witness


class FactorIndex:
    """Right-special factors of a few texts for all lengths up to ``max_len``.

    The texts are joined with NUL separators and the positions sorted by
    their next ``max_len + 1`` bytes.  For a length ``m`` only positions with
    a real letter at offset ``m`` take part; the longest common prefix of two
    such positions adjacent in that order is a range minimum of the full
    adjacent array.
    """

    def __init__(self, texts, max_len: int):
        if isinstance(texts, str):
            texts = [texts]
        self.texts = list(texts)
        self.max_len = max_len
        width = max_len + 1
        raw = b"\x00".join(t.encode("ascii") for t in self.texts)
        if any("\x00" in t for t in self.texts):
            raise AlphabetError("texts may not contain NUL")
        self.joined = raw.decode("ascii")
        buf = raw + b"\x00" * width
        self.size = len(raw)
        arr = np.frombuffer(buf, dtype=np.uint8)
        # room[p]: letters available from p before the next separator
        seps = np.flatnonzero(arr == 0)
        nxt = seps[np.searchsorted(seps, np.arange(self.size))]
        self.room = nxt - np.arange(self.size)
        order = sorted(range(self.size), key=lambda p: buf[p : p + width])
        self.order = np.asarray(order, dtype=np.int64)
        win = np.lib.stride_tricks.sliding_window_view(arr, width)
        lcp = np.empty(max(self.size - 1, 0), dtype=np.int64)
        step = 1 << 15
        for lo in range(0, self.size - 1, step):
            hi = min(lo + step, self.size - 1)
            eq = win[self.order[lo:hi]] == win[self.order[lo + 1 : hi + 1]]
            first = np.argmin(eq, axis=1)
            first[eq.all(axis=1)] = width
            lcp[lo:hi] = first
        self.lcp = lcp
        self._cache: dict = {}

    def right_special(self, m: int, extensions: int = 2) -> set:
        """Length-``m`` factors followed by at least ``extensions`` distinct letters."""
        key = (m, extensions)
        if key in self._cache:
            return self._cache[key]
        if m > self.max_len:
            raise ValueError(f"index built for lengths up to {self.max_len}")
        ranks = np.flatnonzero(self.room[self.order] > m)
        result: set = set()
        if len(ranks) >= 2:
            pair = np.minimum.reduceat(self.lcp, ranks[:-1])
            group = np.concatenate([[0], np.cumsum(pair < m)])
            counts: dict = {}
            for t in np.flatnonzero(pair == m):
                g = int(group[t])
                counts[g] = counts.get(g, 0) + 1
                if counts[g] == extensions - 1:
                    p = int(self.order[ranks[t]])
                    result.add(self.joined[p : p + m])
        self._cache[key] = result
        return result


def shortest_sum_witness(
    source, k: int, budget: int, prefix_len: int | None = None, index: FactorIndex | None = None
) -> ChoiceSequence | None:
    """Length-lex least member of ``W`` with ``sum >= k`` and length at most ``budget``.

    Factors come from the first ``prefix_len`` letters of ``source``, or
    from its exact cover when ``prefix_len`` is omitted.  The least sequence
    at the shortest length ends in a nonzero choice and has sum exactly
    ``k`` (lower its last nonzero entry otherwise), so each length ``L``
    seeds the search with the right-special factors of length ``L - 1``.
    """
    if k <= 0:
        return ()
    if index is None:
        index = FactorIndex(factor_texts(source, budget + 1, prefix_len), budget)
    q = len(set(index.joined) - {"\x00"})
    if q < 2:
        return None
    for length in range(1, min(budget, index.max_len + 1) + 1):
        best = None
        for v in range(1, min(q - 1, k) + 1):
            seeds = index.right_special(length - 1, v + 1)
            if len(seeds) < _min_leaves(k - v, q):
                continue
            found: list = []

            def visit(ch, s, t):
                if s == k:
                    found.append(_from_choice(ch, length))

            _search(seeds, length - 1, v, k, q, {length - 1: v}, visit, exact=True)
            if found:
                cand = min(found)
                best = cand if best is None else min(best, cand)
        if best is not None:
            return best
    return None


def format_compressed(alpha) -> str:
    """Run-length form such as ``1 0 1 0^4 1 0^197 1``."""
    parts = []
    seq = list(alpha)
    i = 0
    while i < len(seq):
        j = i
        while j < len(seq) and seq[j] == seq[i]:
            j += 1
        parts.append(str(seq[i]) if j - i == 1 else f"{seq[i]}^{j - i}")
        i = j
    return " ".join(parts)
