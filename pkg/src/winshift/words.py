"""Automatic and substitutive words, factor sets and right-special factors."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .ans import BASE2, Z_SYSTEM, NumerationSystem
from .automata import Dfa, OutputAutomaton, TrackAlphabet
from .errors import UnknownWord


@dataclass(frozen=True)
class Substitution:
    images: Mapping

    def __post_init__(self):
        object.__setattr__(self, "images", dict(self.images))

    @property
    def alphabet(self) -> tuple:
        return tuple(self.images)

    def apply(self, word):
        return [c for a in word for c in self.images[a]]

    def is_prolongable(self, seed) -> bool:
        img = self.images.get(seed)
        return img is not None and len(img) >= 2 and img[0] == seed

    def is_uniform(self) -> bool:
        return len({len(v) for v in self.images.values()}) == 1


def fixed_point_prefix(s: Substitution, seed, length: int) -> list:
    """Prefix of the fixed point of ``s`` starting with ``seed``."""
    if not s.is_prolongable(seed):
        raise ValueError(f"substitution is not prolongable on {seed!r}")
    word = [seed]
    while len(word) < length:
        grown = s.apply(word)
        if len(grown) == len(word):
            raise ValueError("fixed point does not grow")
        word = grown
    return word[:length]


def substitution_dfao(s: Substitution, coding: Mapping | None = None) -> OutputAutomaton:
    """DFAO of a ``k``-uniform substitution read most significant digit first.

    States are letters; reading digit ``d`` in state ``a`` moves to the
    ``d``-th letter of the image of ``a``.  The initial state is the first
    letter, so the automaton ignores leading zeros when that letter is
    prolongable.
    """
    if not s.is_uniform():
        raise ValueError("only uniform substitutions have base-k DFAOs")
    letters = s.alphabet
    k = len(s.images[letters[0]])
    index = {a: i for i, a in enumerate(letters)}
    alph = TrackAlphabet(1, tuple(range(k)), None)
    delta = [[index[s.images[a][d]] for d in range(k)] for a in letters]
    coding = coding or {a: a for a in letters}
    return OutputAutomaton(Dfa(alph, delta, 0, []), [coding[a] for a in letters])


@dataclass(eq=False)
class AutomaticWord:
    """An infinite word ``x`` with ``x[n] = dfao(rep(n))``.

    ``substitution``/``coding``/``seed`` optionally give a fast route to long
    prefixes; the DFAO stays the definition.  ``cover(n)``, when present,
    returns finitely many words whose length-``n`` factors are exactly the
    length-``n`` factors of the whole infinite word.
    """

    name: str
    system: NumerationSystem
    dfao: OutputAutomaton
    substitution: Substitution | None = None
    coding: Mapping | None = None
    seed: object = None
    cover: Callable[[int], list] | None = None
    _prefix: str = field(default="", repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def letters(self) -> tuple:
        return tuple(dict.fromkeys(self.dfao.outputs))

    def letter(self, n: int):
        return self.dfao(self.system.rep(n))

    def prefix(self, length: int) -> str:
        """First ``length`` letters as a string (one character per letter)."""
        with self._lock:
            if len(self._prefix) < length:
                self._prefix = self._generate(max(length, 2 * len(self._prefix)))
            return self._prefix[:length]

    def _generate(self, length: int) -> str:
        if self.substitution is not None:
            raw = fixed_point_prefix(self.substitution, self.seed, length)
            coding = self.coding or {}
            return "".join(str(coding.get(a, a)) for a in raw)
        out = []
        for n, r in zip(range(length), self.system.iter_reps()):
            out.append(str(self.dfao(r)))
        return "".join(out)

    def letter_dfa(self, letter) -> Dfa:
        return self.dfao.letter_dfa(letter)


def factor_set(w: AutomaticWord | str, n: int, prefix_len: int | None = None) -> set:
    """Length-``n`` factors occurring in the first ``prefix_len`` letters.

    Without ``prefix_len`` the exact factor set is returned: through the
    word's cover when it has one, else from :func:`safe_prefix_len`.
    """
    return {t[p : p + n] for t in factor_texts(w, n, prefix_len) for p in range(len(t) - n + 1)}


def factor_texts(w: AutomaticWord | str, n: int, prefix_len: int | None = None) -> list:
    """Words whose length-``n`` factors form the factor set used by :func:`factor_set`."""
    if prefix_len is None and isinstance(w, AutomaticWord) and w.cover is not None:
        return w.cover(n)
    return [_text(w, n, prefix_len)]


def right_special(w: AutomaticWord | str, n: int, prefix_len: int | None = None) -> set:
    """Length-``n`` factors with two distinct one-letter extensions in the prefix."""
    ext: dict = {}
    for f in factor_set(w, n + 1, prefix_len):
        ext.setdefault(f[:-1], set()).add(f[-1])
    return {u for u, cs in ext.items() if len(cs) >= 2}


def factor_complexity(w: AutomaticWord | str, n: int, prefix_len: int | None = None) -> int:
    return len(factor_set(w, n, prefix_len))


def safe_prefix_len(w: AutomaticWord, n: int) -> int:
    """Prefix length that contains every factor of length ``n``.

    For the four 2-automatic built-ins every factor of length ``n`` occurs
    in any window of length ``32 * n + 64`` (checked by the test suite at two
    prefix lengths).  No prefix of the z word contains all its factors of
    length ``n > 20`` or so; it uses :func:`z_cover` instead.
    """
    return 32 * n + 64


def _text(w, n, prefix_len):
    if isinstance(w, str):
        return w if prefix_len is None else w[:prefix_len]
    if prefix_len is None:
        prefix_len = safe_prefix_len(w, n + 1)
    return w.prefix(prefix_len)


# --------------------------------------------------------------- built-ins

THUE_MORSE = Substitution({0: (0, 1), 1: (1, 0)})
PERIOD_DOUBLING = Substitution({0: (0, 1), 1: (0, 0)})
# a -> ab, b -> cb, c -> ad, d -> cd with a, b -> 1 and c, d -> 0
PAPERFOLDING = Substitution({"a": "ab", "b": "cb", "c": "ad", "d": "cd"})
PAPERFOLDING_CODING = {"a": 1, "b": 1, "c": 0, "d": 0}
# a -> ab, b -> ac, c -> db, d -> dc with a, b -> 0 and c, d -> 1
RUDIN_SHAPIRO = Substitution({"a": "ab", "b": "ac", "c": "db", "d": "dc"})
RUDIN_SHAPIRO_CODING = {"a": 0, "b": 0, "c": 1, "d": 1}
CASSAIGNE = Substitution({"a": "abab", "b": "b"})


def cassaigne_dfao() -> OutputAutomaton:
    """Z-system DFAO of the fixed point of ``a -> abab, b -> b`` (0-indexed).

    Reading digit ``d`` from letter ``c`` moves to the letter that follows the
    length-``d`` prefix of the image of ``c``; ``b`` has only digit 0 in
    valid representations, other digits are sent back to ``b`` for totality.
    """
    alph = TrackAlphabet(1, (0, 1, 2, 3), None)
    delta = [[0, 1, 0, 1], [1, 1, 1, 1]]
    return OutputAutomaton(Dfa(alph, delta, 0, []), ["a", "b"])


def _build(name: str) -> AutomaticWord:
    if name == "thue-morse":
        return AutomaticWord(name, BASE2, substitution_dfao(THUE_MORSE), THUE_MORSE, None, 0)
    if name == "period-doubling":
        return AutomaticWord(name, BASE2, substitution_dfao(PERIOD_DOUBLING), PERIOD_DOUBLING, None, 0)
    if name == "paperfolding":
        return AutomaticWord(
            name, BASE2, substitution_dfao(PAPERFOLDING, PAPERFOLDING_CODING), PAPERFOLDING, PAPERFOLDING_CODING, "a"
        )
    if name == "rudin-shapiro":
        return AutomaticWord(
            name, BASE2, substitution_dfao(RUDIN_SHAPIRO, RUDIN_SHAPIRO_CODING), RUDIN_SHAPIRO, RUDIN_SHAPIRO_CODING, "a"
        )
    if name == "cassaigne-z":
        return AutomaticWord(name, Z_SYSTEM, cassaigne_dfao(), CASSAIGNE, None, "a", cover=z_cover)
    raise UnknownWord(f"unknown word {name!r}; known: {', '.join(WORD_NAMES)}")


WORD_NAMES = ("thue-morse", "period-doubling", "paperfolding", "rudin-shapiro", "cassaigne-z")
_ALIASES = {"tm": "thue-morse", "pd": "period-doubling", "pf": "paperfolding", "rs": "rudin-shapiro", "z": "cassaigne-z"}
_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def get_word(name: str) -> AutomaticWord:
    name = _ALIASES.get(name, name)
    with _CACHE_LOCK:
        if name not in _CACHE:
            _CACHE[name] = _build(name)
        return _CACHE[name]


def z_prefix_recurrence(length: int) -> str:
    """Prefix of the z word from ``p1 = a``, ``p(k+1) = p(k) b^k p(k)``."""
    p, k = "a", 1
    while len(p) < length:
        p = p + "b" * k + p
        k += 1
    return p[:length]


def z_cover(n: int) -> list:
    """Exact length-``n`` factor cover of the z word.

    With ``K`` least such that ``|p_K| >= n``, the word z is a product of
    copies of ``p_K`` separated by runs ``b^j`` with every ``j >= K``
    occurring, so a length-``n`` window meets at most two copies and one run
    and the words ``p_K b^j p_K`` for ``K <= j <= n`` cover every factor.
    """
    p, k = "a", 1
    while len(p) < n:
        p = p + "b" * k + p
        k += 1
    return [p + "b" * j + p for j in range(k, max(n, k) + 1)]
