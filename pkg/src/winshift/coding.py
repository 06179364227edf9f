"""Encodings of finite-support sequences as integer tuples.

A finite-support sequence is an infinite word over the naturals with
finitely many nonzero letters.  Three views are used: the nondecreasing
vector of support positions counted with multiplicity (``nu``), the pair
(erased word, support) and, for binary sequences, fixed-arity tuples of
1-based positions padded on the left with zeros (``abc``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True)
class FiniteSupportSeq:
    items: tuple = ()  # (position, value) pairs, positions increasing, values > 0

    def __post_init__(self):
        items = tuple((int(p), int(v)) for p, v in self.items)
        for (p, v), nxt in zip(items, items[1:] + ((None, None),)):
            if p < 0 or v <= 0:
                raise ValueError(f"bad support entry {(p, v)}")
            if nxt[0] is not None and nxt[0] <= p:
                raise ValueError("support positions must be strictly increasing")
        object.__setattr__(self, "items", items)

    @classmethod
    def from_word(cls, word) -> "FiniteSupportSeq":
        """``word`` followed by zeros; digits may be given as a string."""
        vals = [int(c) for c in word]
        if any(v < 0 for v in vals):
            raise ValueError("negative letter")
        return cls(tuple((p, v) for p, v in enumerate(vals) if v))

    def to_word(self, length: int | None = None) -> tuple:
        end = self.items[-1][0] + 1 if self.items else 0
        if length is None:
            length = end
        if length < end:
            raise ValueError(f"support reaches position {end - 1}")
        out = [0] * length
        for p, v in self.items:
            out[p] = v
        return tuple(out)

    @property
    def total(self) -> int:
        return sum(v for _, v in self.items)


def _seq(x) -> FiniteSupportSeq:
    return x if isinstance(x, FiniteSupportSeq) else FiniteSupportSeq.from_word(x)


def nu_encode(x) -> tuple:
    """Support positions repeated by their values, in order."""
    return tuple(p for p, v in _seq(x).items for _ in range(v))


def nu_decode(vector: Iterable[int]) -> FiniteSupportSeq:
    vec = tuple(int(n) for n in vector)
    if any(a > b for a, b in zip(vec, vec[1:])):
        raise ValueError(f"{vec} is not nondecreasing")
    counts: dict = {}
    for n in vec:
        if n < 0:
            raise ValueError("negative position")
        counts[n] = counts.get(n, 0) + 1
    return FiniteSupportSeq(tuple(sorted(counts.items())))


def erase(x) -> tuple:
    """The nonzero letters of ``x`` in order."""
    return tuple(v for _, v in _seq(x).items)


def support(x) -> tuple:
    return tuple(p for p, _ in _seq(x).items)


def pv_extract(ws: Iterable, v) -> set:
    """Supports of the members of ``ws`` whose nonzero letters spell ``v``."""
    v = tuple(int(c) for c in v)
    return {support(y) for y in ws if erase(y) == v}


def nu_from_pv(v, positions) -> tuple:
    """The ``nu`` vector of the sequence with letters ``v`` at ``positions``."""
    return tuple(p for p, c in zip(positions, v) for _ in range(int(c)))


def compositions(k: int, max_part: int | None = None):
    """Words over the positive integers with letter sum ``k``."""
    if k == 0:
        yield ()
        return
    top = k if max_part is None else min(k, max_part)
    for first in range(1, top + 1):
        for rest in compositions(k - first, max_part):
            yield (first,) + rest


def abc_encode(y, arity: int = 3) -> tuple:
    """1-based positions of the ones of binary ``y``, right-aligned in ``arity`` slots."""
    seq = _seq(y)
    if any(v != 1 for _, v in seq.items):
        raise ValueError("abc encoding needs a binary sequence")
    pos = [p + 1 for p, _ in seq.items]
    if len(pos) > arity:
        raise ValueError(f"{len(pos)} ones do not fit in arity {arity}")
    return (0,) * (arity - len(pos)) + tuple(pos)


def abc_decode(t: Iterable[int]) -> FiniteSupportSeq:
    t = tuple(int(a) for a in t)
    nz = [a for a in t if a]
    head = len(t) - len(nz)
    if any(t[:head]) or any(a < 0 for a in t):
        raise ValueError(f"{t}: zeros must precede every nonzero entry")
    if any(a >= b for a, b in zip(nz, nz[1:])):
        raise ValueError(f"{t}: nonzero entries must increase strictly")
    return FiniteSupportSeq(tuple((a - 1, 1) for a in nz))


def is_abc_tuple(t) -> bool:
    try:
        abc_decode(t)
    except ValueError:
        return False
    return True


def tuples_to_csv(tuples: Iterable) -> str:
    """Sorted, one tuple per line, comma separated."""
    rows = sorted(tuple(int(a) for a in t) for t in tuples)
    return "".join(",".join(str(a) for a in r) + "\n" for r in rows)


def tuples_from_csv(text: str) -> set:
    """Inverse of :func:`tuples_to_csv`; an empty line is the empty tuple."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return {tuple(int(a) for a in ln.split(",")) if ln.strip() else () for ln in lines}
