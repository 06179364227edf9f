"""Line-oriented automaton text format and DOT export.

Format::

    tracks=2 symbols=0,1 pad=#
    0 0,0 -> 0
    0 0,1 -> 1
    ...
    initial 0
    accept 0 2
    output 0 a          (DFAOs only, one line per state)

A column is written as its letters joined by commas; the single column of a
zero-track alphabet is written ``()``.  ``pad=none`` declares an unpadded
alphabet.  Integer-looking symbols are read back as integers, so
``loads(dumps(a))`` reproduces ``a`` and ``dumps(loads(text)) == text`` for
text produced by :func:`dumps`.
"""

from __future__ import annotations

import numpy as np

from .automata import Dfa, OutputAutomaton, TrackAlphabet, live_states
from .errors import FormulaError


def _letter_str(c) -> str:
    s = str(c)
    if not s or any(ch in s for ch in " ,\n") or s == "()":
        raise ValueError(f"letter {c!r} cannot be written in the text format")
    return s


def _parse_letter(s: str):
    try:
        return int(s)
    except ValueError:
        return s


def column_str(alphabet: TrackAlphabet, code: int) -> str:
    if alphabet.tracks == 0:
        return "()"
    idx = alphabet.digits[code]
    return ",".join(_letter_str(alphabet.letters[i]) for i in idx)


def dumps(a: Dfa | OutputAutomaton) -> str:
    d = a.skeleton if isinstance(a, OutputAutomaton) else a
    alph = d.alphabet
    pad = "none" if alph.pad is None else _letter_str(alph.pad)
    lines = [f"tracks={alph.tracks} symbols={','.join(_letter_str(s) for s in alph.symbols)} pad={pad}"]
    columns = [column_str(alph, s) for s in range(alph.size)]
    for q in range(d.n_states):
        row = d.delta[q]
        lines.extend(f"{q} {columns[s]} -> {int(row[s])}" for s in range(alph.size))
    lines.append(f"initial {d.initial}")
    lines.append(" ".join(["accept"] + [str(int(q)) for q in np.flatnonzero(d.accepting)]))
    if isinstance(a, OutputAutomaton):
        lines.extend(f"output {q} {_letter_str(v)}" for q, v in enumerate(a.outputs))
    return "\n".join(lines) + "\n"


def loads(text: str) -> Dfa | OutputAutomaton:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormulaError("empty automaton text")
    header = dict(field.split("=", 1) for field in lines[0].split())
    try:
        tracks = int(header["tracks"])
        symbols = tuple(_parse_letter(s) for s in header["symbols"].split(","))
        pad = None if header["pad"] == "none" else _parse_letter(header["pad"])
    except (KeyError, ValueError) as exc:
        raise FormulaError(f"bad header line {lines[0]!r}") from exc
    alph = TrackAlphabet(tracks, symbols, pad)
    trans = {}
    initial = None
    accepting = []
    outputs = {}
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "initial":
            initial = int(parts[1])
        elif parts[0] == "accept":
            accepting = [int(p) for p in parts[1:]]
        elif parts[0] == "output":
            outputs[int(parts[1])] = _parse_letter(parts[2])
        elif len(parts) == 4 and parts[2] == "->":
            if parts[1] == "()":
                column = ()
            else:
                column = tuple(_parse_letter(p) for p in parts[1].split(","))
            trans[(int(parts[0]), alph.encode(column))] = int(parts[3])
        else:
            raise FormulaError(f"unrecognised line {ln!r}")
    if initial is None:
        raise FormulaError("missing 'initial' line")
    n = max([q for q, _ in trans] + [initial] + accepting + list(outputs) + [0]) + 1
    delta = np.full((n, alph.size), -1, dtype=np.int64)
    for (q, s), t in trans.items():
        delta[q, s] = t
    if (delta < 0).any():
        raise FormulaError("transition table is not total")
    d = Dfa(alph, delta, initial, accepting)
    if outputs:
        if sorted(outputs) != list(range(n)):
            raise FormulaError("output line missing for some state")
        return OutputAutomaton(d, [outputs[q] for q in range(n)])
    return d


def to_dot(a: Dfa | OutputAutomaton, name: str = "A", hide_dead: bool = True) -> str:
    """Graphviz rendering; parallel edges are merged into one label."""
    d = a.skeleton if isinstance(a, OutputAutomaton) else a
    alph = d.alphabet
    dead = set()
    if hide_dead and not isinstance(a, OutputAutomaton):
        dead = {int(q) for q in np.flatnonzero(~live_states(d))}
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __start [shape=point, label=""];']
    for q in range(d.n_states):
        if q in dead:
            continue
        shape = "doublecircle" if d.accepting[q] else "circle"
        label = f"{q}/{a.outputs[q]}" if isinstance(a, OutputAutomaton) else str(q)
        lines.append(f'  {q} [shape={shape}, label="{label}"];')
    lines.append(f"  __start -> {d.initial};")
    for q in range(d.n_states):
        if q in dead:
            continue
        groups: dict[int, list[str]] = {}
        for s in range(alph.size):
            t = int(d.delta[q, s])
            if t not in dead:
                groups.setdefault(t, []).append(column_str(alph, s))
        for t, labels in groups.items():
            text = " ".join(f"[{lab}]" if alph.tracks > 1 else lab for lab in labels)
            lines.append(f'  {q} -> {t} [label="{text}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
