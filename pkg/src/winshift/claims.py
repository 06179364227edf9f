"""Scripted reproduction checks, one per acceptance criterion.

Each check returns a :class:`ClaimResult` with the expected and observed
values; a check passes only if the values agree and it finished within its
time limit.  ``winshift reproduce`` and the acceptance tests both run these.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .ans import BASE2, Z_SYSTEM, z_regex_match
from .automata import Dfa, TrackAlphabet, enumerate_words, live_states, minimize
from .coding import abc_encode
from .game import (
    TargetSet,
    format_compressed,
    is_winning,
    max_branchings,
    shortest_sum_witness,
    slice_target,
    verify_strategy,
    winning_set,
    winning_slice_bounded,
)
from .predicates.library import coding_dimension, standard_context, winning_shift_automaton
from .words import get_word
from .wreg import winning_language_automaton


@dataclass
class ClaimResult:
    claim: str
    title: str
    passed: bool
    expected: object
    actual: object
    seconds: float = 0.0
    limit: float | None = None
    details: list = field(default_factory=list)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" (limit {self.limit:g}s)" if self.limit else ""
        return f"{status} {self.claim}: {self.title} [{self.seconds:.2f}s{limit}]"

    def report(self) -> str:
        lines = [self.summary(), f"  expected: {self.expected}", f"  actual:   {self.actual}"]
        lines += [f"  {d}" for d in self.details]
        return "\n".join(lines)


@dataclass(frozen=True)
class Claim:
    claim: str
    criterion: int
    title: str
    limit: float | None
    run: Callable  # () -> (expected, actual, details)

    def check(self) -> ClaimResult:
        start = time.perf_counter()
        expected, actual, details = self.run()
        secs = time.perf_counter() - start
        ok = expected == actual and (self.limit is None or secs <= self.limit)
        if expected == actual and not ok:
            details = list(details) + [f"time limit of {self.limit:g}s exceeded"]
        return ClaimResult(self.claim, self.title, ok, expected, actual, secs, self.limit, list(details))


# ----------------------------------------------------------------- checks


def _intro_example():
    got = winning_set(TargetSet.of(["000", "110", "111"]))
    return ["000", "001", "100"], sorted("".join(map(str, a)) for a in got), []


TM4_FACTORS = ["0010", "0011", "0100", "0101", "0110", "1001", "1010", "1011", "1100", "1101"]
TM4_WINNING = ["0000", "0001", "0010", "0100", "0101", "1000", "1001", "1010", "1100", "1101"]


def _tm_length4():
    x = slice_target(get_word("thue-morse"), 4)
    facts = sorted(x.words)
    w = sorted("".join(map(str, a)) for a in winning_set(x))
    tree = is_winning(x, "1101")
    pattern = tree.branch_pattern() if tree else None
    valid = tree is not None and verify_strategy(tree, x, "1101")
    return (
        (TM4_FACTORS, TM4_WINNING, (2, 2, 1, 2), True),
        (facts, w, pattern, valid),
        [],
    )


CARDINALITY_WORDS = ("thue-morse", "period-doubling", "paperfolding", "rudin-shapiro")


def _cardinality(max_n: int = 14):
    bad = []
    for name in CARDINALITY_WORDS:
        w = get_word(name)
        for n in range(1, max_n + 1):
            x = slice_target(w, n)
            k = len(winning_set(x))
            if k != len(x):
                bad.append((name, n, len(x), k))
    return [], bad, [f"words {', '.join(CARDINALITY_WORDS)}, lengths 1..{max_n}"]


def _power_of_two_gap(lo: int, hi: int):
    """``k`` with ``hi - lo = 2^k``, ``k >= 1``, else ``None``."""
    g = hi - lo
    if g < 2 or g & (g - 1):
        return None
    return g.bit_length() - 1


def tm_bullets(ones: tuple) -> bool:
    """Closed-form description of the Thue-Morse winning shift (1-based positions)."""

    def cond(b, c):
        k = _power_of_two_gap(b, c)
        return k is not None and b - 1 <= 2 ** (k - 1)

    if len(ones) <= 1:
        return True
    if len(ones) == 2:
        b, c = ones
        return b == 1 or cond(b, c)
    if len(ones) == 3:
        a, b, c = ones
        return a == 1 and cond(b, c)
    return False


def pd_bullets(ones: tuple) -> bool:
    """Closed-form description of the period-doubling winning shift."""
    if len(ones) <= 1:
        return True
    if len(ones) == 2:
        a, b = ones
        k = _power_of_two_gap(a, b)
        return k is not None and a - 1 <= 2 ** (k - 1)
    return False


def _ones(alpha) -> tuple:
    return tuple(i + 1 for i, a in enumerate(alpha) if a)


def _characterization(word: str, bullets, n: int = 64, max_ones: int = 4):
    w = get_word(word)
    # W has no member with more ones than the coding dimension, so the full
    # slice is the unbounded search
    members = {_ones(a) for a in winning_slice_bounded(w, n, n)}
    described = {
        ones
        for m in range(max_ones + 1)
        for ones in itertools.combinations(range(1, n + 1), m)
        if bullets(ones)
    }
    only_oracle = sorted(members - described)
    only_bullets = sorted(described - members)
    details = [f"{len(members)} winning sequences with support in [1..{n}]"]
    if only_bullets:
        details.append(f"described but losing (first 10): {only_bullets[:10]}")
    if only_oracle:
        details.append(f"winning but not described (first 10): {only_oracle[:10]}")
    return (0, 0), (len(only_oracle), len(only_bullets)), details


def _coding_dimensions():
    tm, pd = get_word("thue-morse"), get_word("period-doubling")
    oracle = (max_branchings(slice_target(tm, 64)), max_branchings(slice_target(pd, 64)))
    engine = tuple(coding_dimension(get_word(name)) for name in CARDINALITY_WORDS)
    return ((3, 2), (3, 2, 3, 4)), (oracle, engine), ["engine order: " + ", ".join(CARDINALITY_WORDS)]


def _engine_oracle(bound: int = 64):
    out_exp, out_act, details = [], [], []
    for name, arity in (("thue-morse", 3), ("period-doubling", 2)):
        w = get_word(name)
        a = winning_shift_automaton(w, arity, standard_context(w))
        got = a.tuples_upto(bound)
        ref = {abc_encode(y, arity) for y in winning_slice_bounded(w, bound, arity)}
        out_exp.append(len(ref))
        out_act.append(len(ref) if got == ref else f"{len(got)} (differs on {len(got ^ ref)})")
        details.append(f"{name}: automaton with {a.n_states} states, arity {arity}")
    return out_exp, out_act, details


def random_dfa(rng: np.random.Generator, max_states: int = 5, max_letters: int = 3) -> Dfa:
    n = int(rng.integers(1, max_states + 1))
    q = int(rng.integers(1, max_letters + 1))
    alph = TrackAlphabet(1, tuple(str(c) for c in range(q)), None)
    delta = rng.integers(0, n, size=(n, q))
    acc = rng.random(n) < 0.5
    return Dfa(alph, delta, 0, acc)


def _boolean_automaton(count: int = 200, max_n: int = 6, seed: int = 2024):
    rng = np.random.default_rng(seed)
    bad = []
    for trial in range(count):
        d = random_dfa(rng)
        wd = winning_language_automaton(d)
        symbols = d.alphabet.symbols
        by_len: dict = {}
        for word in enumerate_words(minimize(d), max_n):
            by_len.setdefault(len(word), []).append("".join(word))
        slices: dict = {}
        for word in enumerate_words(wd, max_n):
            slices.setdefault(len(word), set()).add(tuple(word))
        for n in range(max_n + 1):
            ref = winning_set(TargetSet.of(by_len.get(n, []), symbols, n))
            if slices.get(n, set()) != ref:
                bad.append((trial, n))
    return [], bad, [f"{count} random automata, seed {seed}, lengths 0..{max_n}"]


Z_TABLE = {
    1: "1", 2: "2", 3: "3", 4: "10", 5: "20", 6: "21", 7: "22", 8: "23", 9: "30", 10: "100", 11: "200",
    12: "201", 13: "202", 14: "203", 15: "210", 16: "220", 17: "221", 18: "222", 19: "223", 20: "230",
    21: "300", 22: "1000",
}


def _z_table(limit: int = 100_000):
    table = {n: "".join(map(str, Z_SYSTEM.rep(n))) for n in Z_TABLE}
    bad_val, bad_regex = [], []
    reps = []
    for n, w in zip(range(limit + 1), Z_SYSTEM.iter_reps()):
        if Z_SYSTEM.val(w) != n:
            bad_val.append(n)
        if not z_regex_match(w):
            bad_regex.append(n)
        reps.append(w)
    # completeness on short lengths: a word matches the regex iff it is a rep
    short = 8
    rep_set = {w for w in reps if len(w) <= short}
    mismatched = [
        w
        for length in range(short + 1)
        for w in itertools.product(range(4), repeat=length)
        if (not w or w[0] != 0) and z_regex_match(w) != (w in rep_set)
    ]
    complete = len(reps[-1]) > short and not mismatched
    details = [f"representations of 0..{limit}; all words of length <= {short} compared with the regex"]
    return (Z_TABLE, [], [], True), (table, bad_val[:10], bad_regex[:10], complete), details


Z_WITNESS = (1, 0, 1) + (0,) * 4 + (1,) + (0,) * 197 + (1,)
Z_BUDGET = 210


def _z_witness(prefixes=(100_000, 400_000), budget: int = Z_BUDGET):
    z = get_word("cassaigne-z")
    found = []
    for p in prefixes:
        found.append(shortest_sum_witness(z, 4, budget, prefix_len=p))
    shown = [format_compressed(f) if f is not None else "none" for f in found]
    details = [f"prefix {p}: {s}" for p, s in zip(prefixes, shown)]
    exp = format_compressed(Z_WITNESS)
    return [exp] * len(prefixes), shown, details


def _z_witness_exact(budget: int = Z_BUDGET):
    """Same search over the exact factor language instead of a prefix."""
    w = shortest_sum_witness(get_word("cassaigne-z"), 4, budget)
    return format_compressed(Z_WITNESS), format_compressed(w) if w is not None else "none", []


def _base2_arithmetic(bound: int = 512):
    adder = BASE2.adder_automaton()
    le = BASE2.comparator_automaton()
    lt = BASE2.comparator_automaton(strict=True)
    xs, ys = np.meshgrid(np.arange(bound + 1), np.arange(bound + 1), indexing="ij")
    xs, ys = xs.ravel(), ys.ravel()
    bad = []
    if not np.array_equal(run_padded(le, [xs, ys]), xs <= ys):
        bad.append("comparator <=")
    if not np.array_equal(run_padded(lt, [xs, ys]), xs < ys):
        bad.append("comparator <")
    if not run_padded(adder, [xs, ys, xs + ys]).all():
        bad.append("adder rejects x + y")
    counts = accepted_third_track_counts(adder, xs, ys, max_len=(2 * bound).bit_length() + 1)
    if not (counts == 1).all():
        bad.append(f"adder accepts {int((counts != 1).sum())} pairs with a wrong number of sums")
    return [], bad, [f"all x, y <= {bound}; sums checked against every z < 2^{(2 * bound).bit_length() + 1}"]


def _bits(values: np.ndarray, length: int) -> np.ndarray:
    return (values[:, None] >> np.arange(length - 1, -1, -1)[None, :]) & 1


def _rep_len(values: np.ndarray) -> np.ndarray:
    out = np.zeros(len(values), dtype=np.int64)
    v = values.copy()
    while (v > 0).any():
        out += v > 0
        v >>= 1
    return out


def run_padded(d: Dfa, tracks) -> np.ndarray:
    """Acceptance of ``#``-padded base-2 tuples, vectorised over rows."""
    tracks = [np.asarray(t, dtype=np.int64) for t in tracks]
    lens = np.stack([_rep_len(t) for t in tracks])
    total = lens.max(axis=0)
    L = int(total.max()) if total.size else 0
    idx = np.empty((len(tracks[0]), L, len(tracks)), dtype=np.int64)
    for j, t in enumerate(tracks):
        bits = _bits(t, L)
        # right-align within each row's own width, pad = letter index 2
        pos = np.arange(L)[None, :]
        start = L - lens[j][:, None]
        idx[:, :, j] = np.where(pos >= start, bits, 2)
    codes = d.alphabet.code_of_indices(idx)
    state = np.full(len(tracks[0]), d.initial, dtype=np.int64)
    for t in range(L):
        # rows shorter than L skip their leading all-pad columns
        active = t >= L - total
        state = np.where(active, d.delta[state, codes[:, t]], state)
    return d.accepting[state]


def accepted_third_track_counts(d: Dfa, xs: np.ndarray, ys: np.ndarray, max_len: int) -> np.ndarray:
    """For each pair, how many ``z < 2^max_len`` make ``(x, y, z)`` accepted.

    One pass over ``max_len`` columns; the z track is either still padding
    or started, and columns that would be all padding are not read.
    """
    lx, ly = _rep_len(xs), _rep_len(ys)
    if max(int(lx.max()), int(ly.max())) > max_len:
        raise ValueError("operands longer than max_len")
    bx, by = _bits(xs, max_len), _bits(ys, max_len)
    rows, n_st = len(xs), d.n_states
    r = np.arange(rows)
    alph = d.alphabet
    # mass in a dead state never reaches acceptance
    live = [q for q in range(n_st) if live_states(d)[q]]

    def step(counts, cx, cy, zd):
        codes = alph.code_of_indices(np.stack([cx, cy, np.full_like(cx, zd)], axis=-1))
        out = np.zeros(rows * n_st, dtype=counts.dtype)
        base = r * n_st
        for q in live:
            # one destination per row, so the fancy-index update has no collisions
            out[base + d.delta[q, codes]] += counts[:, q]
        return out.reshape(rows, n_st)

    waiting = np.zeros((rows, n_st), dtype=np.int64)
    started = np.zeros((rows, n_st), dtype=np.int64)
    waiting[:, d.initial] = 1
    for t in range(max_len):
        cx = np.where(t >= max_len - lx, bx[:, t], 2)
        cy = np.where(t >= max_len - ly, by[:, t], 2)
        blank = ((cx == 2) & (cy == 2))[:, None]
        new_started = step(waiting, cx, cy, 1) + step(started, cx, cy, 0) + step(started, cx, cy, 1)
        waiting = np.where(blank, waiting, step(waiting, cx, cy, 2))
        started = new_started
    return (waiting + started)[:, d.accepting].sum(axis=1)


CLAIMS = {
    c.claim: c
    for c in (
        Claim("intro-example", 1, "W({000,110,111}) = {000,001,100}", 1.0, _intro_example),
        Claim("tm-length4", 2, "Thue-Morse length-4 winning set and the 1101 strategy", 1.0, _tm_length4),
        Claim("cardinality", 3, "|W(X_n)| = |X_n| for four words, n <= 14", 30.0, _cardinality),
        Claim(
            "tm-characterization", 4, "Thue-Morse winning shift matches its description on [1..64]", 120.0,
            lambda: _characterization("thue-morse", tm_bullets),
        ),
        Claim(
            "pd-characterization", 5, "period-doubling winning shift matches its description on [1..64]", 120.0,
            lambda: _characterization("period-doubling", pd_bullets),
        ),
        Claim("coding-dimensions", 6, "coding dimensions by oracle and by the predicate engine", 1800.0, _coding_dimensions),
        Claim("engine-oracle", 7, "winning-shift automata agree with the game oracle on values <= 64", None, _engine_oracle),
        Claim("boolean-automaton", 8, "boolean automaton route agrees with the game oracle", 120.0, _boolean_automaton),
        Claim("z-table", 9, "the z numeration system: table, val(rep(n)) = n, regex", 30.0, _z_table),
        Claim("z-sum4-witness", 10, "shortest sum-4 winning factor of the z word", 600.0, _z_witness),
        Claim("base2-arithmetic", 11, "base-2 adder and comparators on operands <= 512", 10.0, _base2_arithmetic),
    )
}

EXTRA_CLAIMS = {
    "z-sum4-witness-exact": Claim(
        "z-sum4-witness-exact", 10, "shortest sum-4 winning factor over the exact z language", 600.0, _z_witness_exact
    ),
}


def get_claim(claim: str) -> Claim:
    table = {**CLAIMS, **EXTRA_CLAIMS}
    if claim not in table:
        raise KeyError(claim)
    return table[claim]
