"""Command-line entry point.

Exit codes: 0 success, 1 a check failed or no witness/strategy exists,
2 unknown word or claim, 3 bad symbol or representation, 4 unsupported
feature, 5 resource cap exceeded, 6 malformed formula, 7 dimension exceeded,
64 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .ans import get_system, word_str
from .automata import DEFAULT_STATE_CAP
from .coding import tuples_to_csv
from .errors import DimensionExceeded, UnknownWord, WinshiftError
from .game import (
    TargetSet,
    choice_str,
    format_compressed,
    is_winning,
    max_branchings,
    read_word_list,
    shortest_sum_witness,
    slice_target,
    winning_set,
    winning_slice_bounded,
)
from .textformat import dumps, loads, to_dot
from .words import WORD_NAMES, factor_set, get_word, right_special

CAP_ENV = "WINSHIFT_STATE_CAP"
EXIT_FAIL = 1
EXIT_USAGE = 64


class UsageError(Exception):
    pass


def state_cap(args) -> int:
    if getattr(args, "cap", None) is not None:
        return args.cap
    env = os.environ.get(CAP_ENV)
    if env is None:
        return DEFAULT_STATE_CAP
    try:
        cap = int(env)
    except ValueError:
        raise UsageError(f"{CAP_ENV} must be an integer, got {env!r}") from None
    if cap <= 0:
        raise UsageError(f"{CAP_ENV} must be positive")
    return cap


def _positive(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a natural number")
    return v


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") or not text else text + "\n")


# ------------------------------------------------------------------ commands


def cmd_ans_rep(args) -> int:
    s = get_system(args.system)
    for n in args.n:
        sys.stdout.write(word_str(s.rep(n)) + "\n")  # rep(0) is an empty line
    return 0


def cmd_ans_val(args) -> int:
    s = get_system(args.system)
    for w in args.word:
        _out(str(s.val(w)))
    return 0


def cmd_word_letter(args) -> int:
    w = get_word(args.word)
    _out(" ".join(str(w.letter(n)) for n in args.n))
    return 0


def cmd_word_prefix(args) -> int:
    _out(get_word(args.word).prefix(args.length))
    return 0


def cmd_word_factors(args) -> int:
    w = get_word(args.word)
    fs = right_special(w, args.n, args.prefix_len) if args.right_special else factor_set(w, args.n, args.prefix_len)
    _out("\n".join(sorted(fs)))
    return 0


def _target(args) -> TargetSet:
    if args.file:
        return read_word_list(args.file)
    if args.word and args.n is not None:
        return slice_target(get_word(args.word), args.n, args.prefix_len)
    raise UsageError("give --file, or --word with --n")


def cmd_game_win_set(args) -> int:
    x = _target(args)
    ws = sorted(choice_str(a) for a in winning_set(x))
    _out(("\n" if args.lines else ",").join(ws))
    return 0


def cmd_game_check(args) -> int:
    x = _target(args)
    tree = is_winning(x, args.choice)
    if tree is None:
        _out(f"{args.choice}: no winning strategy")
        return EXIT_FAIL
    _out(tree.render())
    return 0


def cmd_game_slice(args) -> int:
    w = get_word(args.word)
    ws = sorted(choice_str(a) for a in winning_slice_bounded(w, args.n, args.max_sum, args.prefix_len))
    _out("\n".join(ws))
    return 0


def cmd_game_max(args) -> int:
    _out(str(max_branchings(_target(args))))
    return 0


def cmd_game_witness(args) -> int:
    w = get_word(args.word)
    found = shortest_sum_witness(w, args.k, args.budget, args.prefix_len)
    if found is None:
        _out(f"no winning factor with sum {args.k} up to length {args.budget}")
        return EXIT_FAIL
    _out(f"{format_compressed(found)}\nlength {len(found)}")
    return 0


def cmd_wreg(args) -> int:
    from .automata import Dfa, enumerate_words
    from .wreg import DEFAULT_ANTICHAIN_CAP, winning_language_automaton

    d = loads(Path(args.file).read_text())
    if not isinstance(d, Dfa):
        raise UsageError("expected a DFA, not an automaton with output")
    wd = winning_language_automaton(d, args.cap or DEFAULT_ANTICHAIN_CAP)
    if args.enumerate is not None:
        words = [w for w in enumerate_words(wd, args.enumerate) if len(w) == args.enumerate]
        _out("\n".join(choice_str(w) for w in words))
    elif args.out == "dot":
        _out(to_dot(wd, "W"))
    else:
        _out(dumps(wd))
    return 0


def _emit_predicate(pa, args) -> None:
    if args.out == "csv":
        _out(tuples_to_csv(pa.tuples_upto(args.bound)))
    elif args.out == "dot":
        _out(to_dot(pa.to_padded(), "P"))
    else:
        _out(f"# variables {','.join(pa.vars)}\n" + dumps(pa.to_padded()))


def cmd_pred_compile(args) -> int:
    from .predicates.library import standard_context

    ctx = standard_context(get_word(args.word), state_cap(args))
    text = Path(args.file).read_text()
    formulas = ctx.load(text)
    if formulas:
        pa = ctx.compile(formulas[-1])
    elif args.predicate:
        pa = ctx.predicate(args.predicate)
    else:
        raise UsageError("the file has no bare formula; name a definition with --predicate")
    _emit_predicate(pa, args)
    return 0


def cmd_pred_coding_dim(args) -> int:
    from .predicates.library import coding_dimension, standard_context

    w = get_word(args.word)
    try:
        _out(str(coding_dimension(w, args.dmax, standard_context(w, state_cap(args)))))
    except DimensionExceeded as exc:
        _out(f">= {args.dmax + 1}")
        sys.stderr.write(f"{exc}; branching depths {exc.witness}\n")
        return exc.exit_code
    return 0


def cmd_pred_winshift(args) -> int:
    from .predicates.library import standard_context, winning_shift_automaton

    w = get_word(args.word)
    pa = winning_shift_automaton(w, args.arity, standard_context(w, state_cap(args)))
    _emit_predicate(pa, args)
    return 0


def cmd_reproduce(args) -> int:
    from .claims import CLAIMS, EXTRA_CLAIMS, get_claim

    if args.list:
        for c in list(CLAIMS.values()) + list(EXTRA_CLAIMS.values()):
            _out(f"{c.claim:24s} criterion {c.criterion:2d}  {c.title}")
        return 0
    if args.all:
        ids = list(CLAIMS)
    elif args.claim:
        ids = [args.claim]
    else:
        raise UsageError("name a claim, or use --all or --list")
    try:
        claims = [get_claim(c) for c in ids]
    except KeyError as exc:
        raise UnknownWord(f"unknown claim {exc.args[0]!r}; see 'winshift reproduce --list'") from None
    failed = 0
    for c in claims:
        res = c.check()
        _out(res.report())
        sys.stdout.flush()
        failed += not res.passed
    if len(claims) > 1:
        _out(f"{len(claims) - failed}/{len(claims)} claims reproduced")
    return EXIT_FAIL if failed else 0


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="winshift", description="Winning shifts of automatic words.")
    p.add_argument("--version", action="version", version=f"winshift {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    ans = sub.add_parser("ans", help="numeration systems").add_subparsers(dest="sub", required=True)
    r = ans.add_parser("rep", help="representations of naturals")
    r.add_argument("--system", default="base-2", help="base-K, fibonacci or z (default base-2)")
    r.add_argument("n", type=_positive, nargs="+")
    r.set_defaults(func=cmd_ans_rep)
    v = ans.add_parser("val", help="values of representations")
    v.add_argument("--system", default="base-2")
    v.add_argument("word", nargs="+")
    v.set_defaults(func=cmd_ans_val)

    wd = sub.add_parser("word", help=f"automatic words: {', '.join(WORD_NAMES)}").add_subparsers(dest="sub", required=True)
    a = wd.add_parser("letter")
    a.add_argument("word")
    a.add_argument("n", type=_positive, nargs="+")
    a.set_defaults(func=cmd_word_letter)
    a = wd.add_parser("prefix")
    a.add_argument("word")
    a.add_argument("length", type=_positive)
    a.set_defaults(func=cmd_word_prefix)
    a = wd.add_parser("factors", help="length-n factors, one per line")
    a.add_argument("word")
    a.add_argument("n", type=_positive)
    a.add_argument("--prefix-len", type=_positive)
    a.add_argument("--right-special", action="store_true")
    a.set_defaults(func=cmd_word_factors)

    game = sub.add_parser("game", help="the choice game on finite target sets").add_subparsers(dest="sub", required=True)

    def target_args(q):
        q.add_argument("--file", help="word list, one word per line")
        q.add_argument("--word", help="use the length-n factors of a built-in word")
        q.add_argument("--n", type=_positive)
        q.add_argument("--prefix-len", type=_positive)

    a = game.add_parser("win-set", help="the winning set W(X)")
    target_args(a)
    a.add_argument("--lines", action="store_true", help="one sequence per line instead of comma separated")
    a.set_defaults(func=cmd_game_win_set)
    a = game.add_parser("check", help="a strategy tree for a choice sequence")
    target_args(a)
    a.add_argument("choice")
    a.set_defaults(func=cmd_game_check)
    a = game.add_parser("max-branchings", help="largest sum over W(X)")
    target_args(a)
    a.set_defaults(func=cmd_game_max)
    a = game.add_parser("slice", help="members of W(L_n) with bounded sum")
    a.add_argument("word")
    a.add_argument("n", type=_positive)
    a.add_argument("--max-sum", type=_positive, default=4)
    a.add_argument("--prefix-len", type=_positive)
    a.set_defaults(func=cmd_game_slice)
    a = game.add_parser("witness", help="shortest winning factor with a given sum")
    a.add_argument("word")
    a.add_argument("k", type=_positive)
    a.add_argument("--budget", type=_positive, default=210)
    a.add_argument("--prefix-len", type=_positive, help="search a prefix instead of the exact language")
    a.set_defaults(func=cmd_game_witness)

    a = sub.add_parser("wreg", help="winning-set automaton of a regular language")
    a.add_argument("file", help="single-track DFA in the text format")
    a.add_argument("--out", choices=("text", "dot"), default="text")
    a.add_argument("--enumerate", type=_positive, metavar="N", help="print the length-N choice sequences")
    a.add_argument("--cap", type=_positive)
    a.set_defaults(func=cmd_wreg)

    pred = sub.add_parser("pred", help="first-order predicates over base-k words").add_subparsers(dest="sub", required=True)

    def pred_args(q, default_out="text"):
        q.add_argument("--out", choices=("text", "dot", "csv"), default=default_out)
        q.add_argument("--bound", type=_positive, default=64, help="largest value listed by --out csv")
        q.add_argument("--cap", type=_positive, help=f"state cap (also {CAP_ENV})")

    a = pred.add_parser("compile", help="compile the last formula of a file")
    a.add_argument("file")
    a.add_argument("--word", default="thue-morse")
    a.add_argument("--predicate", help="compile this definition when the file has no bare formula")
    pred_args(a)
    a.set_defaults(func=cmd_pred_compile)
    a = pred.add_parser("coding-dim")
    a.add_argument("word")
    a.add_argument("--dmax", type=_positive, default=6)
    a.add_argument("--cap", type=_positive)
    a.set_defaults(func=cmd_pred_coding_dim)
    a = pred.add_parser("winshift", help="automaton for the binary members of the winning shift")
    a.add_argument("word")
    a.add_argument("--arity", type=_positive, default=3)
    pred_args(a)
    a.set_defaults(func=cmd_pred_winshift)

    a = sub.add_parser("reproduce", help="run the scripted reproduction checks")
    a.add_argument("claim", nargs="?")
    a.add_argument("--all", action="store_true")
    a.add_argument("--list", action="store_true")
    a.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"winshift: {exc}\n")
        return EXIT_USAGE
    except WinshiftError as exc:
        sys.stderr.write(f"winshift: {exc}\n")
        return exc.exit_code
    except (OSError, ValueError) as exc:
        sys.stderr.write(f"winshift: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
