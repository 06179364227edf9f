"""Formula syntax tree and parser.

Grammar (whitespace free, ``#`` starts a comment)::

    program  := (def | formula)*
    def      := 'def' NAME '"' formula '"' (':' | ';')?      free variables in alphabetical order
              | 'def' NAME '(' vars ')' ':=' formula ';'     explicit parameter order
    formula  := quant | iff
    quant    := ('A' | 'E') vars formula                     the body extends as far right as possible
    iff      := implies ('<=>' implies)*
    implies  := or ('=>' implies)?
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '~' unary | quant | '(' formula ')' | 'true' | 'false' | call | comparison
    call     := '$' NAME '(' term (',' term)* ')'
    comparison := term OP term                               OP in = != < <= > >=
    term     := atom (('+' | '-') atom)*
    atom     := NUMBER | VAR | NUMBER '*' atom | WORD '[' term ']' | '@' LETTER | '(' term ')'

Variables start with a lowercase letter.  ``A`` and ``E`` directly followed by
a lowercase letter open a quantifier (``Ai``, ``Em1,m2``).  A word is an
uppercase name followed by ``[``; ``T`` denotes the context word.
Subtraction is natural: an atom mentioning ``x - y`` is false when ``x < y``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from ..errors import FormulaError

# ------------------------------------------------------------------ terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Num:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Add:
    left: object
    right: object

    def __str__(self):
        return f"{self.left}+{_tparen(self.right)}"


@dataclass(frozen=True)
class Sub:
    left: object
    right: object

    def __str__(self):
        return f"{self.left}-{_tparen(self.right)}"


@dataclass(frozen=True)
class Letter:
    """A letter constant of the context word."""

    value: object

    def __str__(self):
        return f"@{self.value}"


@dataclass(frozen=True)
class At:
    """``T[index]``: the letter of the context word at a position."""

    word: str
    index: object

    def __str__(self):
        return f"{self.word}[{self.index}]"


def _tparen(t) -> str:
    return f"({t})" if isinstance(t, (Add, Sub)) else str(t)


# --------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Cmp:
    op: str  # one of = != < <= > >=
    left: object
    right: object

    def __str__(self):
        return f"{self.left} {self.op} {self.right}"


@dataclass(frozen=True)
class Not:
    body: object

    def __str__(self):
        return f"~{_paren(self.body)}"


@dataclass(frozen=True)
class And:
    parts: tuple

    def __str__(self):
        return " & ".join(_paren(p) for p in self.parts)


@dataclass(frozen=True)
class Or:
    parts: tuple

    def __str__(self):
        return " | ".join(_paren(p) for p in self.parts)


@dataclass(frozen=True)
class Implies:
    left: object
    right: object

    def __str__(self):
        return f"{_paren(self.left)} => {_paren(self.right)}"


@dataclass(frozen=True)
class Iff:
    left: object
    right: object

    def __str__(self):
        return f"{_paren(self.left)} <=> {_paren(self.right)}"


@dataclass(frozen=True)
class Exists:
    vars: tuple
    body: object

    def __str__(self):
        return f"E{','.join(self.vars)} {self.body}"


@dataclass(frozen=True)
class Forall:
    vars: tuple
    body: object

    def __str__(self):
        return f"A{','.join(self.vars)} {self.body}"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple

    def __str__(self):
        return f"${self.name}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class Definition:
    name: str
    params: tuple
    body: object

    def __str__(self):
        return f"def {self.name}({','.join(self.params)}) := {self.body};"


def _paren(f) -> str:
    simple = (Cmp, Const, Call, Not)
    return str(f) if isinstance(f, simple) else f"({f})"


def conj(*parts):
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, And) else (p,))
    return flat[0] if len(flat) == 1 else And(tuple(flat))


def disj(*parts):
    flat = []
    for p in parts:
        flat.extend(p.parts if isinstance(p, Or) else (p,))
    return flat[0] if len(flat) == 1 else Or(tuple(flat))


# ------------------------------------------------------------ variables


def term_vars(t) -> set:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Add, Sub)):
        return term_vars(t.left) | term_vars(t.right)
    if isinstance(t, At):
        return term_vars(t.index)
    return set()


def free_vars(f) -> set:
    if isinstance(f, Const):
        return set()
    if isinstance(f, Cmp):
        return term_vars(f.left) | term_vars(f.right)
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        return set().union(*(free_vars(p) for p in f.parts))
    if isinstance(f, (Implies, Iff)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (Exists, Forall)):
        return free_vars(f.body) - set(f.vars)
    if isinstance(f, Call):
        return set().union(*(term_vars(a) for a in f.args)) if f.args else set()
    raise FormulaError(f"not a formula: {f!r}")


# --------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<quant>[AE](?=[a-z]))
  | (?P<op><=>|=>|!=|<=|>=|:=|[=<>~&|+\-*()\[\],;:$"@])
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character {text[pos]!r} at offset {pos}")
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("eof", "", pos))
    return out


class Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, value: str) -> bool:
        if self.peek()[1] == value and self.peek()[0] in ("op", "name"):
            self.i += 1
            return True
        return False

    def expect(self, value: str):
        if not self.accept(value):
            self.fail(f"expected {value!r}")

    def fail(self, msg: str):
        kind, val, pos = self.peek()
        line = self.text.count("\n", 0, pos) + 1
        raise FormulaError(f"{msg} at line {line} near {val or 'end of input'!r}")

    # program level

    def program(self) -> Iterator:
        while self.peek()[0] != "eof":
            if self.peek() == ("name", "def", self.peek()[2]):
                yield self.definition()
            else:
                f = self.formula()
                self.accept(";") or self.accept(":")
                yield f

    def definition(self) -> Definition:
        self.next()
        kind, name, _ = self.next()
        if kind != "name":
            self.fail("expected a predicate name")
        if self.accept('"'):
            body = self.formula()
            self.expect('"')
            self.accept(":") or self.accept(";")
            return Definition(name, tuple(sorted(free_vars(body))), body)
        params: tuple = ()
        if self.accept("("):
            params = self.var_list(")")
            self.expect(")")
        self.expect(":=")
        body = self.formula()
        self.expect(";")
        extra = free_vars(body) - set(params)
        if extra:
            raise FormulaError(f"predicate {name} uses undeclared variables {sorted(extra)}")
        return Definition(name, params, body)

    def var_list(self, stop: str) -> tuple:
        names = []
        if self.peek()[1] == stop:
            return ()
        while True:
            kind, val, _ = self.next()
            if kind != "name" or not val[0].islower():
                self.i -= 1
                self.fail("expected a variable name")
            names.append(val)
            if not self.accept(","):
                return tuple(names)

    # formulas

    def formula(self):
        if self.peek()[0] == "quant":
            return self.quantified()
        return self.iff()

    def quantified(self):
        q = self.next()[1]
        names = []
        while True:
            kind, val, _ = self.next()
            if kind != "name" or not val[0].islower():
                self.i -= 1
                self.fail("expected a quantified variable")
            names.append(val)
            if not self.accept(","):
                break
        body = self.formula()
        return (Exists if q == "E" else Forall)(tuple(names), body)

    def iff(self):
        left = self.implies()
        while self.accept("<=>"):
            left = Iff(left, self.implies())
        return left

    def implies(self):
        left = self.disjunction()
        if self.accept("=>"):
            return Implies(left, self.implies_or_quant())
        return left

    def implies_or_quant(self):
        return self.quantified() if self.peek()[0] == "quant" else self.implies()

    def disjunction(self):
        parts = [self.conjunction()]
        while self.accept("|"):
            parts.append(self.conjunction_or_quant())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conjunction_or_quant(self):
        return self.quantified() if self.peek()[0] == "quant" else self.conjunction()

    def conjunction(self):
        parts = [self.unary()]
        while self.accept("&"):
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        kind, val, _ = self.peek()
        if kind == "quant":
            return self.quantified()
        if self.accept("~"):
            return Not(self.unary())
        if self.accept("true"):
            return Const(True)
        if self.accept("false"):
            return Const(False)
        if self.accept("$"):
            kind, name, _ = self.next()
            if kind != "name":
                self.fail("expected a predicate name after '$'")
            self.expect("(")
            args = []
            if not self.accept(")"):
                while True:
                    args.append(self.term())
                    if self.accept(")"):
                        break
                    self.expect(",")
            return Call(name, tuple(args))
        if val == "(" and self._parenthesised_formula():
            self.next()
            f = self.formula()
            self.expect(")")
            return f
        return self.comparison()

    def _parenthesised_formula(self) -> bool:
        """Is the '(' at the cursor the start of a formula rather than a term?"""
        depth = 0
        for kind, val, _ in self.toks[self.i :]:
            if val in ("(", "["):
                depth += 1
            elif val in (")", "]"):
                depth -= 1
                if depth == 0:
                    return False
            elif depth == 1 and (kind == "quant" or val in ("=", "!=", "<", "<=", ">", ">=", "&", "|", "~", "=>", "<=>", "$")):
                return True
            elif kind == "eof":
                return False
        return False

    def comparison(self):
        left = self.term()
        kind, op, _ = self.peek()
        if op not in ("=", "!=", "<", "<=", ">", ">="):
            self.fail("expected a comparison")
        self.next()
        right = self.term()
        return Cmp(op, left, right)

    def term(self):
        left = self.term_atom()
        while True:
            if self.accept("+"):
                left = Add(left, self.term_atom())
            elif self.accept("-"):
                left = Sub(left, self.term_atom())
            else:
                return left

    def term_atom(self):
        kind, val, _ = self.next()
        if kind == "num":
            if self.accept("*"):
                inner = self.term_atom()
                n = int(val)
                if n == 0:
                    return Num(0)
                out = inner
                for _ in range(n - 1):
                    out = Add(out, inner)
                return out
            return Num(int(val))
        if kind == "op" and val == "@":
            kind, letter, _ = self.next()
            if kind not in ("num", "name"):
                self.fail("expected a letter after '@'")
            return Letter(int(letter) if kind == "num" else letter)
        if kind == "op" and val == "(":
            t = self.term()
            self.expect(")")
            return t
        if kind == "name" and val[0].isupper() and self.peek()[1] == "[":
            self.next()
            idx = self.term()
            self.expect("]")
            return At(val, idx)
        if kind == "name" and val[0].islower() and val not in ("true", "false", "def"):
            return Var(val)
        self.i -= 1
        self.fail("expected a term")


def parse_formula(text: str):
    p = Parser(text)
    f = p.formula()
    if p.peek()[0] != "eof":
        p.fail("trailing input")
    return f


def parse_program(text: str) -> list:
    return list(Parser(text).program())


__all__ = [
    "Var", "Num", "Add", "Sub", "Letter", "At", "Const", "Cmp", "Not", "And", "Or", "Implies", "Iff",
    "Exists", "Forall", "Call", "Definition", "conj", "disj", "free_vars", "term_vars",
    "parse_formula", "parse_program", "tokenize",
]
