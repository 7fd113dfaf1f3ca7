"""Lexer, recursive-descent parser and pretty printer for ``.khc`` programs.

Example::

    points x1, x2, x3;
    let L0 = line(x1: 1/2, x2: 5/6, x3: 5/6);
    let M = mc(L0, chi=5/6);
    emit M;
    check M.h[0] = 2;
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import KhcError

__all__ = [
    "ParseError",
    "Program",
    "PointsDecl",
    "Let",
    "Emit",
    "Check",
    "LineExpr",
    "McExpr",
    "TensorExpr",
    "UnaryExpr",
    "TateExpr",
    "Ref",
    "parse_program",
    "pretty",
    "FUNCTIONS",
    "FIELDS",
]

KEYWORDS = {"points", "let", "emit", "check"}
UNARY = ("sym2", "wedge2", "wedge2t", "dual", "katz")
FUNCTIONS = {"line", "mc", "tensor", "tate", *UNARY}
FIELDS = {"rank", "rigidity", "h", "delta", "mu", "nu", "pairing"}
CMPS = ("=", "!=", "<", "<=", ">", ">=")


class ParseError(KhcError):
    """Syntax error with a 1-based location and the set of acceptable tokens."""

    def __init__(self, message: str, line: int, col: int, expected: frozenset[str] = frozenset()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = frozenset(expected)
        text = f"{line}:{col}: {message}"
        if self.expected:
            text += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(text)


# ---------------------------------------------------------------------------
# lexer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT, INT, SYM, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>\d+)
  | (?P<sym><=|>=|!=|[(),;:=.\[\]{}/<>\-])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "ident":
            tokens.append(Token("IDENT", m.group(), line, col))
        elif kind == "int":
            tokens.append(Token("INT", m.group(), line, col))
        elif kind == "sym":
            tokens.append(Token("SYM", m.group(), line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    line: int = field(default=0, compare=False, kw_only=True)
    col: int = field(default=0, compare=False, kw_only=True)


@dataclass(frozen=True)
class Ref(Node):
    name: str


@dataclass(frozen=True)
class LineExpr(Node):
    angles: tuple[tuple[str, Fraction], ...]
    level: int | None = None


@dataclass(frozen=True)
class McExpr(Node):
    arg: Expr
    chi: Fraction | None = None


@dataclass(frozen=True)
class TensorExpr(Node):
    line_arg: Expr
    arg: Expr


@dataclass(frozen=True)
class UnaryExpr(Node):
    op: str
    arg: Expr


@dataclass(frozen=True)
class TateExpr(Node):
    k: int
    arg: Expr


Expr = Union[Ref, LineExpr, McExpr, TensorExpr, UnaryExpr, TateExpr]


@dataclass(frozen=True)
class PointsDecl(Node):
    names: tuple[str, ...]


@dataclass(frozen=True)
class Let(Node):
    name: str
    expr: Expr


@dataclass(frozen=True)
class Emit(Node):
    name: str


@dataclass(frozen=True)
class Check(Node):
    """``check NAME.FIELD[index] CMP value``.

    ``index`` is empty for scalar fields, ``(p,)`` for ``h``/``delta`` and
    ``(point, angle, ell, p)`` for ``mu``/``nu`` (``p`` omitted on monodromy
    values).  ``value`` is an int, a ``{p: v}`` map or a bare word.
    """

    name: str
    field_name: str
    index: tuple
    cmp: str
    value: Union[int, tuple[tuple[int, int], ...], str]


Statement = Union[Let, Emit, Check]


@dataclass(frozen=True)
class Program(Node):
    points: PointsDecl
    statements: tuple[Statement, ...]


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # -- helpers -------------------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "EOF":
            self.i += 1
        return t

    def fail(self, expected, message: str | None = None):
        t = self.tok
        found = "end of input" if t.kind == "EOF" else repr(t.text)
        raise ParseError(message or f"unexpected {found}", t.line, t.col, frozenset(expected))

    def at(self, text: str) -> bool:
        return self.tok.kind in ("SYM", "IDENT") and self.tok.text == text

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail({repr(text)})
        return self.advance()

    def ident(self, what: str = "identifier") -> Token:
        t = self.tok
        if t.kind != "IDENT" or t.text in KEYWORDS or t.text in FUNCTIONS:
            self.fail({what})
        return self.advance()

    def integer(self) -> int:
        neg = False
        if self.at("-"):
            self.advance()
            neg = True
        if self.tok.kind != "INT":
            self.fail({"integer"})
        v = int(self.advance().text)
        return -v if neg else v

    def rational(self) -> Fraction:
        t = self.tok
        num = self.integer()
        if self.at("/"):
            self.advance()
            den_tok = self.tok
            if den_tok.kind != "INT":
                self.fail({"integer"})
            den = int(self.advance().text)
            if den == 0:
                raise ParseError("zero denominator", den_tok.line, den_tok.col)
            value = Fraction(num, den)
            if value.denominator != den:
                raise ParseError(f"fraction {num}/{den} is not reduced", t.line, t.col)
            return value
        return Fraction(num)

    def angle(self) -> Fraction:
        t = self.tok
        v = self.rational()
        if not 0 <= v < 1:
            raise ParseError(f"angle {v} outside [0, 1)", t.line, t.col)
        return v

    # -- grammar -------------------------------------------------------------

    def program(self) -> Program:
        start = self.tok
        points = self.points_decl()
        stmts = []
        while self.tok.kind != "EOF":
            stmts.append(self.statement())
        return Program(points, tuple(stmts), line=start.line, col=start.col)

    def points_decl(self) -> PointsDecl:
        start = self.expect("points")
        names = [self.ident("point label").text]
        while self.at(","):
            self.advance()
            names.append(self.ident("point label").text)
        self.expect(";")
        if len(set(names)) != len(names):
            raise ParseError("duplicate point label", start.line, start.col)
        return PointsDecl(tuple(names), line=start.line, col=start.col)

    def statement(self) -> Statement:
        t = self.tok
        if self.at("let"):
            self.advance()
            name = self.ident().text
            self.expect("=")
            expr = self.expr()
            self.expect(";")
            return Let(name, expr, line=t.line, col=t.col)
        if self.at("emit"):
            self.advance()
            name = self.ident().text
            self.expect(";")
            return Emit(name, line=t.line, col=t.col)
        if self.at("check"):
            return self.check()
        self.fail({"'let'", "'emit'", "'check'"})

    def check(self) -> Check:
        t = self.advance()
        name = self.ident().text
        self.expect(".")
        ft = self.tok
        if ft.kind != "IDENT" or ft.text not in FIELDS:
            self.fail({f"'{f}'" for f in FIELDS})
        fname = self.advance().text
        index: tuple = ()
        if fname in ("h", "delta") and self.at("["):
            self.advance()
            index = (self.integer(),)
            self.expect("]")
        elif fname in ("mu", "nu"):
            self.expect("[")
            pt = self.tok
            if pt.kind != "IDENT":
                self.fail({"point label"})
            point = self.advance().text
            self.expect(",")
            a = self.angle()
            self.expect(",")
            ell = self.integer()
            parts = [point, a, ell]
            if self.at(","):
                self.advance()
                parts.append(self.integer())
            self.expect("]")
            index = tuple(parts)
        if self.tok.kind != "SYM" or self.tok.text not in CMPS:
            self.fail({f"'{c}'" for c in CMPS})
        cmp = self.advance().text
        value = self.check_value(fname, index, cmp)
        self.expect(";")
        return Check(name, fname, index, cmp, value, line=t.line, col=t.col)

    def check_value(self, fname: str, index: tuple, cmp: str):
        t = self.tok
        if fname in ("h", "delta") and not index:
            if cmp not in ("=", "!="):
                raise ParseError("maps can only be compared with = or !=", t.line, t.col)
            return self.int_map()
        if fname == "pairing":
            if cmp not in ("=", "!="):
                raise ParseError("pairing can only be compared with = or !=", t.line, t.col)
            word = self.tok
            if word.kind != "IDENT" or word.text not in ("none", "symmetric", "skew", "unknown"):
                self.fail({"'none'", "'symmetric'", "'skew'", "'unknown'"})
            return self.advance().text
        return self.integer()

    def int_map(self) -> tuple[tuple[int, int], ...]:
        self.expect("{")
        items = []
        if not self.at("}"):
            while True:
                k = self.integer()
                self.expect(":")
                items.append((k, self.integer()))
                if not self.at(","):
                    break
                self.advance()
        self.expect("}")
        keys = [k for k, _ in items]
        if len(set(keys)) != len(keys):
            self.fail(set(), "duplicate key in map")
        return tuple(sorted(items))

    def expr(self) -> Expr:
        t = self.tok
        if t.kind != "IDENT" or t.text in KEYWORDS:
            self.fail({"expression"})
        name = t.text
        if name not in FUNCTIONS:
            self.advance()
            return Ref(name, line=t.line, col=t.col)
        self.advance()
        self.expect("(")
        if name == "line":
            node = self.line_body(t)
        elif name == "mc":
            arg = self.expr()
            chi = None
            if self.at(","):
                self.advance()
                self.expect("chi")
                self.expect("=")
                ct = self.tok
                chi = self.angle()
                if chi == 0:
                    raise ParseError("chi must be in (0, 1)", ct.line, ct.col)
            node = McExpr(arg, chi, line=t.line, col=t.col)
        elif name == "tensor":
            first = self.expr()
            self.expect(",")
            node = TensorExpr(first, self.expr(), line=t.line, col=t.col)
        elif name == "tate":
            k = self.integer()
            self.expect(",")
            node = TateExpr(k, self.expr(), line=t.line, col=t.col)
        else:
            node = UnaryExpr(name, self.expr(), line=t.line, col=t.col)
        self.expect(")")
        return node

    def line_body(self, t: Token) -> LineExpr:
        angles = []
        level = None
        while True:
            if self.at("level"):
                self.advance()
                self.expect("=")
                level = self.integer()
                break
            pt = self.tok
            if pt.kind != "IDENT":
                self.fail({"point label", "'level'"})
            label = self.advance().text
            if any(label == x for x, _ in angles):
                raise ParseError(f"point {label} given twice", pt.line, pt.col)
            self.expect(":")
            angles.append((label, self.angle()))
            if not self.at(","):
                break
            self.advance()
        if not angles:
            raise ParseError("a line needs at least one point", t.line, t.col)
        return LineExpr(tuple(angles), level, line=t.line, col=t.col)


def parse_program(text: str) -> Program:
    """Parse program text; raise :class:`ParseError` on malformed input."""
    return _Parser(text).program()


# ---------------------------------------------------------------------------
# pretty printing
# ---------------------------------------------------------------------------


def _rat(v: Fraction) -> str:
    return str(v)


def pretty_expr(e: Expr) -> str:
    if isinstance(e, Ref):
        return e.name
    if isinstance(e, LineExpr):
        parts = [f"{x}: {_rat(a)}" for x, a in e.angles]
        if e.level is not None:
            parts.append(f"level={e.level}")
        return f"line({', '.join(parts)})"
    if isinstance(e, McExpr):
        chi = "" if e.chi is None else f", chi={_rat(e.chi)}"
        return f"mc({pretty_expr(e.arg)}{chi})"
    if isinstance(e, TensorExpr):
        return f"tensor({pretty_expr(e.line_arg)}, {pretty_expr(e.arg)})"
    if isinstance(e, TateExpr):
        return f"tate({e.k}, {pretty_expr(e.arg)})"
    if isinstance(e, UnaryExpr):
        return f"{e.op}({pretty_expr(e.arg)})"
    raise TypeError(f"not an expression: {e!r}")


def _pretty_value(v) -> str:
    if isinstance(v, tuple):
        return "{" + ", ".join(f"{k}: {x}" for k, x in v) + "}"
    return str(v)


def pretty_statement(s: Statement) -> str:
    if isinstance(s, Let):
        return f"let {s.name} = {pretty_expr(s.expr)};"
    if isinstance(s, Emit):
        return f"emit {s.name};"
    idx = ""
    if s.index:
        idx = "[" + ", ".join(_rat(i) if isinstance(i, Fraction) else str(i) for i in s.index) + "]"
    return f"check {s.name}.{s.field_name}{idx} {s.cmp} {_pretty_value(s.value)};"


def pretty(p: Program) -> str:
    """Normalized source text; comments and layout are not preserved."""
    lines = [f"points {', '.join(p.points.names)};"]
    lines.extend(pretty_statement(s) for s in p.statements)
    return "\n".join(lines) + "\n"

