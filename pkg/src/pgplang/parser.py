"""Parser for the PGPLang concrete syntax.

Accepts both juxtaposed application (``Beta 0.3 0.25``) and the
parenthesized form (``Uniform(-1.7, -1.3)``).  Family names are matched
case-insensitively; the printer always emits the juxtaposed capitalized
form.  ``#`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .ast import Add, Arg, Dist, DistFamily, Expr, Let, Lit, Var


class ParseError(Exception):
    """Syntax or scoping error, with 1-based source position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num' | 'word' | 'punct' | 'eof'
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<num>[+-]?(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[(),])
    """,
    re.VERBOSE,
)

_FAMILIES = {f.value.lower(): f for f in DistFamily}
_KEYWORDS = {"let", "in", "add"}


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, tok, line, m.start() - line_start + 1))
        line += tok.count("\n")
        if "\n" in tok:
            line_start = m.start() + tok.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, tok.line, tok.col)

    # --- grammar -----------------------------------------------------------

    def program(self) -> Expr:
        e = self.expr(depth=0)
        if self.peek().kind != "eof":
            raise self.error(f"trailing input starting at {self.peek().text!r}")
        return e

    def expr(self, depth: int) -> Expr:
        tok = self.peek()
        if tok.kind == "word" and tok.text.lower() == "let":
            self.advance()
            bound = self.value(depth)
            kw = self.advance()
            if not (kw.kind == "word" and kw.text.lower() == "in"):
                raise self.error(f"expected 'in' after let-bound value, got {kw.text!r}", kw)
            body = self.expr(depth + 1)
            return Let(bound, body)
        return self.value_or_arg(depth)

    def value_or_arg(self, depth: int) -> Expr:
        tok = self.peek()
        if tok.kind == "word" and (tok.text.lower() in _FAMILIES or tok.text.lower() == "add"):
            return self.value(depth)
        return self.arg(depth)

    def value(self, depth: int) -> Expr:
        tok = self.advance()
        if tok.kind == "num":
            return self._lit(tok)
        if tok.kind != "word":
            raise self.error(f"expected a value form, got {tok.text!r}", tok)
        name = tok.text.lower()
        if name in _FAMILIES:
            a1, a2 = self.arg_pair(depth)
            return Dist(_FAMILIES[name], a1, a2)
        if name == "add":
            a1, a2 = self.arg_pair(depth)
            return Add(a1, a2)
        if name == "let":
            raise self.error("let is not allowed here: bound expressions must be value forms", tok)
        raise self.error(f"unknown operator {tok.text!r}", tok)

    def arg_pair(self, depth: int) -> tuple[Arg, Arg]:
        if self.peek().text == "(":
            self.advance()
            a1 = self.arg(depth)
            if self.peek().text == ",":
                self.advance()
            a2 = self.arg(depth)
            closing = self.advance()
            if closing.text != ")":
                raise self.error(f"expected ')', got {closing.text!r}", closing)
            return a1, a2
        return self.arg(depth), self.arg(depth)

    def arg(self, depth: int) -> Arg:
        tok = self.advance()
        if tok.kind == "num":
            return self._lit(tok)
        if tok.kind == "word":
            name = tok.text.lower()
            if name in _FAMILIES or name in _KEYWORDS:
                raise self.error(
                    f"nested expression {tok.text!r} is not allowed: arguments must be variables or literals",
                    tok,
                )
            m = re.fullmatch(r"v(\d+)", tok.text)
            if m:
                level = int(m.group(1))
                if level < 1 or level > depth:
                    raise self.error(f"unbound variable v{level}: only {depth} binder(s) in scope", tok)
                return Var(level)
        raise self.error(f"expected a variable or literal, got {tok.text!r}", tok)

    def _lit(self, tok: _Token) -> Lit:
        try:
            return Lit(float(tok.text))
        except (ValueError, OverflowError):
            raise self.error(f"bad literal {tok.text!r}", tok) from None


def parse_program(text: str) -> Expr:
    """Parse a complete program; raises :class:`ParseError` with position info."""
    return _Parser(_tokenize(text)).program()
