"""Recursive-descent parser for the function DSL.

Grammar::

    expr    := term (('+'|'-') term)*
    term    := factor ('*' factor)*
    factor  := base ('^' INT)?
    base    := 'x' | 'e' | NUMBER | elemlit | 'sup(' expr ',' expr ')'
             | 'inf(' expr ',' expr ')' | 'abs(' expr ')'
             | IDENT '(' expr ')' | '(' expr ')'
    elemlit := '[' NUMBER (',' NUMBER)* ']'

A NUMBER may carry a leading '-' where a base is expected, so negative
literals print and reparse without a unary-minus node.
"""
from __future__ import annotations

import re
from typing import NamedTuple

from ..algebra import ModelSpec, element
from ..errors import ExprSyntaxError, LatcalcError, UnknownIdentifier
from . import nodes as n

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*^(),\[\]]))"
)


class Token(NamedTuple):
    kind: str  # num | ident | op | end
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            tokens.append(Token("end", "", pos))
            return tokens
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, model: ModelSpec | None):
        self.toks = tokenize(text)
        self.i = 0
        self.model = model

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text or self.tok.kind == "end":
            raise ExprSyntaxError(f"expected {text!r}", self.tok.pos)
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self):
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.advance().text
            rhs = self.term()
            node = n.Add(node, rhs) if op == "+" else n.Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.tok.kind == "op" and self.tok.text == "*":
            self.advance()
            node = n.Mul(node, self.factor())
        return node

    def factor(self):
        node = self.base()
        if self.tok.text == "^" and self.tok.kind == "op":
            self.advance()
            t = self.tok
            if t.kind != "num" or not t.text.isdigit() or int(t.text) < 1:
                raise ExprSyntaxError("expected a positive integer exponent", t.pos)
            self.advance()
            node = n.Pow(node, int(t.text))
        return node

    def number(self) -> float:
        neg = False
        if self.tok.kind == "op" and self.tok.text == "-":
            neg = True
            self.advance()
        t = self.tok
        if t.kind != "num":
            raise ExprSyntaxError("expected a number", t.pos)
        self.advance()
        v = float(t.text)
        return -v if neg else v

    def base(self):
        t = self.tok
        if t.kind == "num" or (t.kind == "op" and t.text == "-"):
            return n.ScalarLit(self.number())
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "op" and t.text == "[":
            return self.elemlit()
        if t.kind == "ident":
            self.advance()
            if t.text == "x":
                return n.Var()
            if t.text == "e":
                return n.Unit()
            if self.tok.text != "(":
                raise UnknownIdentifier(f"unknown identifier {t.text!r}", t.pos)
            self.advance()
            if t.text in ("sup", "inf"):
                left = self.expr()
                self.expect(",")
                right = self.expr()
                self.expect(")")
                return n.Sup(left, right) if t.text == "sup" else n.Inf(left, right)
            if t.text == "abs":
                node = n.Abs(self.expr())
            elif n.is_map_name(t.text):
                node = n.MapScalar(t.text, self.expr())
            else:
                raise UnknownIdentifier(f"unknown function {t.text!r}", t.pos)
            self.expect(")")
            return node
        raise ExprSyntaxError("expected an operand" if t.kind == "end" else f"unexpected {t.text!r}", t.pos)

    def elemlit(self):
        start = self.expect("[").pos
        vals = [self.number()]
        while self.tok.text == ",":
            self.advance()
            vals.append(self.number())
        self.expect("]")
        if self.model is None:
            raise ExprSyntaxError("element literal needs a model", start)
        try:
            return n.ConstElem(element(self.model, vals))
        except (ValueError, LatcalcError) as exc:
            raise ExprSyntaxError(str(exc), start) from None


def parse(text: str, model: ModelSpec | None = None):
    """Parse DSL text into an expression tree.

    ``model`` is required only when the text contains element literals.
    """
    return _Parser(text, model).parse()
