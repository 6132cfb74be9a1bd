"""Text syntax for operator expressions, with a canonical printer.

Grammar (scalars bind tightest, then composition ``.``, then ``+``/``-``)::

    expr    := term (("+" | "-") term)*
    term    := factor ("." factor)*
    factor  := "-" factor | rational "*" factor | atom
    atom    := "h" | "L0" | "zero(" int ")"
             | "e(" div ")" | "ft(" div ")" | "f(" div ")"
             | "q(" int ("," int)* "," class ")" | "T(" class ")"
             | "[" expr "," expr "]" | "(" expr ")"

``div`` is a combination of ``v1..vr`` and ``delta``.  ``class`` lives on as
many slots as the word has indices (two for ``T``): ``lab_i`` is the basis
class ``lab`` on slot i, ``D_i_j`` a diagonal, ``D`` is ``D_1_2``, ``c1`` and
``u1`` abbreviate ``c_1`` and ``u_1``, and on a single slot labels are bare.
"""

from __future__ import annotations

import re
from fractions import Fraction

from . import bv_ring as B
from .bv_ring import MultiPointClass
from .operators import (Bracket, Compose, EOp, FOp, FtOp, GradingError, HilbDivisor, HOp, L0Op,
                        OperatorExpr, Scale, Sum, TOp, Word, Zero, T_Gamma, word)
from .surface import SurfaceModel, format_rational


class ParseError(ValueError):
    """Syntax or vocabulary error, with the 0-based column of the offending token."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at column {pos + 1}" + (f": {text!r}" if text else ""))


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        if m.group(1):
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        else:
            ch = m.group(3)
            if ch not in "()[],+-*./":
                raise ParseError(f"unexpected character {ch!r}", m.start(3), text)
            out.append(("op", ch, m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Stream:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        self.i = min(self.i + 1, len(self.tokens) - 1)
        return tok

    def accept(self, value: str) -> bool:
        if self.peek()[1] == value and self.peek()[0] != "end":
            self.next()
            return True
        return False

    def expect(self, value: str):
        tok = self.next()
        if tok[1] != value or tok[0] == "end":
            self.error(f"expected {value!r}", tok)
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(message if tok[0] != "end" else message + " (end of input)", tok[2], self.text)

    def integer(self) -> int:
        sign = -1 if self.accept("-") else 1
        tok = self.next()
        if tok[0] != "num":
            self.error("expected an integer", tok)
        return sign * int(tok[1])

    def rational_ahead(self) -> bool:
        return self.peek()[0] == "num"

    def rational(self) -> Fraction:
        tok = self.next()
        num = int(tok[1])
        if self.peek()[1] == "/":
            self.next()
            den = self.next()
            if den[0] != "num" or int(den[1]) == 0:
                self.error("expected a nonzero denominator", den)
            return Fraction(num, int(den[1]))
        return Fraction(num)


# -- classes on S^k -----------------------------------------------------------------

_SLOT = re.compile(r"^(.+)_(\d+)$")
_DIAG = re.compile(r"^D_(\d+)_(\d+)$")
_SHORT = re.compile(r"^([uc])(\d+)$")


def _class_atom(model: SurfaceModel, k: int, name: str, s: _Stream, tok) -> MultiPointClass:
    if name == "D":
        if k != 2:
            s.error("bare D needs exactly two slots; write D_i_j", tok)
        return B.diagonal(model, 2, 1, 2)
    m = _DIAG.match(name)
    if m:
        i, j = int(m.group(1)), int(m.group(2))
        if not (1 <= i <= k and 1 <= j <= k) or i == j:
            s.error(f"diagonal slots out of range 1..{k}", tok)
        return B.diagonal(model, k, i, j)
    if k == 1 and name in model.index:
        return B.decorated(model, 1, 1, name)
    m = _SLOT.match(name)
    if m and m.group(1) in model.index:
        slot = int(m.group(2))
        if not 1 <= slot <= k:
            s.error(f"slot {slot} out of range 1..{k}", tok)
        return B.decorated(model, k, slot, m.group(1))
    m = _SHORT.match(name)
    if m and name not in model.index:
        slot = int(m.group(2))
        if not 1 <= slot <= k:
            s.error(f"slot {slot} out of range 1..{k}", tok)
        return B.decorated(model, k, slot, m.group(1))
    if name in model.index:
        s.error(f"label {name!r} needs a slot suffix on {k} slots", tok)
    s.error(f"unknown basis label {name!r}", tok)


def _class_expr(model: SurfaceModel, k: int, s: _Stream) -> MultiPointClass:
    total = _class_term(model, k, s)
    while s.peek()[1] in "+-" and s.peek()[0] == "op":
        sign = -1 if s.next()[1] == "-" else 1
        total = total + _class_term(model, k, s).scale(sign)
    return total


def _class_term(model, k, s) -> MultiPointClass:
    value = _class_factor(model, k, s)
    while s.accept("*"):
        value = value * _class_factor(model, k, s)
    return value


def _class_factor(model, k, s) -> MultiPointClass:
    if s.accept("-"):
        return -_class_factor(model, k, s)
    tok = s.peek()
    if tok[0] == "num":
        return B.one(model, k).scale(s.rational())
    if tok[0] == "name":
        s.next()
        return _class_atom(model, k, tok[1], s, tok)
    if s.accept("("):
        value = _class_expr(model, k, s)
        s.expect(")")
        return value
    s.error("expected a class", tok)


def parse_class(text: str, model: SurfaceModel, k: int) -> MultiPointClass:
    """A class on S^k in the text syntax used by :func:`bv_ring.to_text`."""
    s = _Stream(text)
    value = _class_expr(model, k, s)
    if s.peek()[0] != "end":
        s.error("unexpected token")
    return value


# -- divisor classes ------------------------------------------------------------------

def _divisor_expr(model: SurfaceModel, s: _Stream) -> HilbDivisor:
    r = model.rank
    names = {f"v{i + 1}": i for i in range(r)}
    names["delta"] = r
    coords = [Fraction(0)] * (r + 1)
    first = True
    while True:
        sign = 1
        if s.peek()[1] in "+-" and s.peek()[0] == "op":
            sign = -1 if s.next()[1] == "-" else 1
        elif not first:
            break
        first = False
        coef = Fraction(1)
        if s.rational_ahead():
            coef = s.rational()
            if not s.accept("*"):
                if coef == 0:
                    continue
                s.error("expected '*' after a coefficient")
        tok = s.next()
        if tok[0] != "name" or tok[1] not in names:
            s.error(f"unknown divisor class {tok[1]!r}" if tok[0] == "name" else "expected a divisor class", tok)
        coords[names[tok[1]]] += sign * coef
    return HilbDivisor(tuple(coords))


def parse_divisor(text: str, model: SurfaceModel) -> HilbDivisor:
    s = _Stream(text)
    value = _divisor_expr(model, s)
    if s.peek()[0] != "end":
        s.error("unexpected token")
    return value


# -- operator expressions --------------------------------------------------------------

def parse_expr(text: str, model: SurfaceModel) -> OperatorExpr:
    """Parse an operator expression; see the module docstring for the grammar."""
    s = _Stream(text)
    if s.peek()[0] == "end":
        s.error("empty expression")
    expr = _expr(model, s)
    if s.peek()[0] != "end":
        s.error("unexpected token")
    return expr


def _expr(model, s) -> OperatorExpr:
    left = _term(model, s)
    while s.peek()[0] == "op" and s.peek()[1] in "+-":
        op = s.peek()
        if op[1] == "+":
            s.next()
        right = _term(model, s)  # a leading '-' is absorbed by the factor
        try:
            left = Sum(left, right)
        except GradingError as err:
            raise ParseError(str(err), op[2], s.text) from None
    return left


def _term(model, s) -> OperatorExpr:
    left = _factor(model, s)
    while s.accept("."):
        left = Compose(left, _factor(model, s))
    return left


def _factor(model, s) -> OperatorExpr:
    if s.accept("-"):
        if s.rational_ahead():
            q = s.rational()
            s.expect("*")
            return Scale(-q, _factor(model, s))
        return Scale(Fraction(-1), _factor(model, s))
    if s.rational_ahead():
        q = s.rational()
        s.expect("*")
        return Scale(q, _factor(model, s))
    return _atom(model, s)


def _atom(model, s) -> OperatorExpr:
    tok = s.next()
    kind, value, _ = tok
    if kind == "op" and value == "(":
        expr = _expr(model, s)
        s.expect(")")
        return expr
    if kind == "op" and value == "[":
        a = _expr(model, s)
        s.expect(",")
        b = _expr(model, s)
        s.expect("]")
        return Bracket(a, b)
    if kind != "name":
        s.error("expected an operator", tok)
    if value == "h":
        return HOp()
    if value == "L0":
        return L0Op()
    if value == "zero":
        s.expect("(")
        d = s.integer()
        s.expect(")")
        return Zero(d)
    if value in ("e", "ft", "f"):
        s.expect("(")
        a = _divisor_expr(model, s)
        s.expect(")")
        return {"e": EOp, "ft": FtOp, "f": FOp}[value](a)
    if value == "q":
        s.expect("(")
        indices = [s.integer()]
        s.expect(",")
        # an integer followed by a comma is another index; the class comes last
        while (s.peek()[0] == "num" and s.peek(1)[1] == ",") or (
                s.peek()[1] == "-" and s.peek(1)[0] == "num" and s.peek(2)[1] == ","):
            indices.append(s.integer())
            s.expect(",")
        klass = _class_expr(model, len(indices), s)
        s.expect(")")
        return word(tuple(indices), klass)
    if value == "T":
        s.expect("(")
        at = s.peek()
        gamma = _class_expr(model, 2, s)
        s.expect(")")
        try:
            return T_Gamma(gamma)
        except ValueError as err:
            raise ParseError(str(err), at[2], s.text) from None
    s.error(f"unknown operator {value!r}", tok)


# -- printing -------------------------------------------------------------------------

def to_text(expr: OperatorExpr) -> str:
    """Canonical text; ``parse_expr(to_text(x)) == x`` for every expression tree."""
    if isinstance(expr, Sum):
        left = to_text(expr.left)
        right = _term_text(expr.right)
        return f"{left} - {right[1:]}" if right.startswith("-") else f"{left} + {right}"
    return _term_text(expr)


def _term_text(expr: OperatorExpr) -> str:
    if isinstance(expr, Compose):
        left = _term_text(expr.left) if not isinstance(expr.left, Sum) else f"({to_text(expr.left)})"
        right = _factor_text(expr.right)
        return f"{left} . {right}"
    if isinstance(expr, Sum):
        return f"({to_text(expr)})"
    return _factor_text(expr)


def _factor_text(expr: OperatorExpr) -> str:
    if isinstance(expr, Scale):
        return f"{format_rational(expr.coeff)}*{_factor_text(expr.expr)}"
    if isinstance(expr, (Sum, Compose)):
        return f"({to_text(expr)})"
    return _atom_text(expr)


def _atom_text(expr: OperatorExpr) -> str:
    if isinstance(expr, HOp):
        return "h"
    if isinstance(expr, L0Op):
        return "L0"
    if isinstance(expr, Zero):
        return f"zero({expr.weight_shift})"
    if isinstance(expr, EOp):
        return f"e({expr.a.text()})"
    if isinstance(expr, FtOp):
        return f"ft({expr.a.text()})"
    if isinstance(expr, FOp):
        return f"f({expr.a.text()})"
    if isinstance(expr, Word):
        return f"q({', '.join(map(str, expr.indices))}, {B.to_text(expr.klass)})"
    if isinstance(expr, TOp):
        return f"T({B.to_text(expr.gamma)})"
    if isinstance(expr, Bracket):
        return f"[{to_text(expr.left)}, {to_text(expr.right)}]"
    raise TypeError(f"cannot print {type(expr).__name__}")
