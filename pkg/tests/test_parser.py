import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from k3hilb import bv_ring as B
from k3hilb.operators import (Bracket, Compose, EOp, FtOp, HilbDivisor, HOp, L0Op, Scale, Sum, Word, Zero,
                              e_delta, ft_delta)
from k3hilb.parser import ParseError, parse_class, parse_divisor, parse_expr, to_text

from ast_gen import MODEL, random_ast


def test_examples(chow):
    assert parse_expr("[e(delta), ft(delta)]", chow) == Bracket(e_delta(chow), ft_delta(chow))
    assert parse_expr("T(2*(c2 - c1))", chow) == HOp()
    assert parse_expr("q(0, c)", chow) == Zero(0)
    assert parse_expr("2*h - L0", chow) == Sum(Scale(Fraction(2), HOp()), Scale(Fraction(-1), L0Op()))
    assert parse_expr("e(v1) . ft(v1)", chow) == Compose(EOp(HilbDivisor((1, 0))), FtOp(HilbDivisor((1, 0))))


def test_precedence(chow):
    # scalar > composition > sum
    x = parse_expr("1/2*h . h + h", chow)
    assert x == Sum(Compose(Scale(Fraction(1, 2), HOp()), HOp()), HOp())


def test_classes(chow):
    assert parse_class("D", chow, 2) == B.diagonal(chow)
    assert parse_class("c1*v1_2", chow, 2) == B.reduce(chow, 2, [("c", 1), ("v1", 2)])
    assert parse_class("2*(c2 - c1)", chow, 2) == parse_class("2*c_2 - 2*c_1", chow, 2)
    assert parse_class("v1", chow, 1) == B.element(chow, {"v1": 1})
    w = parse_expr("q(2, -1, -1, D_1_2*D_2_3)", chow)
    assert w == Word((2, -1, -1), B.small_diagonal(chow))
    assert parse_divisor("2*v1 - 1/2*delta", chow) == HilbDivisor((2, Fraction(-1, 2)))


@pytest.mark.parametrize("text, col", [
    ("h +", 4), ("e(v7)", 3), ("[h, h", 6), ("q(1, x)", 6), ("foo", 1), ("h h", 3), ("", 1),
    ("T(c_1 + v1_1)", 3),
])
def test_errors(chow, text, col):
    with pytest.raises(ParseError) as info:
        parse_expr(text, chow)
    assert f"column {col}" in str(info.value)


# -- random round trip -------------------------------------------------------------------

@settings(max_examples=200)
@given(st.integers(0, 2**32 - 1))
def test_round_trip(seed):
    ast = random_ast(random.Random(seed), 4)
    text = to_text(ast)
    back = parse_expr(text, MODEL)
    assert back == ast
    assert to_text(back) == text
