"""Random operator expression trees for round-trip tests."""

from fractions import Fraction

from k3hilb import bv_ring as B
from k3hilb.operators import (Bracket, Compose, EOp, FOp, FtOp, HilbDivisor, HOp, L0Op, Scale, Sum,
                              T_Gamma, Word, Zero)
from k3hilb.surface import SurfaceModel
from k3hilb.verify import random_class, random_homogeneous

MODEL = SurfaceModel.from_gram([[2, 1], [1, -2]], 1)


def _div(rng):
    return HilbDivisor(tuple(Fraction(rng.randint(-2, 2), rng.choice([1, 1, 2])) for _ in range(3)))


def random_ast(rng, depth):
    m = MODEL
    if depth <= 0 or rng.random() < 0.3:
        kind = rng.randrange(8)
        if kind == 0:
            return HOp()
        if kind == 1:
            return L0Op()
        if kind == 2:
            return EOp(_div(rng))
        if kind == 3:
            return FtOp(_div(rng))
        if kind == 4:
            return FOp(_div(rng))
        if kind == 5:
            k = rng.randint(1, 3)
            klass = random_class(m, k, rng) or B.one(m, k)
            idx = tuple(rng.choice([-2, -1, 1, 2, 3]) for _ in range(k))
            return Word(idx, klass)
        if kind == 6:
            return T_Gamma(random_homogeneous(m, 2, rng) or B.diagonal(m))
        return Zero(0)
    kind = rng.randrange(4)
    a = random_ast(rng, depth - 1)
    if kind == 0:
        return Scale(Fraction(rng.choice([-3, -1, 2, 5]), rng.choice([1, 2, 3])), a)
    b = random_ast(rng, depth - 1)
    if kind == 1 and a.weight_shift == b.weight_shift:
        return Sum(a, b)
    if kind == 2:
        return Compose(a, b)
    return Bracket(a, b)
