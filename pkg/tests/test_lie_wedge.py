import random
from fractions import Fraction

import pytest

from k3hilb.lie_wedge import (WedgeElement, ambient, parse_wedge, rho, so_action, wedge_basis,
                              wedge_bracket)
from k3hilb.operators import Bracket, e_delta, h_op, instantiate
from k3hilb.surface import SurfaceModel


def rand_elem(space, rng, terms=3):
    k = space.rank
    out = []
    for _ in range(terms):
        i, j = rng.sample(range(k), 2)
        out.append(((i, j), Fraction(rng.randint(-3, 3), rng.randint(1, 2))))
    return WedgeElement(space, tuple(out))


@pytest.fixture(scope="module")
def space3():
    return ambient(SurfaceModel.from_gram([[2, 1, 0], [1, -2, 0], [0, 0, -2]]), 3)


def test_ambient(chow):
    W = ambient(chow, 2)
    assert W.labels == ("v1", "delta", "e", "f")
    assert W.gram[1][1] == -2 and W.gram[2][3] == 1 and W.gram[2][2] == 0
    assert len(wedge_basis(W)) == (1 + 3) * (1 + 2) // 2


def test_bracket_examples(chow):
    W = ambient(chow, 2)
    e, f, v = {2: 1}, {3: 1}, {0: 1}
    ea = WedgeElement.wedge(W, e, v)
    eb = WedgeElement.wedge(W, e, {1: 1})
    assert not wedge_bracket(ea, eb)
    fa = WedgeElement.wedge(W, f, v)
    ef = WedgeElement.wedge(W, e, f)
    # [e^a, f^a] = -(a, a) e^f, with (v, v) = 2
    assert wedge_bracket(ea, fa) == ef.scale(-2)
    assert wedge_bracket(ef.scale(2), ea) == ea.scale(2)
    assert wedge_bracket(ef.scale(2), fa) == fa.scale(-2)


def test_jacobi(space3):
    rng = random.Random(0)
    for _ in range(50):
        x, y, z = (rand_elem(space3, rng) for _ in range(3))
        total = wedge_bracket(x, wedge_bracket(y, z)) + wedge_bracket(y, wedge_bracket(z, x)) \
            + wedge_bracket(z, wedge_bracket(x, y))
        assert not total


def test_so_action(space3):
    W = space3
    e, f = W.labels.index("e"), W.labels.index("f")
    ef = WedgeElement.basis_wedge(W, e, f)
    vec = [Fraction(int(i == e)) for i in range(W.rank)]
    assert so_action(ef, vec) == vec
    rng = random.Random(1)
    for _ in range(30):
        x, y = rand_elem(W, rng), rand_elem(W, rng)
        v = [Fraction(rng.randint(-3, 3)) for _ in range(W.rank)]
        w = [Fraction(rng.randint(-3, 3)) for _ in range(W.rank)]
        assert W.pairing(so_action(x, v), w) + W.pairing(v, so_action(x, w)) == 0
        lhs = so_action(wedge_bracket(x, y), v)
        rhs = [a - b for a, b in zip(so_action(x, so_action(y, v)), so_action(y, so_action(x, v)))]
        assert lhs == rhs


def test_rho_examples(chow):
    assert rho(parse_wedge("e^delta", chow, 2), chow, 2) == e_delta(chow)
    assert rho(parse_wedge("2*e^f", chow, 2), chow, 2) == h_op()


def test_rho_homomorphism(chow):
    n = 2
    W = ambient(chow, n)
    rng = random.Random(2)
    for _ in range(20):
        x, y = rand_elem(W, rng, 2), rand_elem(W, rng, 2)
        lhs = instantiate(rho(wedge_bracket(x, y), chow, n), chow, n)
        rhs = instantiate(Bracket(rho(x, chow, n), rho(y, chow, n)), chow, n)
        assert lhs == rhs


def test_rho_cross_term(chow):
    """[e^a, f^b] = -a^b - (a, b) e^f holds after rho at matrix level."""
    n = 2
    for a in ("v1", "delta"):
        for b in ("v1", "delta"):
            x = parse_wedge(f"e^{a}", chow, n)
            y = parse_wedge(f"f^{b}", chow, n)
            lhs = instantiate(Bracket(rho(x, chow, n), rho(y, chow, n)), chow, n)
            want = wedge_bracket(x, y)
            assert lhs == instantiate(rho(want, chow, n), chow, n)


def test_parse_wedge(chow):
    W = ambient(chow, 2)
    x = parse_wedge("e^delta - 2*v1^f + 1/2*e^f", chow, 2)
    want = WedgeElement(W, (((2, 1), 1), ((0, 3), -2), ((2, 3), Fraction(1, 2))))
    assert x == want
    assert parse_wedge(x.text(), chow, 2) == x
    assert parse_wedge("(v1 + delta)^e", chow, 2) == parse_wedge("v1^e + delta^e", chow, 2)
    with pytest.raises(ValueError):
        parse_wedge("e^g", chow, 2)
    with pytest.raises(ValueError):
        rho(x, chow, 3)


def test_mismatched_spaces(chow):
    with pytest.raises(ValueError):
        wedge_bracket(parse_wedge("e^f", chow, 2), parse_wedge("e^f", chow, 3))
