import random
from fractions import Fraction

import pytest

from k3hilb import bv_ring as B
from k3hilb import operators as O
from k3hilb.fock import apply_word, fock_basis, state, to_text, unit_class, vacuum
from k3hilb.operators import (Bracket, ConcreteOperator, GradingError, HOp, HilbDivisor,
                              IsotropicClassError, Scale, Zero, compose, e_delta, e_div, e_general,
                              f_general, ft_delta, ft_div, ft_general, h_op, identity, instantiate, kappa,
                              L0, nakajima, T_Gamma)
from k3hilb.parser import parse_class
from k3hilb.verify import random_homogeneous

V1 = HilbDivisor((1, 0))
DELTA = HilbDivisor((0, 1))


def inst(expr, model, n, slack=0):
    return instantiate(expr, model, n, slack)


def br(a, b, model, n):
    return inst(Bracket(a, b), model, n)


def test_nakajima(chow):
    u = B.one(chow, 1)
    assert inst(nakajima(1, u), chow, 0).apply(vacuum(chow)) == state(chow, (1,), u)
    assert isinstance(nakajima(0, u), Zero)
    assert inst(nakajima(0, u), chow, 2).is_zero()
    for m in (1, 2):
        for la in chow.labels:
            for lb in chow.labels:
                a, b = B.element(chow, {la: 1}), B.element(chow, {lb: 1})
                pair = B.pushforward_forget(a * b, 1).terms.get((), 0)
                for n in range(3):
                    got = br(nakajima(m, a), nakajima(-m, b), chow, n)
                    assert got == identity(chow, n).scale(m * pair)


def test_e_div_on_hilb1(chow):
    op = inst(e_div(chow, [1]), chow, 1)
    labels = op.source_basis.labels()
    img = {labels[j]: to_text(op.apply(op.source_basis.vector(j))) for j in range(len(labels))}
    assert img == {"q1[1]": "q1[v1]", "q1[v1]": "2*q1[c]", "q1[c]": "0"}


def test_e_div_squared_on_unit(chow):
    """Oracle: direct Wick evaluation of -sum q_m q_-m(Delta_* v) with m = 1, 2."""
    e = e_div(chow, [1])
    got = inst(O.Compose(e, e), chow, 2).apply(unit_class(chow, 2))
    dv = B.pushforward_diagonal(chow, B.element(chow, {"v1": 1})).scale(-1)

    def wick_e(x):
        return apply_word((1, -1), dv, x) + apply_word((2, -2), dv, x)

    want = wick_e(wick_e(unit_class(chow, 2)))
    assert got == want
    assert got == state(chow, (1, 1), parse_class("v1_1*v1_2 + 2*c_1", chow, 2))


def test_sl2_triples(chow):
    for n in (1, 2, 3):
        for a in (V1, DELTA, V1 + DELTA):
            e, ft = e_general(chow, a), ft_general(chow, a)
            assert br(h_op(), e, chow, n) == inst(e, chow, n).scale(2)
            assert br(h_op(), ft, chow, n) == inst(ft, chow, n).scale(-2)
            assert br(e, ft, chow, n) == inst(h_op(), chow, n).scale(a.pair(a, chow, n))


def test_e_delta_ft_delta(chow):
    for n in (2, 3):
        assert br(e_delta(chow), ft_delta(chow), chow, n) == inst(h_op(), chow, n).scale(2 - 2 * n)
        assert br(ft_div(chow, [1]), ft_delta(chow), chow, n).is_zero()
        assert br(e_div(chow, [1]), e_delta(chow), chow, n).is_zero()


def test_e_delta_on_unit(chow):
    """e_delta(1) is the boundary divisor delta = -1/2 of the exceptional class.

    Oracle: direct Wick evaluation of -1/6 sum :q_i q_j q_k(Delta_123): on q_1(1)^2/2.
    Only (i, j, k) = (2, -1, -1) and its orderings survive.
    """
    got = inst(e_delta(chow), chow, 2).apply(unit_class(chow, 2))
    small = B.small_diagonal(chow)
    oracle = apply_word((2, -1, -1), small, unit_class(chow, 2)).scale(Fraction(-3, 6))
    assert got == oracle
    assert got == state(chow, (2,), B.one(chow, 1)).scale(Fraction(-1, 2))


def test_h_on_zero_cycles(chow_pts):
    H = inst(h_op(), chow_pts, 2)
    x = state(chow_pts, (1, 1), parse_class("p1_1*p2_2", chow_pts, 2))
    want = state(chow_pts, (1, 1), parse_class("p1_1*c_2 + c_1*p2_2", chow_pts, 2)).scale(2)
    assert H.apply(x) == want


def test_h_in_cohomology_is_degree(coh3):
    for n in (0, 1, 2):
        H = inst(h_op(), coh3, n)
        fb = fock_basis(coh3, n)
        assert H == O.ConcreteOperator(coh3, n, 0, 0, [{j: Fraction(2 * fb.degrees[j] - 2 * n)}
                                                       if 2 * fb.degrees[j] != 2 * n else {}
                                                       for j in range(len(fb))])


def test_L0(chow):
    for n in range(5):
        assert inst(L0(), chow, n) == identity(chow, n).scale(-n)
    for m in (1, 2, -1, -2):
        for lab in ("u", "v1", "c"):
            q = nakajima(m, B.element(chow, {lab: 1}))
            for n in range(max(0, -m), 4):
                assert br(L0(), q, chow, n) == inst(q, chow, n).scale(-m)


def test_kappa_symmetric_part(chow3):
    basis = [HilbDivisor.basis(3, i) for i in range(4)]
    for n in (2,):
        for a in basis:
            for b in basis:
                lhs = inst(kappa(chow3, a, b), chow3, n) + inst(kappa(chow3, b, a), chow3, n)
                assert lhs == inst(h_op(), chow3, n).scale(2 * a.pair(b, chow3, n))


def test_f_general(chow):
    a = V1 + DELTA
    with pytest.raises(IsotropicClassError, match="isotropic class"):
        f_general(chow, a, 2)
    with pytest.raises(IsotropicClassError):
        inst(f_general(chow, a), chow, 2)
    f = f_general(chow, a, 3)
    e = e_general(chow, a)
    assert br(e, f, chow, 3) == inst(h_op(), chow, 3)
    assert br(h_op(), f, chow, 3) == inst(f, chow, 3).scale(-2)
    assert ft_general(chow, HilbDivisor((1, 0))) == ft_div(chow, [1])


def test_degree_shifts(chow):
    for n in (1, 2, 3):
        for a in (V1, DELTA):
            for expr, shift in ((e_general(chow, a), 1), (ft_general(chow, a), -1), (h_op(), 0)):
                op = inst(expr, chow, n)
                assert op.degree_shift == shift
                fb = fock_basis(chow, n)
                for j, col in enumerate(op.cols):
                    for i in col:
                        assert fb.degrees[i] == fb.degrees[j] + shift


def test_truncation_widening(chow_pts):
    exprs = [h_op(), L0(), e_delta(chow_pts), ft_delta(chow_pts), ft_div(chow_pts, [1]),
             nakajima(-1, B.one(chow_pts, 1)), T_Gamma(B.diagonal(chow_pts))]
    for expr in exprs:
        for n in (1, 2):
            assert inst(expr, chow_pts, n) == inst(expr, chow_pts, n, slack=2)


def test_T_normalisation(chow):
    v = B.element(chow, {"v1": 1})
    h_class = parse_class("2*c_2 - 2*c_1", chow, 2)
    assert T_Gamma(h_class) == HOp()
    assert T_Gamma(h_class.scale(3)) == Scale(Fraction(3), HOp())
    assert T_Gamma(B.pushforward_diagonal(chow, v)) == e_div(chow, [1])
    ft_class = (B.pullback_insert(v, 2) + B.pullback_insert(v, 1)).scale(2)
    assert T_Gamma(ft_class) == ft_div(chow, [1])
    with pytest.raises(ValueError):
        inst(T_Gamma(parse_class("c_1 + v1_1", chow, 2)), chow, 2)


def test_T_delta(chow):
    # T(Delta) = -sum q_n q_-n (Delta) / n: each q_m factor contributes -(1/m)(-m) = 1
    T = inst(T_Gamma(B.diagonal(chow)), chow, 2)
    fb = fock_basis(chow, 2)
    for j, (weights, _) in enumerate(fb.states):
        assert T.cols[j] == {j: Fraction(len(weights))}


def test_T_bracket(chow):
    rng = random.Random(0)
    for _ in range(8):
        g, gt = random_homogeneous(chow, 2, rng), random_homogeneous(chow, 2, rng)
        lhs = br(O.TOp(g), O.TOp(gt), chow, 2)
        assert lhs == inst(O.TOp(B.correspondence_bracket(g, gt)), chow, 2)


def test_bracket_properties(chow):
    e = e_div(chow, [1])
    assert br(e, e, chow, 2).is_zero()
    A = inst(e, chow, 1)
    with pytest.raises(GradingError):
        compose(A, inst(e, chow, 2))


def test_normal_order_ties(chow):
    """Equal indices in a normal-ordered word: any tie order gives the same result."""
    schema = O.e_delta_schema(chow)
    for n in (2, 3):
        for vals in schema.assignments(n):
            w, items = schema.word(vals)
            klass = B.MultiPointClass(chow, 3, dict(items))
            ties = [(i, i + 1) for i in range(2) if w[i] == w[i + 1]]
            for st in fock_basis(chow, n).states[:6]:
                x = O.FockVector(chow, {st: 1})
                ref = apply_word(w, klass, x)
                for i, j in ties:
                    sigma = [1, 2, 3]
                    sigma[i], sigma[j] = j + 1, i + 1
                    assert apply_word(w, B.permute(klass, sigma), x) == ref


def test_serialization(chow):
    op = br(e_delta(chow), ft_div(chow, [1]), chow, 2)
    data = op.to_dict()
    back = ConcreteOperator.from_dict(chow, data)
    assert back == op and back.to_json() == op.to_json()
    assert all(isinstance(v, str) for _, _, v in data["triplets"])
    data["source_basis"] = data["source_basis"][::-1]
    with pytest.raises(ValueError):
        ConcreteOperator.from_dict(chow, data)


def test_empty_and_vacuum(chow):
    H = inst(h_op(), chow, 0)
    assert H.shape == (1, 1) and H.is_zero()
    assert inst(ft_div(chow, [1]), chow, 0).apply(vacuum(chow)) == O.FockVector(chow, {})
    with pytest.raises(ValueError):
        inst(h_op(), chow, -1)


def test_weight_shift(chow):
    q = nakajima(2, B.one(chow, 1))
    op = inst(q, chow, 1)
    assert op.weight_shift == 2 and op.target_weight == 3
    assert inst(nakajima(-2, B.one(chow, 1)), chow, 1).shape == (0, 3)
