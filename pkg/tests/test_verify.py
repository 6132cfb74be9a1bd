import pytest

from k3hilb import operators as O
from k3hilb import verify as V
from k3hilb.surface import SurfaceModel


def test_relations_small(chow):
    for n in (1, 2):
        rep = V.relation_suite(chow, n)
        assert rep.passed, rep.to_table()
    with pytest.raises(ValueError):
        V.relation_suite(chow, 0)


def test_relations_rank2():
    m = SurfaceModel.from_gram([[2, 1], [1, -2]])
    rep = V.relation_suite(m, 2)
    assert rep.passed, rep.to_table()


def test_grading(chow, coh3):
    for model, n in ((chow, 2), (coh3, 2), (chow, 0)):
        rep = V.grading_suite(model, n)
        assert rep.passed, rep.to_table()
    rep = V.grading_suite(coh3, 2)
    assert rep.values["h_diagonal"] == ["-4", "-2", "0", "2", "4"]


def test_injectivity(chow):
    rep = V.injectivity_rank(chow, 1)
    assert rep.passed
    assert rep.values["ranks"] == {"0": [1, 1], "1": [1, 1], "2": [1, 1]}
    three = SurfaceModel.from_gram([[2, 1, 0], [1, -2, 0], [0, 0, -2]])
    assert V.injectivity_rank(three, 1).values["ranks"]["1"] == [3, 3]
    with pytest.raises(ValueError):
        V.injectivity_rank(SurfaceModel.from_gram([[0]]), 2)


def test_spectrum(chow_pts, chow):
    rep = V.zero_cycle_spectrum(chow_pts, 2)
    assert rep.passed and rep.values["spectrum"] == {"0": 1, "2": 2, "4": 1}
    with pytest.raises(ValueError):
        V.zero_cycle_spectrum(chow, 2)


def test_closure_degenerate():
    rank0 = SurfaceModel.from_gram([])
    rep = V.lie_closure_dimension(rank0, 2)
    assert rep.passed and rep.values["dimension"] == 3


def test_closure_stabilises(chow):
    rep = V.lie_closure_dimension(chow, 2)
    dims = rep.values["dimensions_by_depth"]
    assert dims[-1] == dims[-2] == 6


def test_randomized_suites(chow):
    assert V.lemma_tt_suite(chow, count=10, seed=3, max_weight=3).passed
    assert V.t_bracket_suite(chow, ns=(2,), count=5, seed=3).passed


def test_reports_deterministic(chow):
    a = V.lemma_tt_suite(chow, count=5, seed=7, max_weight=3).to_json()
    b = V.lemma_tt_suite(chow, count=5, seed=7, max_weight=3).to_json()
    assert a == b
    assert V.relation_suite(chow, 2).to_table() == V.relation_suite(chow, 2).to_table()


def test_failure_carries_witness(chow):
    rep = V.Report("demo", chow, 2)
    lhs = O.instantiate(O.h_op(), chow, 2)
    rhs = O.instantiate(O.L0(), chow, 2)
    assert not V.check_equal(rep, "h = L0", {}, lhs, rhs)
    (fail,) = rep.failures
    assert set(fail.detail) == {"input", "lhs", "rhs"}
    assert fail.detail["lhs"] != fail.detail["rhs"]
    table = rep.to_table()
    assert "FAIL h = L0" in table and "input:" in table
    assert rep.to_dict()["status"] == "FAIL"


def test_quartic_literal_form_is_inconsistent(chow):
    """With h-coefficient 1 the quartic kappa identity fails; the consistent coefficient is 2."""
    n = 2
    A = dict(V.divisor_basis(chow))
    K = {(a, b): O.kappa(chow, A[a], A[b]) for a in A for b in A}

    def pair(x, y):
        return A[x].pair(A[y], chow, n)

    lhs = O.instantiate(O.Bracket(K["v1", "delta"], K["v1", "delta"]), chow, n)
    assert lhs.is_zero()
    good = V.quartic_rhs(K, O.h_op(), pair, "v1", "delta", "v1", "delta", h_factor=2)
    bad = V.quartic_rhs(K, O.h_op(), pair, "v1", "delta", "v1", "delta", h_factor=1)
    assert O.instantiate(good, chow, n).is_zero()
    assert not O.instantiate(bad, chow, n).is_zero()
