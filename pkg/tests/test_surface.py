from fractions import Fraction

import pytest

from k3hilb.surface import Mode, QuadraticSpace, SurfaceModel, format_rational, parse_rational


def test_rational_round_trip():
    for text in ["0", "3", "-2", "3/4", "-7/12"]:
        assert format_rational(parse_rational(text)) == text
    assert parse_rational("6/4") == Fraction(3, 2)
    with pytest.raises(ValueError):
        parse_rational("1.5.2")


def test_quadratic_space():
    q = QuadraticSpace.from_gram([[2, 1], [1, -2]])
    assert q.labels == ("v1", "v2")
    assert q.pairing([1, 0], [0, 1]) == 1
    assert q.signature() == (1, 1, 0)
    inv = q.inverse
    assert [[sum(q.gram[i][k] * inv[k][j] for k in range(2)) for j in range(2)] for i in range(2)] == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        QuadraticSpace.from_gram([[1, 2], [0, 1]])


def test_chow_labels_and_degrees(chow_pts):
    assert chow_pts.labels == ("u", "v1", "c", "p1", "p2")
    assert chow_pts.degree == (0, 1, 2, 2, 2)
    assert chow_pts.integral == (0, 0, 1, 1, 1)


def test_cohomology_model(coh):
    assert coh.size == 24
    assert coh.transcendental_rank == 21
    assert coh.labels[0] == "u" and coh.labels[-1] == "c"


def test_config_round_trip(tmp_path):
    m = SurfaceModel.from_gram([[2, 1, 0], [1, -2, 0], [0, 0, -2]], 1, Mode.COHOMOLOGY)
    path = tmp_path / "model.json"
    import json
    path.write_text(json.dumps(m.to_config()))
    m2 = SurfaceModel.load(path)
    assert m2 == m and m2.digest() == m.digest()
    assert m.with_mode("chow").digest() != m.digest()


def test_invalid_models():
    with pytest.raises(ValueError):
        SurfaceModel.from_gram([[0]], 0, Mode.COHOMOLOGY)
    with pytest.raises(ValueError):
        SurfaceModel.from_gram([[2]], -1)
    with pytest.raises(ValueError):
        SurfaceModel.from_config({"rank": 2, "gram": [[2]], "points": 0, "mode": "chow"})
