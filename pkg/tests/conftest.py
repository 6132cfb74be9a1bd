import os

import pytest
from hypothesis import HealthCheck, settings

from k3hilb.surface import Mode, SurfaceModel

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", parent=settings.get_profile("default"), max_examples=200)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GRAM3 = [[2, 1, 0], [1, -2, 0], [0, 0, -2]]


@pytest.fixture(scope="session")
def chow():
    """Gram <2>, no point symbols."""
    return SurfaceModel.from_gram([[2]], 0, Mode.CHOW)


@pytest.fixture(scope="session")
def chow_pts():
    """Gram <2> with two formal points."""
    return SurfaceModel.from_gram([[2]], 2, Mode.CHOW)


@pytest.fixture(scope="session")
def coh():
    """Gram <2> in cohomology mode."""
    return SurfaceModel.from_gram([[2]], 0, Mode.COHOMOLOGY)


@pytest.fixture(scope="session")
def coh3():
    return SurfaceModel.from_gram(GRAM3, 0, Mode.COHOMOLOGY)


@pytest.fixture(scope="session")
def chow3():
    return SurfaceModel.from_gram(GRAM3, 0, Mode.CHOW)


# -- acceptance summary ------------------------------------------------------------

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""

    def record(number: int, title: str, ok: bool, detail: str = ""):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        _ACCEPTANCE[number] = line
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
