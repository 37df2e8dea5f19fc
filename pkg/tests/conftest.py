import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gridmwt.geom import find_degeneracy

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")


def random_points(n, rng, hi=10**6):
    """n integer points in [0, hi]^2, no duplicates and no three collinear."""
    pts = []
    while len(pts) < n:
        p = (rng.randint(0, hi), rng.randint(0, hi))
        if find_degeneracy(pts + [p]) is None:
            pts.append(p)
    return pts


@st.composite
def general_points(draw, min_n=3, max_n=9, hi=200):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_points(n, random.Random(seed), hi)


@pytest.fixture
def rng():
    return random.Random(12345)


# one line per acceptance criterion, echoed at the end of the session
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
