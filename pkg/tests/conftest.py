import numpy as np
import pytest
from hypothesis import strategies as st

from nsbounds.geometry import ChannelGeometry

SEED = ChannelGeometry(1.0, 0.8, 0.8, 0.8, 3.1)


@st.composite
def geometries(draw, cubic=False):
    L = draw(st.floats(0.1, 10.0))
    a = draw(st.floats(0.05, 0.95)) * L
    if cubic:
        b = c = a
    else:
        b = draw(st.floats(0.05, 1.0)) * a
        c = draw(st.floats(0.05, 1.0)) * b
    vol = draw(st.floats(1e-3, 1.0)) * 8 * a * b * c
    return ChannelGeometry(L, a, b, c, vol)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def seed_geom():
    return SEED


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
