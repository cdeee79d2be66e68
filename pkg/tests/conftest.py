import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lcdist.logconcave import random_log_concave
from lcdist.pmf import make_pmf

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def pmfs(draw, max_size=10, min_offset=-6, max_offset=6, zeros=True):
    size = draw(st.integers(1, max_size))
    w = draw(st.lists(st.floats(0.0, 1.0), min_size=size, max_size=size))
    w = np.asarray(w) + 0.0
    if not zeros:
        w = w + 0.01
    w[0] += 0.01
    w[-1] += 0.01
    return make_pmf(draw(st.integers(min_offset, max_offset)), w, normalize=True)


@st.composite
def log_concave_pmfs(draw, max_size=30, symmetric=None):
    m = draw(st.integers(1, max_size))
    sym = draw(st.booleans()) if symmetric is None else symmetric
    seed = draw(st.integers(0, 2**32 - 1))
    return random_log_concave(m, sym, np.random.default_rng(seed))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one PASS/FAIL line per acceptance criterion, printed after the run

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _CRITERIA[n] = ("PASS" if rep.passed else "FAIL", title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, title = _CRITERIA[n]
        terminalreporter.write_line(f"{status}  criterion {n:>2}: {title}")
