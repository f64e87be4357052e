import numpy as np
import pytest

from multiratio import build_population, load_wheat34, synthetic_population

# Published summary values for the 34-farm wheat population.
WHEAT = dict(
    N=34, Ybar=199.4, P=[0.6765, 0.7353], S2y=22564.6, S2phi=[0.225490, 0.200535],
    rho_pb=[0.599, 0.559], rho_phi=0.725,
)


@pytest.fixture
def tiny():
    """y = 1..4 with a single attribute (0, 1, 0, 1)."""
    return build_population([1, 2, 3, 4], [0, 1, 0, 1])


@pytest.fixture
def wheat():
    return load_wheat34().moments


@pytest.fixture
def pop12():
    return synthetic_population(12, k=2, seed=3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# -- acceptance summary ----------------------------------------------------

_acceptance = {}


def pytest_runtest_logreport(report):
    mark = getattr(report, "acceptance", None)
    if mark is None:
        return
    ok = report.passed if report.when == "call" else not report.failed
    prev = _acceptance.get(mark, True)
    _acceptance[mark] = prev and ok


@pytest.hookimpl(wrapper=True)
def pytest_runtest_makereport(item, call):
    report = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        report.acceptance = tuple(marker.args)
    return report


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (tag, label), ok in sorted(_acceptance.items(), key=lambda kv: int(kv[0][0][3:])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {tag:<5} {label}")
