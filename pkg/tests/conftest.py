import numpy as np
import pytest

from arcfit import corpus


@pytest.fixture(scope="session")
def corpus_points():
    return {name: corpus.load_points(name) for name in corpus.POINT_FILES}


@pytest.fixture(scope="session")
def layer_text():
    return corpus.load_text("layer")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def arc_points(center, radius, a0, a1, n):
    th = np.linspace(a0, a1, n)
    return np.c_[center[0] + radius * np.cos(th), center[1] + radius * np.sin(th)]


ACCEPTANCE = []


@pytest.fixture
def verdict():
    """Record one summary line for an acceptance criterion."""

    def record(name, ok, detail):
        line = f"{name} {'PASS' if ok else 'FAIL'}: {detail}"
        ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
