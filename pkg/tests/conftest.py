import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(autouse=True)
def _default_tolerance(monkeypatch):
    # tests must not inherit a tolerance override from the calling shell
    monkeypatch.delenv("FRAMEFORGE_TOL", raising=False)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE.items()):
            terminalreporter.write_line(line)
