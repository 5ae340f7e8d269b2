import numpy as np
import pytest

import banks


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def lazy():
    return banks.lazy_bank()


@pytest.fixture
def haar():
    return banks.haar_bank()


@pytest.fixture
def k3():
    return banks.k3_bank()


def pytest_terminal_summary(terminalreporter):
    if banks.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in banks.ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
