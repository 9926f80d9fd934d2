import numpy as np
import pytest

from povm_coherence.dynamical import OptimizerConfig
from povm_coherence.scenarios import build_paper_example


@pytest.fixture(scope="session")
def example():
    return build_paper_example()


@pytest.fixture(scope="session")
def povm(example):
    return example.povm


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def cfg():
    return OptimizerConfig()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
