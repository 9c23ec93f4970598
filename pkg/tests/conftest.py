import logging

import pytest

from src.harness.config import ExperimentConfig
from src.core.schedule import StepSchedule
from src.noise.spec import NoiseSpec
from src.problems.registry import ProblemRegistry
from src.problems.sbo import make_sbo
from src.problems.sgd_pr import make_sgd_pr


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run long acceptance runs")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long Monte-Carlo acceptance run (needs --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def sgd_pr():
    """Five-dimensional SGD-PR instance."""
    return make_sgd_pr(5)


@pytest.fixture(scope="session")
def sbo():
    return make_sbo()


@pytest.fixture(autouse=True)
def reset_problem_registry():
    """Keep plug-in registrations from leaking between tests."""
    yield
    ProblemRegistry.reset_to_defaults()


@pytest.fixture(autouse=True)
def reset_lab_logging():
    """Drop handlers installed by configure_logging so they do not outlive a captured stream."""
    yield
    root = logging.getLogger("ttsa")
    for handler in list(root.handlers):
        root.removeHandler(handler)
    root.setLevel(logging.NOTSET)


@pytest.fixture
def make_config():
    """Factory for small SGD-PR experiment configs."""
    def factory(**overrides):
        params = dict(
            problem="sgd-pr",
            noise=NoiseSpec.state(0.0, 0.02),
            schedule=StepSchedule(alpha=16.0, beta=8.0, a=2.0 / 3.0, b=1.0, k0=200.0),
            iterations=200,
            replicates=4,
            master_seed=7,
            problem_params={"dim": 5},
        )
        params.update(overrides)
        return ExperimentConfig(**params)

    return factory
