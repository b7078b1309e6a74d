"""
Shared fixtures: bundled problems and seeded generators
"""
from pathlib import Path

import numpy as np
import pytest

from utils.problem_loader import load_problem

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


@pytest.fixture
def problems_dir() -> Path:
    return PROBLEMS


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def three_signals():
    return load_problem(PROBLEMS / "three_signals_two_mediators.json", rational=True)


@pytest.fixture(scope="session")
def three_signals_float():
    return load_problem(PROBLEMS / "three_signals_two_mediators.json")


@pytest.fixture(scope="session")
def full_revelation():
    return load_problem(PROBLEMS / "full_revelation_two_mediators.json")


@pytest.fixture(scope="session")
def bump():
    return load_problem(PROBLEMS / "bump_one_mediator.json")


@pytest.fixture(scope="session")
def dummy():
    return load_problem(PROBLEMS / "dummy_mediator.json")
