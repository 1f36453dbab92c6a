"""Shared fixtures for the rule feature graph test suite."""

import os
from pathlib import Path

import numpy as np
import pytest

from src.dataset import ColumnKind, Dataset, load_csv

FIXTURES_DIR = Path(__file__).parent / "fixtures"


def pytest_configure(config):
    config.addinivalue_line("markers", "pima: needs the public Pima CSV (set RULEGRAPH_PIMA_CSV)")


def pytest_collection_modifyitems(config, items):
    pima_csv = os.getenv("RULEGRAPH_PIMA_CSV")
    skip_pima = pytest.mark.skip(reason="set RULEGRAPH_PIMA_CSV to the Pima CSV path to run")
    for item in items:
        if "pima" in item.keywords and not (pima_csv and Path(pima_csv).exists()):
            item.add_marker(skip_pima)


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES_DIR


@pytest.fixture
def toy_csv() -> Path:
    return FIXTURES_DIR / "toy.csv"


@pytest.fixture
def toy_rules_path() -> Path:
    return FIXTURES_DIR / "toy.rules"


@pytest.fixture
def toy_ds() -> Dataset:
    """f = [0.2, 0.9, 0.5, 0.7], g = [1, 1, 1, 1], y = [1, 0, 1, 0]."""
    return Dataset(
        ["f", "g"],
        [ColumnKind.NUMERIC, ColumnKind.NUMERIC],
        [np.array([0.2, 0.9, 0.5, 0.7]), np.array([1.0, 1.0, 1.0, 1.0])],
        ["1", "0", "1", "0"],
        name="toy",
    )


@pytest.fixture
def toy_csv_ds(toy_csv) -> Dataset:
    return load_csv(toy_csv, target="y")


@pytest.fixture
def separable_ds() -> Dataset:
    """One informative feature (x) and one noise feature (z), 40 rows."""
    rng = np.random.default_rng(7)
    x = np.linspace(0.0, 1.0, 40)
    z = rng.random(40)
    y = np.where(x > 0.5, "b", "a")
    return Dataset(["x", "z"], ["numeric", "numeric"], [x, z], y, name="separable")


@pytest.fixture
def xor_ds() -> Dataset:
    """XOR of two binary features, each corner repeated 5 times."""
    a = np.repeat([0.0, 0.0, 1.0, 1.0], 5)
    b = np.repeat([0.0, 1.0, 0.0, 1.0], 5)
    y = np.where((a > 0.5) != (b > 0.5), "1", "0")
    return Dataset(["a", "b"], ["numeric", "numeric"], [a, b], y, name="xor")


@pytest.fixture
def pima_ds() -> Dataset:
    path = os.getenv("RULEGRAPH_PIMA_CSV")
    if not path or not Path(path).exists():
        pytest.skip("set RULEGRAPH_PIMA_CSV to the Pima CSV path to run")
    return load_csv(path, target=os.getenv("RULEGRAPH_PIMA_TARGET", "class"))


CONFIG_ENV_VARS = (
    "RULEGRAPH_SEED",
    "RULEGRAPH_JOBS",
    "RULEGRAPH_LOG_DIRECTORY",
    "RULEGRAPH_LOG_LEVEL",
    "RULEGRAPH_DEBUG",
    "RULEGRAPH_OUTER_FOLDS",
    "RULEGRAPH_INNER_FOLDS",
    "RULEGRAPH_PERMUTATION_REPEATS",
    "RULEGRAPH_STRICT_MISSING",
    "RULEGRAPH_FEATURE_METRIC",
    "RULEGRAPH_RULE_METRIC",
)


@pytest.fixture
def clean_env(monkeypatch):
    """Unset configuration variables; values loaded from .env files are undone too."""
    for name in CONFIG_ENV_VARS:
        monkeypatch.delenv(name, raising=False)
    return monkeypatch
