"""Shared fixtures."""

import numpy as np
import pytest

from exderiv.models.data_set import DataSet
from exderiv.simdata import generate_linear, generate_nonlinear


def make_rank_deficient(n: int, p: int, rank: int, seed: int, noise: float = 0.0) -> DataSet:
    """Noiseless linear response on predictors confined to a rank dimensional subspace."""
    rng = np.random.default_rng(seed)
    basis = rng.standard_normal((p, rank))
    X = rng.standard_normal((n, rank)) @ basis.T
    gradient = basis @ rng.standard_normal(rank)
    Y = 1.5 + X @ gradient + noise * rng.standard_normal(n)
    return DataSet(X, Y)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def linear_instance():
    return generate_linear(p=8, n=400, sigma_nu2=0.01, sigma2=0.25, seed=11)


@pytest.fixture
def nonlinear_instance():
    return generate_nonlinear(p=4, n=600, sigma_nu2=0.01, sigma2=0.25, seed=5)


@pytest.fixture
def small_data(rng):
    X = rng.standard_normal((120, 4))
    Y = 0.5 + X @ np.array([1.0, -2.0, 0.0, 0.5]) + 0.1 * rng.standard_normal(120)
    return DataSet(X, Y)


@pytest.fixture
def rank_deficient():
    return make_rank_deficient
