import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from exderiv.ede_types import KernelKind
from exderiv.exceptions import InvalidArgumentException
from exderiv.kernelization import default_bandwidth, default_threshold, kernel_eval, kernel_profile, weight_matrix
from exderiv.models.data_set import DataSet


@pytest.mark.parametrize("kernel", list(KernelKind))
def test_kernels_peak_at_origin(kernel):
    assert kernel_eval(kernel, np.zeros(3)) == 1.0
    assert kernel_eval(kernel, np.array([0.3, 0.1])) < 1.0


def test_finite_support_kernels_vanish_outside_unit_ball():
    outside = np.array([0.8, 0.8])
    assert kernel_eval(KernelKind.epanechnikov, outside) == 0.0
    assert kernel_eval(KernelKind.biweight, outside) == 0.0
    assert kernel_eval(KernelKind.gaussian, outside) > 0.0


def test_kernel_profile_values():
    squared = np.array([0.0, 0.25, 1.0])
    assert_allclose(kernel_profile(KernelKind.gaussian, squared), np.exp(-squared / 2))
    assert_allclose(kernel_profile(KernelKind.epanechnikov, squared), [1.0, 0.75, 0.0])
    assert_allclose(kernel_profile(KernelKind.biweight, squared), [1.0, 0.5625, 0.0])


def test_weight_matrix_matches_kernel_eval():
    X = np.array([[0.0, 0.0], [0.5, 0.0], [3.0, 3.0]])
    data = DataSet(X, np.zeros(3))
    weights = weight_matrix(data, np.zeros(2), 1.0, KernelKind.biweight)
    assert_allclose(weights.w, [1.0, 0.5625, 0.0])
    assert weights.effective_n == pytest.approx(1.5625)
    assert weights.h == 1.0


def test_weight_matrix_scales_by_bandwidth():
    data = DataSet(np.array([[1.0], [2.0]]), np.zeros(2))
    weights = weight_matrix(data, np.zeros(1), 2.0, KernelKind.gaussian)
    assert_allclose(weights.w, [math.exp(-0.125), math.exp(-0.5)])


def test_weight_matrix_rejects_bad_arguments():
    data = DataSet(np.zeros((2, 2)), np.zeros(2))
    with pytest.raises(InvalidArgumentException):
        weight_matrix(data, np.zeros(2), 0.0, KernelKind.gaussian)
    with pytest.raises(InvalidArgumentException):
        weight_matrix(data, np.zeros(3), 1.0, KernelKind.gaussian)


def test_default_bandwidth():
    assert default_bandwidth(256, 4, 2.0) == pytest.approx(2.0 * 256 ** (-1 / 8))
    assert default_bandwidth(1000, 0, 1.0) == pytest.approx(1000 ** (-0.25))
    with pytest.raises(InvalidArgumentException):
        default_bandwidth(100, 2, 0.0)


def test_default_threshold():
    assert default_threshold(400, 8) == pytest.approx(math.sqrt(math.log(8) / 400))
    assert default_threshold(400, 8, K=0.5) == pytest.approx(0.5 * math.sqrt(math.log(8) / 400))


@pytest.mark.parametrize("kernel", list(KernelKind))
def test_kernels_are_radially_symmetric(kernel):
    rng = np.random.default_rng(7)
    for _ in range(20):
        u = 0.4 * rng.standard_normal(4)
        Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
        assert kernel_eval(kernel, Q @ u) == pytest.approx(kernel_eval(kernel, u), rel=1e-12, abs=1e-15)
