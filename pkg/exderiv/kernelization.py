"""Kernels, localization weights and bandwidth defaults."""

import logging
import math

import numpy as np

from exderiv.ede_types import KernelKind
from exderiv.exceptions import InvalidArgumentException
from exderiv.models.data_set import DataSet
from exderiv.models.local_weights import LocalWeights

logger = logging.getLogger(__name__)


def kernel_profile(kernel: KernelKind, squared_norms: np.ndarray) -> np.ndarray:
    """
    Evaluate a radial kernel from squared norms.

    Normalization constants are omitted, they cancel in every estimator.

    Args:
        kernel: Kernel to evaluate.
        squared_norms: Array of ||u||^2 values.

    Returns:
        Kernel values with the shape of squared_norms.
    """
    squared_norms = np.asarray(squared_norms, dtype=np.float64)
    if kernel is KernelKind.gaussian:
        return np.exp(-squared_norms / 2.0)
    inside = np.maximum(1.0 - squared_norms, 0.0)
    if kernel is KernelKind.epanechnikov:
        return inside
    if kernel is KernelKind.biweight:
        return inside * inside
    raise InvalidArgumentException(f"Unknown kernel {kernel!r}")


def kernel_eval(kernel: KernelKind, u) -> float:
    """
    Evaluate a kernel at a single point.

    Args:
        kernel: Kernel to evaluate.
        u: Point, the value depends only on its norm.

    Returns:
        Nonnegative kernel value.
    """
    u = np.asarray(u, dtype=np.float64).ravel()
    return float(kernel_profile(kernel, np.array(u @ u)))


def weight_matrix(data: DataSet, x0, h: float, kernel: KernelKind) -> LocalWeights:
    """
    Kernel weights K((X_i - x0) / h) of every sample.

    The h^-p prefactor of the scaled kernel is left out and absorbed by the
    normalization of the Gram matrix.

    Args:
        data: Data to weight.
        x0: Evaluation point.
        h: Bandwidth.
        kernel: Kernel to use.

    Raises:
        InvalidArgumentException: On a non-positive bandwidth or mismatched x0.

    Returns:
        LocalWeights.
    """
    if not h > 0:
        raise InvalidArgumentException(f"Bandwidth must be positive, got {h}")
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (data.p,):
        raise InvalidArgumentException(f"x0 must have {data.p} entries, got shape {x0.shape}")
    scaled = (data.X - x0) / h
    w = kernel_profile(kernel, np.einsum("ij,ij->i", scaled, scaled))
    largest = float(np.max(w))
    effective_n = float(np.sum(w) / largest) if largest > 0 else 0.0
    logger.debug("Weights at h=%.6g with %s kernel, effective_n=%.3f", h, kernel.value, effective_n)
    return LocalWeights(w=w, h=float(h), x0=x0, effective_n=effective_n)


def default_bandwidth(n: int, d: int, kappa: float) -> float:
    """
    Bandwidth h = kappa * n^(-1 / (d + 4)).

    Args:
        n: Number of samples.
        d: Manifold dimension.
        kappa: Bandwidth constant.

    Raises:
        InvalidArgumentException: On kappa <= 0, n < 1 or d < 0.

    Returns:
        Bandwidth.
    """
    if not kappa > 0:
        raise InvalidArgumentException(f"kappa must be positive, got {kappa}")
    if n < 1 or d < 0:
        raise InvalidArgumentException(f"Need n >= 1 and d >= 0, got n={n}, d={d}")
    return kappa * n ** (-1.0 / (d + 4))


def default_threshold(n: int, p: int, K: float = 1.0) -> float:
    """
    Covariance threshold t = K * sqrt(log p / n) of the large p setting.

    Args:
        n: Number of samples.
        p: Number of predictors.
        K: Threshold constant.

    Raises:
        InvalidArgumentException: On K < 0, n < 1 or p < 1.

    Returns:
        Threshold.
    """
    if K < 0 or n < 1 or p < 1:
        raise InvalidArgumentException(f"Need K >= 0, n >= 1 and p >= 1, got K={K}, n={n}, p={p}")
    return K * math.sqrt(math.log(p) / n)
