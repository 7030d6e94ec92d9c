"""Exterior derivative estimators and baselines."""

import logging
import warnings
from typing import Optional

import numpy as np
from scipy import linalg

from exderiv.ede_types import EstimatorKind
from exderiv.exceptions import InvalidArgumentException, NoiseCorrectionException
from exderiv.kernelization import default_bandwidth, weight_matrix
from exderiv.localgeom import (
    eigendecompose_sym,
    global_gram,
    numerical_rank,
    pinv,
    projection_matrices,
    threshold,
    weighted_gram,
)
from exderiv.models.data_set import DataSet
from exderiv.models.estimate import Diagnostics, Estimate
from exderiv.models.estimator_config import EstimatorConfig
from exderiv.models.local_gram import LocalGram
from exderiv.models.quadratic_problem import QuadraticProblem
from exderiv.solvers import SINGULAR_TOL, coordinate_descent_wl1, solve_penalized_wls

logger = logging.getLogger(__name__)


def adaptive_weights(pilot: np.ndarray, gamma: float) -> np.ndarray:
    """
    Adaptive lasso weights 1 / |pilot_j|^gamma for the derivative coordinates.

    Args:
        pilot: Pilot coefficients, index 0 is the intercept.
        gamma: Adaptive exponent.

    Returns:
        Penalty weights, 0 for the intercept and +inf where the pilot is exactly zero.
    """
    magnitude = np.abs(np.asarray(pilot, dtype=np.float64))
    with np.errstate(divide="ignore"):
        weights = np.where(magnitude > 0, 1.0 / magnitude**gamma, np.inf)
    weights[0] = 0.0
    return weights


def resolve_bandwidth(data: DataSet, config: EstimatorConfig) -> float:
    """
    Bandwidth of a local fit.

    Args:
        data: Data the fit uses.
        config: Configuration holding h or kappa.

    Raises:
        InvalidArgumentException: If neither h nor kappa is set.

    Returns:
        config.h, else kappa * n^(-1 / (d + 4)) with d = config.d or p.
    """
    if config.h is not None:
        return config.h
    if config.kappa is None:
        raise InvalidArgumentException(f"{config.kind.value} at a point needs a bandwidth h or a constant kappa")
    return default_bandwidth(data.n, data.p if config.d is None else config.d, config.kappa)


def local_gram(data: DataSet, x0, config: EstimatorConfig) -> tuple[LocalGram, float]:
    """
    Kernel-weighted Gram matrix around a point.

    Args:
        data: Data to weight.
        x0: Evaluation point.
        config: Configuration with the bandwidth and kernel.

    Returns:
        The LocalGram and the effective sample size.
    """
    kernel = config.resolved_kernel
    if config.kind.is_thresholded and not kernel.finite_support:
        warnings.warn(
            f"{config.kind.value} assumes a finite-support kernel, got {kernel.value}", UserWarning, stacklevel=3
        )
    weights = weight_matrix(data, x0, resolve_bandwidth(data, config), kernel)
    return weighted_gram(data, weights), weights.effective_n


def _noise_corrected(C: np.ndarray, sigma_nu2: float) -> np.ndarray:
    corrected_values, vectors = eigendecompose_sym(C[1:, 1:] - sigma_nu2 * np.eye(C.shape[0] - 1))
    if not corrected_values[0] > 0:
        raise NoiseCorrectionException(
            f"sigma_nu2={sigma_nu2} leaves no positive variance in the covariance; use a smaller sigma_nu2"
        )
    corrected = C.copy()
    corrected[1:, 1:] = (vectors * np.maximum(corrected_values, 0.0)) @ vectors.T
    return corrected


def _solve_residual(A: np.ndarray, b: np.ndarray, notes: list[str]) -> np.ndarray:
    # argmin ||A beta - b||, minimum norm when A is singular
    singular_values = linalg.svdvals(A)
    if singular_values[0] > 0 and singular_values[-1] > SINGULAR_TOL * singular_values[0]:
        return linalg.solve(A, b, assume_a="sym")
    notes.append("pseudoinverse")
    logger.warning("Thresholded system is singular, returning the minimum-norm least squares solution")
    return pinv(A, tol=SINGULAR_TOL) @ b


def _baseline_beta(gram: LocalGram, config: EstimatorConfig, eigenvectors: np.ndarray, notes: list[str]):
    C, R = gram.C, gram.R
    p = gram.p
    kind = config.kind
    ridge = np.zeros((p + 1, p + 1))
    ridge[1:, 1:] = np.eye(p)
    if kind is EstimatorKind.OLS_MP:
        return pinv(C) @ R, None
    if kind is EstimatorKind.Ridge:
        return solve_penalized_wls(C, R, config.lambda_, ridge), None
    if kind is EstimatorKind.PCR:
        d = config.d if config.d is not None else numerical_rank(linalg.eigvalsh(C[1:, 1:]))
        if not 0 <= d <= p:
            raise InvalidArgumentException(f"d must lie in 0..{p}, got {d}")
        basis = np.zeros((p + 1, d + 1))
        basis[0, 0] = 1.0
        basis[1:, 1:] = eigenvectors[:, :d]
        scores = solve_penalized_wls(basis.T @ C @ basis, basis.T @ R, 0.0, np.zeros((d + 1, d + 1)))
        return basis @ scores, None
    if kind is EstimatorKind.ElasticNet:
        A = C + config.lambda2 * ridge
        weights = np.ones(p + 1)
        weights[0] = 0.0
        report = coordinate_descent_wl1(QuadraticProblem(A, R, weights, config.mu), warm_start=pinv(A) @ R)
        if not report.converged:
            notes.append("not-converged")
        return report.beta, report
    raise InvalidArgumentException(f"{kind.value} is not a baseline estimator")


def fit_from_gram(gram: LocalGram, config: EstimatorConfig, effective_n: Optional[float] = None) -> Estimate:
    """
    Solve any estimator from a prepared Gram matrix.

    Thresholded kinds threshold C and R first; global kinds subtract sigma_nu2 from C22 and
    floor negative eigenvalues at zero. The penalty matrix is built from the resulting C22.

    Args:
        gram: Gram matrix and cross-covariance.
        config: Estimator configuration.
        effective_n: Effective sample size for the diagnostics.

    Raises:
        InvalidArgumentException: If d is outside 0..p.
        RankDeficiencyException: On a singular system for the non-thresholded kinds.
        NoiseCorrectionException: If sigma_nu2 removes all variance.

    Returns:
        Estimate centred at gram.x0.
    """
    kind = config.kind
    notes: list[str] = []
    C, R = np.array(gram.C), np.array(gram.R)
    if kind.is_thresholded:
        C, R = threshold(C, config.t), threshold(R, config.t)
        if not (C.any() or R.any()):
            notes.append("degenerate-threshold")
    if kind.is_global and config.sigma_nu2 > 0:
        C = _noise_corrected(C, config.sigma_nu2)
    eigenvalues, eigenvectors = eigendecompose_sym(C[1:, 1:])
    report = None
    spectral_gap = None
    d = config.d

    if kind.is_baseline:
        beta, report = _baseline_beta(gram, config, eigenvectors, notes)
        if kind is EstimatorKind.PCR:
            d = config.d if config.d is not None else numerical_rank(eigenvalues)
    else:
        if d is None:
            d = numerical_rank(eigenvalues)
        projection = projection_matrices(eigenvectors, d, eigenvalues)
        spectral_gap = projection.spectral_gap
        A = C + config.lambda_ * projection.P
        if kind.is_thresholded:
            beta = _solve_residual(A, R, notes)
        else:
            beta = solve_penalized_wls(C, R, config.lambda_, projection.P)
        if kind.is_adaptive:
            weights = adaptive_weights(beta, config.gamma)
            if kind.is_thresholded:
                problem = QuadraticProblem(A.T @ A, A.T @ R, weights, config.mu)
            else:
                problem = QuadraticProblem(A, R, weights, config.mu)
            report = coordinate_descent_wl1(problem, warm_start=beta)
            beta = report.beta
            if not report.converged:
                notes.append("not-converged")

    logger.debug(
        "Fitted %s: p=%d d=%s lambda=%.4g mu=%.4g t=%.4g notes=%s",
        kind.value, gram.p, d, config.lambda_, config.mu, config.t, notes,
    )
    diagnostics = Diagnostics(
        config=config,
        eigenvalues=eigenvalues,
        spectral_gap=spectral_gap,
        effective_n=float(gram.sum_w) if effective_n is None else float(effective_n),
        d=d,
        h=gram.h,
        solver_report=report,
        notes=tuple(notes),
    )
    return Estimate(beta=beta, x0=gram.x0, diagnostics=diagnostics)


def _expect(config: EstimatorConfig, *kinds: EstimatorKind) -> None:
    if config.kind not in kinds:
        expected = ", ".join(kind.value for kind in kinds)
        raise InvalidArgumentException(f"Expected an estimator of kind {expected}, got {config.kind.value}")


def _fit_local(data: DataSet, x0, config: EstimatorConfig, kind: EstimatorKind) -> Estimate:
    _expect(config, kind)
    if x0 is None:
        raise InvalidArgumentException(f"{kind.value} is a local estimator and needs an evaluation point x0")
    gram, effective_n = local_gram(data, x0, config)
    return fit_from_gram(gram, config, effective_n=effective_n)


def _fit_global(data: DataSet, config: EstimatorConfig, kind: EstimatorKind) -> Estimate:
    _expect(config, kind)
    return fit_from_gram(global_gram(data), config, effective_n=float(data.n))


def fit_nede(data: DataSet, x0, config: EstimatorConfig) -> Estimate:
    """
    Nonparametric exterior derivative estimator: local linear fit with a projection penalty.

    Args:
        data: Training data.
        x0: Evaluation point.
        config: NEDE configuration.

    Returns:
        Estimate at x0.
    """
    return _fit_local(data, x0, config, EstimatorKind.NEDE)


def fit_nalede(data: DataSet, x0, config: EstimatorConfig) -> Estimate:
    """
    NEDE followed by an adaptive lasso stage weighted by the NEDE pilot.

    Args:
        data: Training data.
        x0: Evaluation point.
        config: NALEDE configuration.

    Returns:
        Estimate at x0, penalized coordinates may be exactly zero.
    """
    return _fit_local(data, x0, config, EstimatorKind.NALEDE)


def fit_nedep(data: DataSet, x0, config: EstimatorConfig) -> Estimate:
    """
    NEDE on thresholded local covariances.

    Args:
        data: Training data.
        x0: Evaluation point.
        config: NEDEP configuration.

    Returns:
        Estimate at x0, with a pseudoinverse note when the thresholded system is singular.
    """
    return _fit_local(data, x0, config, EstimatorKind.NEDEP)


def fit_naledep(data: DataSet, x0, config: EstimatorConfig) -> Estimate:
    """
    NEDEP followed by an adaptive lasso stage on the thresholded residual objective.

    Args:
        data: Training data.
        x0: Evaluation point.
        config: NALEDEP configuration.

    Returns:
        Estimate at x0.
    """
    return _fit_local(data, x0, config, EstimatorKind.NALEDEP)


def fit_ede(data: DataSet, config: EstimatorConfig) -> Estimate:
    """
    Exterior derivative estimator for a global linear manifold with errors-in-variables.

    Args:
        data: Training data.
        config: EDE configuration.

    Returns:
        Estimate centred at the column means.
    """
    return _fit_global(data, config, EstimatorKind.EDE)


def fit_alede(data: DataSet, config: EstimatorConfig) -> Estimate:
    """
    EDE followed by an adaptive lasso stage.

    Args:
        data: Training data.
        config: ALEDE configuration.

    Returns:
        Estimate centred at the column means.
    """
    return _fit_global(data, config, EstimatorKind.ALEDE)


def fit_edep(data: DataSet, config: EstimatorConfig) -> Estimate:
    """
    EDE on thresholded second moments.

    Args:
        data: Training data.
        config: EDEP configuration.

    Returns:
        Estimate centred at the column means.
    """
    return _fit_global(data, config, EstimatorKind.EDEP)


def fit_aledep(data: DataSet, config: EstimatorConfig) -> Estimate:
    """
    EDEP followed by an adaptive lasso stage.

    Args:
        data: Training data.
        config: ALEDEP configuration.

    Returns:
        Estimate centred at the column means.
    """
    return _fit_global(data, config, EstimatorKind.ALEDEP)


def fit_baseline(data: DataSet, config: EstimatorConfig, x0=None) -> Estimate:
    """
    OLS/MP, Ridge, PCR or elastic net, local when x0 is given.

    Args:
        data: Training data.
        config: Baseline configuration.
        x0: Evaluation point for a kernel-weighted fit.

    Returns:
        Estimate.
    """
    _expect(config, EstimatorKind.OLS_MP, EstimatorKind.Ridge, EstimatorKind.PCR, EstimatorKind.ElasticNet)
    if x0 is None:
        return fit_from_gram(global_gram(data), config, effective_n=float(data.n))
    gram, effective_n = local_gram(data, x0, config)
    return fit_from_gram(gram, config, effective_n=effective_n)


_LOCAL_FITS = {
    EstimatorKind.NEDE: fit_nede,
    EstimatorKind.NALEDE: fit_nalede,
    EstimatorKind.NEDEP: fit_nedep,
    EstimatorKind.NALEDEP: fit_naledep,
}
_GLOBAL_FITS = {
    EstimatorKind.EDE: fit_ede,
    EstimatorKind.ALEDE: fit_alede,
    EstimatorKind.EDEP: fit_edep,
    EstimatorKind.ALEDEP: fit_aledep,
}


def fit(data: DataSet, config: EstimatorConfig, x0=None) -> Estimate:
    """
    Fit the estimator named by config.kind.

    Args:
        data: Training data.
        config: Estimator configuration.
        x0: Evaluation point, required by local kinds, ignored by global kinds, optional for baselines.

    Returns:
        Estimate.
    """
    if config.kind in _LOCAL_FITS:
        return _LOCAL_FITS[config.kind](data, x0, config)
    if config.kind in _GLOBAL_FITS:
        return _GLOBAL_FITS[config.kind](data, config)
    return fit_baseline(data, config, x0=x0)


def fit_at_points(data: DataSet, points, config: EstimatorConfig) -> list[Estimate]:
    """
    Run one regression per evaluation point.

    Args:
        data: Training data.
        points: m by p array of evaluation points.
        config: Estimator configuration.

    Returns:
        One Estimate per point, in order.
    """
    points = np.atleast_2d(np.asarray(points, dtype=np.float64))
    return [fit(data, config, x0=point) for point in points]

