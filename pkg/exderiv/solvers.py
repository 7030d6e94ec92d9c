"""Penalized weighted least squares and coordinate descent for weighted l1 penalties."""

import logging
from typing import Optional

import numpy as np
from scipy import linalg

from exderiv.exceptions import InvalidArgumentException, RankDeficiencyException
from exderiv.models.quadratic_problem import QuadraticProblem, SolverReport

logger = logging.getLogger(__name__)

SINGULAR_TOL = 1e-12
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100_000


def soft_threshold(z: float, a: float) -> float:
    """
    Soft-threshold operator S(z, a) = sign(z) max(|z| - a, 0).

    Args:
        z: Value to shrink.
        a: Nonnegative shrinkage.

    Returns:
        Shrunk value, exactly zero inside [-a, a].
    """
    if z > a:
        return z - a
    if z < -a:
        return z + a
    return 0.0


def is_nonsingular(M: np.ndarray, tol: float = SINGULAR_TOL) -> bool:
    """
    Check that a symmetric matrix is numerically positive definite.

    Args:
        M: Symmetric matrix.
        tol: Smallest eigenvalue must exceed tol times the largest.

    Returns:
        True when M can be inverted safely.
    """
    eigenvalues = linalg.eigvalsh(M)
    top = float(eigenvalues[-1])
    return top > 0 and float(eigenvalues[0]) > tol * top


def solve_penalized_wls(C: np.ndarray, R: np.ndarray, lam: float, P: np.ndarray) -> np.ndarray:
    """
    Minimize beta' C beta - 2 R' beta + lam ||P beta||^2 for an idempotent P.

    Since P' P = P the normal equations are (C + lam P) beta = R.

    Args:
        C: Gram matrix.
        R: Cross-covariance.
        lam: Tikhonov strength.
        P: Symmetric idempotent penalty matrix.

    Raises:
        InvalidArgumentException: If lam < 0.
        RankDeficiencyException: If C + lam P is numerically singular.

    Returns:
        Solution vector.
    """
    if lam < 0:
        raise InvalidArgumentException(f"lambda must be nonnegative, got {lam}")
    system = C + lam * P
    if not is_nonsingular(system):
        raise RankDeficiencyException(
            "Penalized system is numerically singular; use a larger lambda or a smaller d"
        )
    try:
        return linalg.solve(system, R, assume_a="pos")
    except linalg.LinAlgError as exc:
        raise RankDeficiencyException(
            "Penalized system is not positive definite; use a larger lambda or a smaller d"
        ) from exc


def kkt_residual(problem: QuadraticProblem, beta: np.ndarray) -> float:
    """
    Largest violation of the stationarity conditions, recomputed from scratch.

    Args:
        problem: Problem the point should solve.
        beta: Candidate solution.

    Returns:
        Maximum residual over the coordinates not pinned by an infinite weight.
    """
    gradient = 2.0 * (problem.A @ beta - problem.b)
    worst = 0.0
    for j, weight in enumerate(problem.penalty_weights):
        if not np.isfinite(weight):
            continue
        strength = problem.mu * weight
        if beta[j] != 0:
            violation = abs(gradient[j] + strength * np.sign(beta[j]))
        else:
            violation = max(abs(gradient[j]) - strength, 0.0)
        worst = max(worst, violation)
    return float(worst)


def coordinate_descent_wl1(
    problem: QuadraticProblem,
    warm_start: Optional[np.ndarray] = None,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SolverReport:
    """
    Cyclic coordinate descent for beta' A beta - 2 b' beta + mu * sum_j pw_j |beta_j|.

    Coordinates with an infinite penalty weight are pinned at exactly zero.

    Args:
        problem: Problem to solve.
        warm_start: Starting point, copied.
        tol: Tolerance on both the largest coordinate update and the KKT residual.
        max_iter: Maximum number of sweeps.

    Raises:
        InvalidArgumentException: On a non-positive tolerance.

    Returns:
        SolverReport, converged is False when max_iter ran out.
    """
    if not tol > 0:
        raise InvalidArgumentException(f"tol must be positive, got {tol}")
    A = problem.A
    size = problem.b.shape[0]
    pinned = ~np.isfinite(problem.penalty_weights)
    halves = problem.mu * np.where(pinned, 0.0, problem.penalty_weights) / 2.0
    diagonal = np.diag(A).copy()
    beta = np.zeros(size) if warm_start is None else np.array(warm_start, dtype=np.float64)
    beta[pinned] = 0.0
    gradient = A @ beta - problem.b

    iterations = 0
    residual = kkt_residual(problem, beta)
    converged = False
    while iterations < max_iter:
        largest_step = 0.0
        for j in range(size):
            if pinned[j]:
                continue
            if diagonal[j] <= 0:
                new = 0.0
            else:
                z = diagonal[j] * beta[j] - gradient[j]
                new = soft_threshold(z, halves[j]) / diagonal[j]
            step = new - beta[j]
            if step != 0.0:
                gradient += A[:, j] * step
                beta[j] = new
                largest_step = max(largest_step, abs(step))
        iterations += 1
        if largest_step < tol:
            residual = kkt_residual(problem, beta)
            if residual <= tol:
                converged = True
                break
            if largest_step == 0.0:
                break
    else:
        residual = kkt_residual(problem, beta)

    if not converged:
        logger.warning(
            "Coordinate descent stopped after %d sweeps with KKT residual %.3g", iterations, residual
        )
    else:
        logger.debug("Coordinate descent converged in %d sweeps, KKT residual %.3g", iterations, residual)
    return SolverReport(beta=beta, iterations=iterations, kkt_residual=residual, converged=converged)
