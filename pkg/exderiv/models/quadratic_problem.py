"""Quadratic problem and solver report models."""

from dataclasses import dataclass

import numpy as np

from exderiv.exceptions import InvalidArgumentException


@dataclass(frozen=True)
class QuadraticProblem:
    """
    Weighted l1 penalized quadratic: beta' A beta - 2 b' beta + mu * sum_j penalty_weights[j] |beta_j|.

    Attributes:
        A: Symmetric positive semidefinite matrix.
        b: Linear term.
        penalty_weights: Nonnegative l1 weights, +inf pins a coordinate at zero, index 0 is the intercept.
        mu: l1 strength.
    """

    A: np.ndarray
    b: np.ndarray
    penalty_weights: np.ndarray
    mu: float = 0.0

    def __post_init__(self) -> None:
        """
        Validate the problem.

        Raises:
            InvalidArgumentException: On inconsistent shapes, negative weights or a penalized intercept.
        """
        size = self.b.shape[0]
        if self.A.shape != (size, size) or self.penalty_weights.shape != (size,):
            raise InvalidArgumentException("A, b and penalty_weights must describe the same number of coordinates")
        if self.mu < 0:
            raise InvalidArgumentException(f"mu must be nonnegative, got {self.mu}")
        if np.any(self.penalty_weights < 0) or np.any(np.isnan(self.penalty_weights)):
            raise InvalidArgumentException("penalty_weights must be nonnegative")
        if self.penalty_weights[0] != 0:
            raise InvalidArgumentException("The intercept is never l1 penalized, penalty_weights[0] must be 0")

    def objective(self, beta: np.ndarray) -> float:
        """
        Evaluate the penalized objective.

        Args:
            beta: Coefficient vector.

        Returns:
            Objective value, coordinates pinned by an infinite weight must be zero.
        """
        finite = np.isfinite(self.penalty_weights)
        if np.any(beta[~finite] != 0):
            return float("inf")
        penalty = self.mu * float(np.sum(self.penalty_weights[finite] * np.abs(beta[finite])))
        return float(beta @ self.A @ beta - 2.0 * self.b @ beta) + penalty


@dataclass(frozen=True)
class SolverReport:
    """
    Outcome of an iterative solve.

    Attributes:
        beta: Coefficient vector.
        iterations: Number of completed sweeps.
        kkt_residual: Largest violation of the stationarity conditions.
        converged: Whether the tolerance was met.
    """

    beta: np.ndarray
    iterations: int
    kkt_residual: float
    converged: bool
