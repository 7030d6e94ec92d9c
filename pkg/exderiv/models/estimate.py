"""Estimate model."""

from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from exderiv.models.estimator_config import EstimatorConfig
from exderiv.models.quadratic_problem import SolverReport


@dataclass(frozen=True)
class Diagnostics:
    """
    Diagnostics attached to a fit.

    Attributes:
        config: The configuration that produced the fit.
        eigenvalues: Eigenvalues of the local covariance in descending order.
        spectral_gap: Gap at the tangent/normal split, None when the split is trivial.
        effective_n: Sum of weights over the largest weight.
        d: Tangent dimension used.
        h: Bandwidth used, None for global fits.
        solver_report: Coordinate descent outcome for l1 penalized kinds.
        notes: Non-fatal conditions met during the fit.
    """

    config: EstimatorConfig
    eigenvalues: np.ndarray
    spectral_gap: Optional[float]
    effective_n: float
    d: Optional[int] = None
    h: Optional[float] = None
    solver_report: Optional[SolverReport] = None
    notes: tuple[str, ...] = field(default_factory=tuple)


class Estimate:
    """
    Fitted value and exterior derivative at a point.

    Attributes:
        _diagnostics: Diagnostics of the fit.
        _dxf_hat: Exterior derivative estimate.
        _f_hat: Function estimate at x0.
        _x0: Point the intercept refers to, the column means for global fits.
    """

    __slots__ = (
        "_diagnostics",
        "_dxf_hat",
        "_f_hat",
        "_x0",
    )

    def __init__(self, beta: np.ndarray, x0: np.ndarray, diagnostics: Diagnostics) -> None:
        """
        Estimate initializer.

        Args:
            beta: Intercept followed by the exterior derivative.
            x0: Point the intercept refers to.
            diagnostics: Diagnostics of the fit.
        """
        beta = np.array(beta, dtype=np.float64)
        self._f_hat = float(beta[0])
        self._dxf_hat = beta[1:]
        self._dxf_hat.setflags(write=False)
        self._x0 = np.array(x0, dtype=np.float64)
        self._x0.setflags(write=False)
        self._diagnostics = diagnostics

    def __repr__(self) -> str:
        """
        Return string representation of Estimate.

        Returns:
            String representation of Estimate.
        """
        return f"Estimate(kind={self._diagnostics.config.kind.value}, f_hat={self._f_hat:.6g}, p={self._dxf_hat.size})"

    @property
    def coefficients(self) -> np.ndarray:
        """
        Property for the stacked coefficient vector.

        Returns:
            (f_hat, dxf_hat) as a length p+1 array.
        """
        return np.concatenate(([self._f_hat], self._dxf_hat))

    @property
    def diagnostics(self) -> Diagnostics:
        """
        Property for diagnostics.

        Returns:
            diagnostics as a Diagnostics object.
        """
        return self._diagnostics

    @property
    def dxf_hat(self) -> np.ndarray:
        """
        Property for dxf_hat.

        Returns:
            dxf_hat as a read-only array.
        """
        return self._dxf_hat

    @property
    def f_hat(self) -> float:
        """
        Property for f_hat.

        Returns:
            f_hat as a float.
        """
        return self._f_hat

    @property
    def x0(self) -> np.ndarray:
        """
        Property for x0.

        Returns:
            x0 as a read-only array.
        """
        return self._x0

    def predict(self, X) -> np.ndarray:
        """
        Predict responses with the fitted linear approximation.

        Args:
            X: n by p array of predictors.

        Returns:
            f_hat + (X - x0) dxf_hat for every row.
        """
        return self._f_hat + (np.asarray(X, dtype=np.float64) - self._x0) @ self._dxf_hat

    def value_at(self, point) -> float:
        """
        Translate the intercept to another centre.

        Args:
            point: Length p point.

        Returns:
            The fitted linear approximation evaluated at point.
        """
        return float(self.predict(np.asarray(point, dtype=np.float64)[None, :])[0])

    def to_dict(self) -> dict[str, Any]:
        """
        Serialize the estimate.

        Returns:
            Dictionary in the fit command's JSON layout.
        """
        report = self._diagnostics.solver_report
        gap = self._diagnostics.spectral_gap
        return {
            "f_hat": self._f_hat,
            "dxf_hat": self._dxf_hat.tolist(),
            "x0": self._x0.tolist(),
            "diagnostics": {
                "eigenvalues": self._diagnostics.eigenvalues.tolist(),
                "spectral_gap": gap,
                "effective_n": self._diagnostics.effective_n,
                "kkt_residual": None if report is None else report.kkt_residual,
                "converged": True if report is None else report.converged,
                "iterations": None if report is None else report.iterations,
                "d": self._diagnostics.d,
                "h": self._diagnostics.h,
                "notes": list(self._diagnostics.notes),
                "config": self._diagnostics.config.to_dict(),
            },
        }
