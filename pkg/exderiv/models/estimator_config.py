"""EstimatorConfig model."""

from dataclasses import dataclass
from typing import Any, Optional

from exderiv.ede_types import EstimatorKind, KernelKind
from exderiv.exceptions import InvalidArgumentException


@dataclass(frozen=True)
class EstimatorConfig:
    """
    Estimator kind plus every tunable.

    Fields irrelevant to a kind are ignored but still validated.

    Attributes:
        kind: Which estimator to run.
        h: Bandwidth for local fits.
        kappa: Bandwidth constant, used when h is unset.
        kernel: Kernel for local fits, unset picks Gaussian or Biweight for thresholded kinds.
        lambda_: Tikhonov strength.
        d: Manifold dimension, unset uses the numerical rank of the local covariance.
        mu: l1 strength.
        gamma: Adaptive lasso exponent.
        t: Covariance threshold.
        sigma_nu2: Predictor noise variance, global kinds only.
        lambda2: Ridge strength of the elastic net.
    """

    kind: EstimatorKind
    h: Optional[float] = None
    kappa: Optional[float] = None
    kernel: Optional[KernelKind] = None
    lambda_: float = 0.0
    d: Optional[int] = None
    mu: float = 0.0
    gamma: float = 1.0
    t: float = 0.0
    sigma_nu2: float = 0.0
    lambda2: float = 0.0

    def __post_init__(self) -> None:
        """
        Validate the configuration.

        Raises:
            InvalidArgumentException: On values outside their range.
        """
        if not isinstance(self.kind, EstimatorKind):
            raise InvalidArgumentException(f"kind must be an EstimatorKind, got {self.kind!r}")
        for name in ("lambda_", "mu", "t", "sigma_nu2", "lambda2"):
            if getattr(self, name) < 0:
                raise InvalidArgumentException(f"{name} must be nonnegative, got {getattr(self, name)}")
        if self.gamma <= 0:
            raise InvalidArgumentException(f"gamma must be positive, got {self.gamma}")
        if self.h is not None and self.h <= 0:
            raise InvalidArgumentException(f"h must be positive, got {self.h}")
        if self.kappa is not None and self.kappa <= 0:
            raise InvalidArgumentException(f"kappa must be positive, got {self.kappa}")
        if self.d is not None and self.d < 0:
            raise InvalidArgumentException(f"d must be nonnegative, got {self.d}")

    @property
    def resolved_kernel(self) -> KernelKind:
        """
        Kernel to use when none was chosen explicitly.

        Returns:
            The configured kernel, else Biweight for thresholded kinds and Gaussian otherwise.
        """
        if self.kernel is not None:
            return self.kernel
        return KernelKind.biweight if self.kind.is_thresholded else KernelKind.gaussian

    def to_dict(self) -> dict[str, Any]:
        """
        Echo the configuration as plain values.

        Returns:
            Dictionary suitable for JSON output.
        """
        return {
            "kind": self.kind.value,
            "h": self.h,
            "kappa": self.kappa,
            "kernel": self.resolved_kernel.value,
            "lambda": self.lambda_,
            "d": self.d,
            "mu": self.mu,
            "gamma": self.gamma,
            "t": self.t,
            "sigma_nu2": self.sigma_nu2,
            "lambda2": self.lambda2,
        }
