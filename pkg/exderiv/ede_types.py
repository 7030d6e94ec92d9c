"""Module to hold enums."""

from enum import Enum


class KernelKind(Enum):
    """Enum for available radially symmetric kernels."""

    gaussian = "gaussian"
    epanechnikov = "epanechnikov"
    biweight = "biweight"

    @property
    def finite_support(self) -> bool:
        """
        Identify if the kernel vanishes outside the unit ball.

        Returns:
            True for Epanechnikov and Biweight otherwise False.
        """
        return self is not KernelKind.gaussian


class ModelKind(Enum):
    """Enum for the simulated regression models."""

    linear = "linear"
    nonlinear = "nonlinear"


class EstimatorKind(Enum):
    """Enum for available estimators, values are the command line names."""

    NEDE = "nede"
    NALEDE = "nalede"
    NEDEP = "nedep"
    NALEDEP = "naledep"
    EDE = "ede"
    ALEDE = "alede"
    EDEP = "edep"
    ALEDEP = "aledep"
    OLS_MP = "ols"
    Ridge = "ridge"
    PCR = "pcr"
    ElasticNet = "en"

    @property
    def is_local(self) -> bool:
        """
        Identify if the estimator is localized around an evaluation point.

        Returns:
            True for the nonparametric kinds otherwise False.
        """
        return self in _LOCAL

    @property
    def is_global(self) -> bool:
        """
        Identify if the estimator is one of the errors-in-variables linear kinds.

        Returns:
            True for EDE, ALEDE, EDEP and ALEDEP otherwise False.
        """
        return self in _GLOBAL

    @property
    def is_baseline(self) -> bool:
        """
        Identify if the estimator is a baseline without manifold regularization.

        Returns:
            True for OLS/MP, Ridge, PCR and ElasticNet otherwise False.
        """
        return not (self.is_local or self.is_global)

    @property
    def is_thresholded(self) -> bool:
        """
        Identify if the estimator thresholds the covariance matrices.

        Returns:
            True for the large p kinds otherwise False.
        """
        return self in _THRESHOLDED

    @property
    def is_adaptive(self) -> bool:
        """
        Identify if the estimator adds the adaptive lasso penalty.

        Returns:
            True for the adaptive lasso kinds otherwise False.
        """
        return self in _ADAPTIVE

    @property
    def projection_kind(self) -> "EstimatorKind":
        """
        Map a manifold-regularized kind onto its plain projection estimator.

        Returns:
            NEDE for local kinds, EDE for global kinds, the kind itself for baselines.
        """
        if self.is_local:
            return EstimatorKind.NEDE
        if self.is_global:
            return EstimatorKind.EDE
        return self


_LOCAL = frozenset(
    (EstimatorKind.NEDE, EstimatorKind.NALEDE, EstimatorKind.NEDEP, EstimatorKind.NALEDEP)
)
_GLOBAL = frozenset(
    (EstimatorKind.EDE, EstimatorKind.ALEDE, EstimatorKind.EDEP, EstimatorKind.ALEDEP)
)
_THRESHOLDED = frozenset(
    (EstimatorKind.NEDEP, EstimatorKind.NALEDEP, EstimatorKind.EDEP, EstimatorKind.ALEDEP)
)
_ADAPTIVE = frozenset(
    (EstimatorKind.NALEDE, EstimatorKind.NALEDEP, EstimatorKind.ALEDE, EstimatorKind.ALEDEP)
)


class TableFormat(Enum):
    """Enum for benchmark table output formats."""

    csv = "csv"
    json = "json"
    markdown = "markdown"
