"""Class to fit and tune exterior derivative regressions on one data set."""

import logging
from dataclasses import replace
from typing import Optional

import numpy as np

from exderiv.ede_types import EstimatorKind
from exderiv.estimators import fit, fit_at_points
from exderiv.exceptions import InvalidArgumentException
from exderiv.models.data_set import DataSet
from exderiv.models.estimate import Estimate
from exderiv.models.estimator_config import EstimatorConfig
from exderiv.models.param_grid import ParamGrid, SelectedParams
from exderiv.selection import select_sequential

logger = logging.getLogger(__name__)


class ExteriorDerivativeRegressor:
    """
    Class to fit and tune exterior derivative regressions on one data set.

    Attributes:
        _config: Current estimator configuration.
        _data: Training data.
        _estimate: Latest fit, None before fit is called.
        _selected: Latest selection, None before select is called.
    """

    __slots__ = (
        "_config",
        "_data",
        "_estimate",
        "_selected",
    )

    def __init__(self, data: DataSet, config: Optional[EstimatorConfig] = None) -> None:
        """
        Initialize ExteriorDerivativeRegressor.

        Args:
            data: Training data.
            config: Estimator configuration, defaults to EDE with the numerical rank as d.
        """
        self._config: EstimatorConfig = config or EstimatorConfig(kind=EstimatorKind.EDE)
        self._data: DataSet = data
        self._estimate: Optional[Estimate] = None
        self._selected: Optional[SelectedParams] = None

    def __repr__(self) -> str:
        """
        Return string representation of ExteriorDerivativeRegressor.

        Returns:
            String representation of ExteriorDerivativeRegressor.
        """
        return f"ExteriorDerivativeRegressor(kind={self._config.kind.value}, n={self._data.n}, p={self._data.p})"

    @property
    def config(self) -> EstimatorConfig:
        """
        Property for config.

        Returns:
            config as an EstimatorConfig.
        """
        return self._config

    @property
    def estimate(self) -> Estimate:
        """
        Property for the latest estimate.

        Raises:
            InvalidArgumentException: If fit has not been called.

        Returns:
            estimate as an Estimate.
        """
        if self._estimate is None:
            raise InvalidArgumentException("Call fit before reading the estimate")
        return self._estimate

    @property
    def selected(self) -> Optional[SelectedParams]:
        """
        Property for the latest selection.

        Returns:
            selected as SelectedParams, or None.
        """
        return self._selected

    def fit(self, x0=None) -> Estimate:
        """
        Fit the configured estimator.

        Args:
            x0: Evaluation point, required for local kinds.

        Returns:
            The new estimate.
        """
        self._estimate = fit(self._data, self._config, x0=x0)
        return self._estimate

    def fit_at_points(self, points) -> list[Estimate]:
        """
        Fit the configured estimator at several points.

        Args:
            points: m by p array of evaluation points.

        Returns:
            One estimate per point.
        """
        return fit_at_points(self._data, points, self._config)

    def predict(self, X) -> np.ndarray:
        """
        Predict with the latest estimate.

        Args:
            X: n by p array of predictors.

        Returns:
            Predicted responses.
        """
        return self.estimate.predict(X)

    def select(self, grid: ParamGrid, seed: int, x0=None, bootstrap: Optional[int] = None) -> SelectedParams:
        """
        Select parameters by sequential bootstrap and adopt them.

        Args:
            grid: Candidate values.
            seed: Seed of the bootstrap resampling.
            x0: Evaluation point for local kinds.
            bootstrap: Replicate count overriding grid.B.

        Returns:
            The selection, also applied to config.
        """
        if bootstrap is not None:
            grid = replace(grid, B=bootstrap)
        self._selected = select_sequential(
            self._data, grid, self._config.kind, seed, x0=x0, base_config=self._config
        )
        self._config = self._selected.apply(self._config)
        logger.info("Adopted %s", self._config.to_dict())
        return self._selected
