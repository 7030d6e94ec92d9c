"""Simulated instance models."""

from dataclasses import dataclass

import numpy as np

from exderiv.ede_types import ModelKind
from exderiv.models.data_set import DataSet


@dataclass(frozen=True)
class GroundTruthSpec:
    """
    Design of the simulated predictor manifold.

    Attributes:
        F: p by p mixing matrix, predictors are distributed N(0, FF').
        w: Length p vector with ones at odd positions up to q.
        q: round(p / 2).
        d_design: round(3p / 4), the manifold dimension of the design.
    """

    F: np.ndarray
    w: np.ndarray
    q: int
    d_design: int

    @property
    def p(self) -> int:
        """
        Property for the number of predictors.

        Returns:
            p as an int.
        """
        return self.F.shape[0]


@dataclass(frozen=True)
class SimulatedInstance:
    """
    Simulated regression data with its known exterior derivative.

    Attributes:
        data: The noisy measurements.
        beta_true: Intercept followed by the exterior derivative.
        x0: Evaluation point, the origin for both models.
        model_kind: Which model produced the data.
        sigma_nu2: Predictor noise variance.
        sigma2: Response noise variance.
        seed: Seed of the generator.
        design: The design the data was drawn from.
    """

    data: DataSet
    beta_true: np.ndarray
    x0: np.ndarray
    model_kind: ModelKind
    sigma_nu2: float
    sigma2: float
    seed: int
    design: GroundTruthSpec
