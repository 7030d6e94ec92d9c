"""LocalWeights model."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LocalWeights:
    """
    Kernel weights of every sample around an evaluation point.

    Attributes:
        w: Length n nonnegative weights, the diagonal of W.
        h: Bandwidth in predictor units.
        x0: Evaluation point.
        effective_n: Sum of weights divided by the largest weight.
    """

    w: np.ndarray
    h: float
    x0: np.ndarray
    effective_n: float
