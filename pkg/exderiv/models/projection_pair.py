"""ProjectionPair model."""

from typing import Optional

import numpy as np


class ProjectionPair:
    """
    Tangent and normal split of the local covariance eigenbasis.

    Attributes:
        _eigenvalues: Eigenvalues sorted in descending order.
        _p_hat: (p+1) by (p+1) penalty matrix diag(0, Pi).
        _pi: p by p projection onto the estimated normal space.
        _u_n: p by (p-d) normal eigenvectors.
        _u_r: p by d tangent eigenvectors.
    """

    __slots__ = (
        "_eigenvalues",
        "_p_hat",
        "_pi",
        "_u_n",
        "_u_r",
    )

    def __init__(self, U_R: np.ndarray, U_N: np.ndarray, eigenvalues: Optional[np.ndarray] = None) -> None:
        """
        ProjectionPair initializer.

        Args:
            U_R: Tangent eigenvectors as columns.
            U_N: Normal eigenvectors as columns.
            eigenvalues: Eigenvalues matching the columns of [U_R U_N].
        """
        p = U_R.shape[0]
        pi = U_N @ U_N.T
        p_hat = np.zeros((p + 1, p + 1))
        p_hat[1:, 1:] = pi
        self._u_r = U_R
        self._u_n = U_N
        self._pi = pi
        self._p_hat = p_hat
        self._eigenvalues = np.full(p, np.nan) if eigenvalues is None else np.asarray(eigenvalues, dtype=np.float64)

    def __repr__(self) -> str:
        """
        Return string representation of ProjectionPair.

        Returns:
            String representation of ProjectionPair.
        """
        return f"ProjectionPair(p={self.p}, d={self.d})"

    @property
    def d(self) -> int:
        """
        Property for the tangent dimension.

        Returns:
            d as an int.
        """
        return self._u_r.shape[1]

    @property
    def eigenvalues(self) -> np.ndarray:
        """
        Property for eigenvalues.

        Returns:
            eigenvalues in descending order.
        """
        return self._eigenvalues

    @property
    def p(self) -> int:
        """
        Property for the number of predictors.

        Returns:
            p as an int.
        """
        return self._u_r.shape[0]

    @property
    def P(self) -> np.ndarray:
        """
        Property for the intercept-augmented penalty matrix.

        Returns:
            P as a (p+1) by (p+1) array.
        """
        return self._p_hat

    @property
    def Pi(self) -> np.ndarray:
        """
        Property for the normal space projection.

        Returns:
            Pi as a p by p array.
        """
        return self._pi

    @property
    def spectral_gap(self) -> Optional[float]:
        """
        Gap between the last tangent and the first normal eigenvalue.

        Returns:
            lambda_d - lambda_(d+1), None when either side of the split is empty.
        """
        if self.d == 0 or self.d == self.p or np.isnan(self._eigenvalues).any():
            return None
        return float(self._eigenvalues[self.d - 1] - self._eigenvalues[self.d])

    @property
    def U_N(self) -> np.ndarray:
        """
        Property for U_N.

        Returns:
            U_N as a p by (p-d) array.
        """
        return self._u_n

    @property
    def U_R(self) -> np.ndarray:
        """
        Property for U_R.

        Returns:
            U_R as a p by d array.
        """
        return self._u_r
