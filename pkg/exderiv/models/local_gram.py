"""LocalGram model."""

from typing import Optional

import numpy as np

from exderiv.exceptions import InvalidArgumentException

SYMMETRY_TOL = 1e-12


class LocalGram:
    """
    Localized Gram matrix of the centered, intercept-augmented predictors.

    Attributes:
        _c: (p+1) by (p+1) symmetric matrix, C11 scalar, C12 and C21 vectors, C22 the local covariance.
        _h: Bandwidth the weights were computed with, None for global fits.
        _r: Length p+1 local cross-covariance with the response.
        _sum_w: Total weight.
        _x0: Centre the predictors were shifted by.
    """

    __slots__ = (
        "_c",
        "_h",
        "_r",
        "_sum_w",
        "_x0",
    )

    def __init__(self, C, R, x0, h: Optional[float] = None, sum_w: float = 1.0) -> None:
        """
        LocalGram initializer.

        Args:
            C: Gram matrix, symmetrized on entry.
            R: Cross-covariance vector.
            x0: Centre of the predictors.
            h: Bandwidth, None when no kernel was used.
            sum_w: Total weight behind the averages.

        Raises:
            InvalidArgumentException: On inconsistent shapes or an asymmetric C.
        """
        c = np.array(C, dtype=np.float64)
        r = np.array(R, dtype=np.float64)
        x0 = np.array(x0, dtype=np.float64)
        if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] < 2:
            raise InvalidArgumentException(f"C must be square of size at least 2, got shape {c.shape}")
        if r.shape != (c.shape[0],) or x0.shape != (c.shape[0] - 1,):
            raise InvalidArgumentException("R must have p+1 entries and x0 must have p entries")
        scale = max(1.0, float(np.max(np.abs(c))))
        if np.max(np.abs(c - c.T)) > SYMMETRY_TOL * scale:
            raise InvalidArgumentException("C must be symmetric")
        c = (c + c.T) / 2.0
        for values in (c, r, x0):
            values.setflags(write=False)
        self._c = c
        self._h = h
        self._r = r
        self._sum_w = float(sum_w)
        self._x0 = x0

    def __repr__(self) -> str:
        """
        Return string representation of LocalGram.

        Returns:
            String representation of LocalGram.
        """
        return f"LocalGram(p={self.p}, h={self._h}, sum_w={self._sum_w:.6g})"

    def replace(self, C=None, R=None) -> "LocalGram":
        """
        Copy the gram with new matrices and the same metadata.

        Args:
            C: Replacement Gram matrix.
            R: Replacement cross-covariance.

        Returns:
            New LocalGram.
        """
        return LocalGram(
            C=self._c if C is None else C,
            R=self._r if R is None else R,
            x0=self._x0,
            h=self._h,
            sum_w=self._sum_w,
        )

    @property
    def C(self) -> np.ndarray:
        """
        Property for C.

        Returns:
            C as a read-only array.
        """
        return self._c

    @property
    def C11(self) -> float:
        """
        Property for the intercept block.

        Returns:
            C11 as a float.
        """
        return float(self._c[0, 0])

    @property
    def C12(self) -> np.ndarray:
        """
        Property for the off-diagonal block.

        Returns:
            C12 as a length p array.
        """
        return self._c[0, 1:]

    @property
    def C22(self) -> np.ndarray:
        """
        Property for the local covariance block.

        Returns:
            C22 as a p by p array.
        """
        return self._c[1:, 1:]

    @property
    def h(self) -> Optional[float]:
        """
        Property for h.

        Returns:
            h as a float, None for global fits.
        """
        return self._h

    @property
    def p(self) -> int:
        """
        Property for the number of predictors.

        Returns:
            p as an int.
        """
        return self._c.shape[0] - 1

    @property
    def R(self) -> np.ndarray:
        """
        Property for R.

        Returns:
            R as a read-only array.
        """
        return self._r

    @property
    def sum_w(self) -> float:
        """
        Property for sum_w.

        Returns:
            sum_w as a float.
        """
        return self._sum_w

    @property
    def x0(self) -> np.ndarray:
        """
        Property for x0.

        Returns:
            x0 as a read-only array.
        """
        return self._x0
