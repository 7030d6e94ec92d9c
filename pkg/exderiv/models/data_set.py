"""DataSet model."""

from collections.abc import Sequence
from typing import Optional

import numpy as np

from exderiv.exceptions import InvalidArgumentException


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=np.float64, copy=True)
    values.setflags(write=False)
    return values


class DataSet:
    """
    Predictor matrix plus response vector.

    Attributes:
        _names: Column labels of the predictors.
        _x: n by p predictor matrix, rows are samples.
        _y: Length n response vector.
    """

    __slots__ = (
        "_names",
        "_x",
        "_y",
    )

    def __init__(self, X, Y, names: Optional[Sequence[str]] = None) -> None:
        """
        DataSet initializer.

        Args:
            X: n by p array of predictor observations.
            Y: Length n array of responses.
            names: Optional p column labels.

        Raises:
            InvalidArgumentException: On mismatched shapes, empty data or non-finite entries.
        """
        x = np.asarray(X, dtype=np.float64)
        y = np.asarray(Y, dtype=np.float64)
        if x.ndim != 2:
            raise InvalidArgumentException(f"X must be two dimensional, got shape {x.shape}")
        if y.ndim != 1:
            raise InvalidArgumentException(f"Y must be one dimensional, got shape {y.shape}")
        if x.shape[0] != y.shape[0]:
            raise InvalidArgumentException(f"X has {x.shape[0]} rows but Y has {y.shape[0]} entries")
        if x.shape[0] < 1 or x.shape[1] < 1:
            raise InvalidArgumentException("DataSet needs at least one sample and one predictor")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise InvalidArgumentException("DataSet entries must be finite")
        if names is None:
            names = [f"x{column + 1}" for column in range(x.shape[1])]
        if len(names) != x.shape[1]:
            raise InvalidArgumentException(f"Expected {x.shape[1]} column names, got {len(names)}")
        self._names = tuple(str(name) for name in names)
        self._x = _frozen(x)
        self._y = _frozen(y)

    def __repr__(self) -> str:
        """
        Return string representation of DataSet.

        Returns:
            String representation of DataSet.
        """
        return f"DataSet(n={self.n}, p={self.p})"

    def __eq__(self, other: object) -> bool:
        """
        Compare two data sets entry by entry.

        Args:
            other: Object to compare with.

        Returns:
            True when names, predictors and responses are identical.
        """
        if not isinstance(other, DataSet):
            return NotImplemented
        return (
            self._names == other._names
            and np.array_equal(self._x, other._x)
            and np.array_equal(self._y, other._y)
        )

    __hash__ = None  # type: ignore[assignment]

    def subset(self, rows) -> "DataSet":
        """
        Select rows, repeats allowed.

        Args:
            rows: Integer indices of the rows to keep.

        Returns:
            New DataSet holding the selected rows.
        """
        rows = np.asarray(rows, dtype=np.intp)
        return DataSet(self._x[rows], self._y[rows], names=self._names)

    @property
    def names(self) -> tuple[str, ...]:
        """
        Property for names.

        Returns:
            names as a tuple of strings.
        """
        return self._names

    @property
    def n(self) -> int:
        """
        Property for the number of samples.

        Returns:
            n as an int.
        """
        return self._x.shape[0]

    @property
    def p(self) -> int:
        """
        Property for the number of predictors.

        Returns:
            p as an int.
        """
        return self._x.shape[1]

    @property
    def X(self) -> np.ndarray:
        """
        Property for X.

        Returns:
            X as a read-only n by p array.
        """
        return self._x

    @property
    def Y(self) -> np.ndarray:
        """
        Property for Y.

        Returns:
            Y as a read-only length n array.
        """
        return self._y
