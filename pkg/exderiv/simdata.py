"""Simulated linear and nonlinear manifold data, and CSV ingestion."""

import logging
import math
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd
from scipy import linalg

from exderiv.ede_types import ModelKind
from exderiv.exceptions import DataParseException, InvalidArgumentException
from exderiv.models.data_set import DataSet
from exderiv.models.simulated_instance import GroundTruthSpec, SimulatedInstance

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
CORRELATION = 0.3

PathLike = Union[str, Path]


def round_half_away(value: float) -> int:
    """
    Round to the nearest integer, halves away from zero.

    Args:
        value: Number to round.

    Returns:
        Rounded value as an int.
    """
    return int(math.copysign(math.floor(abs(value) + 0.5), value))


def build_F(p: int) -> np.ndarray:
    """
    Build the mixing matrix of the simulated designs.

    The leading d by d block is Toeplitz with entries 0.3^|i-j|; each row below it
    places 0.3 at columns q+i-d and q+i+1-d (1-based, columns beyond p dropped).

    Args:
        p: Number of predictors.

    Raises:
        InvalidArgumentException: If p < 2.

    Returns:
        p by p matrix F.
    """
    if p < 2:
        raise InvalidArgumentException(f"p must be at least 2, got {p}")
    d = round_half_away(0.75 * p)
    q = round_half_away(0.5 * p)
    F = np.zeros((p, p))
    idx = np.arange(d)
    F[:d, :d] = CORRELATION ** np.abs(idx[:, None] - idx[None, :])
    for i in range(d + 1, p + 1):
        for j in (q + i - d, q + i + 1 - d):
            if 1 <= j <= p:
                F[i - 1, j - 1] = CORRELATION
    return F


def odd_indicator(p: int, q: int) -> np.ndarray:
    """
    Vector with ones at the odd 1-based positions up to q.

    Args:
        p: Length of the vector.
        q: Last position that may hold a one.

    Returns:
        Length p vector w.
    """
    w = np.zeros(p)
    w[0:q:2] = 1.0
    return w


def design_spec(p: int) -> GroundTruthSpec:
    """
    Assemble the design of the simulated models.

    Args:
        p: Number of predictors.

    Returns:
        GroundTruthSpec holding F, w, q and the design dimension.
    """
    q = round_half_away(0.5 * p)
    return GroundTruthSpec(
        F=build_F(p),
        w=odd_indicator(p, q),
        q=q,
        d_design=round_half_away(0.75 * p),
    )


def true_exterior_derivative(F: np.ndarray, w: np.ndarray, rank_tol: float = RANK_TOL) -> np.ndarray:
    """
    Project w onto the column space of F.

    Args:
        F: Matrix whose range is the tangent space.
        w: Gradient in the ambient coordinates.
        rank_tol: Singular values at or below rank_tol times the largest are treated as zero.

    Returns:
        Orthogonal projection of w onto range(F).
    """
    U, s, _ = linalg.svd(np.asarray(F, dtype=np.float64), full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros_like(np.asarray(w, dtype=np.float64))
    U_r = U[:, s > rank_tol * s[0]]
    return U_r @ (U_r.T @ w)


def linear_response(xi: np.ndarray, w: np.ndarray) -> np.ndarray:
    """
    Evaluate f(xi) = 1 + sum of xi_i over the odd positions selected by w.

    Args:
        xi: n by p noiseless predictors.
        w: Odd position indicator.

    Returns:
        Length n responses.
    """
    return 1.0 + xi @ w


def nonlinear_response(xi: np.ndarray, w: np.ndarray) -> np.ndarray:
    """
    Evaluate f(xi) = 1 + sum of sin(xi_i) over the odd positions selected by w.

    Args:
        xi: n by p noiseless predictors.
        w: Odd position indicator.

    Returns:
        Length n responses.
    """
    return 1.0 + np.sin(xi) @ w


def _generate(
    model_kind: ModelKind, p: int, n: int, sigma_nu2: float, sigma2: float, seed: int
) -> SimulatedInstance:
    if n < 1:
        raise InvalidArgumentException(f"n must be at least 1, got {n}")
    if sigma_nu2 < 0 or sigma2 < 0:
        raise InvalidArgumentException("Noise variances must be nonnegative")
    design = design_spec(p)
    rng = np.random.Generator(np.random.PCG64(seed))
    z = rng.standard_normal((n, p)) @ design.F.T
    if model_kind is ModelKind.linear:
        xi = z
        eta = linear_response(xi, design.w)
    else:
        xi = np.sin(z)
        eta = nonlinear_response(xi, design.w)
    X = xi + math.sqrt(sigma_nu2) * rng.standard_normal((n, p))
    Y = eta + math.sqrt(sigma2) * rng.standard_normal(n)
    beta_true = np.concatenate(([1.0], true_exterior_derivative(design.F, design.w)))
    logger.debug("Generated %s instance p=%d n=%d seed=%d", model_kind.value, p, n, seed)
    return SimulatedInstance(
        data=DataSet(X, Y),
        beta_true=beta_true,
        x0=np.zeros(p),
        model_kind=model_kind,
        sigma_nu2=float(sigma_nu2),
        sigma2=float(sigma2),
        seed=seed,
        design=design,
    )


def generate_linear(p: int, n: int, sigma_nu2: float, sigma2: float, seed: int) -> SimulatedInstance:
    """
    Draw the linear model: xi ~ N(0, FF'), f(xi) = 1 + sum of odd xi_i up to q.

    Args:
        p: Number of predictors.
        n: Number of samples.
        sigma_nu2: Predictor noise variance.
        sigma2: Response noise variance.
        seed: Seed of the PCG64 generator.

    Raises:
        InvalidArgumentException: On invalid dimensions or variances.

    Returns:
        SimulatedInstance whose exterior derivative is constant over the space.
    """
    return _generate(ModelKind.linear, p, n, sigma_nu2, sigma2, seed)


def generate_nonlinear(p: int, n: int, sigma_nu2: float, sigma2: float, seed: int) -> SimulatedInstance:
    """
    Draw the nonlinear model: xi = sin(N(0, FF')), f(xi) = 1 + sum of odd sin(xi_i) up to q.

    Args:
        p: Number of predictors.
        n: Number of samples.
        sigma_nu2: Predictor noise variance.
        sigma2: Response noise variance.
        seed: Seed of the PCG64 generator.

    Raises:
        InvalidArgumentException: On invalid dimensions or variances.

    Returns:
        SimulatedInstance with the exterior derivative at the origin.
    """
    return _generate(ModelKind.nonlinear, p, n, sigma_nu2, sigma2, seed)


def generate(model_kind: ModelKind, p: int, n: int, sigma_nu2: float, sigma2: float, seed: int) -> SimulatedInstance:
    """
    Draw either simulated model.

    Args:
        model_kind: Which model to draw.
        p: Number of predictors.
        n: Number of samples.
        sigma_nu2: Predictor noise variance.
        sigma2: Response noise variance.
        seed: Seed of the PCG64 generator.

    Returns:
        SimulatedInstance.
    """
    return _generate(model_kind, p, n, sigma_nu2, sigma2, seed)


def load_csv(path: PathLike, response_column: str) -> DataSet:
    """
    Read a numeric CSV file with a header row.

    Args:
        path: Path of the UTF-8 CSV file.
        response_column: Header of the response column.

    Raises:
        DataParseException: On a missing file, missing column, empty or non-numeric cell.

    Returns:
        DataSet with the response as Y and the remaining columns as X in header order.
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except FileNotFoundError as exc:
        raise DataParseException(f"{path}: file not found") from exc
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise DataParseException(f"{path}: cannot parse CSV ({exc})") from exc
    if response_column not in frame.columns:
        raise DataParseException(f"{path}: missing response column '{response_column}'")
    if frame.shape[1] < 2:
        raise DataParseException(f"{path}: need at least one predictor column besides '{response_column}'")
    if frame.shape[0] == 0:
        raise DataParseException(f"{path}: no data rows after the header")
    values = np.empty(frame.shape, dtype=np.float64)
    for column_index, column in enumerate(frame.columns):
        cells = frame[column].str.strip()
        parsed = pd.to_numeric(cells, errors="coerce").to_numpy(dtype=np.float64)
        bad = np.flatnonzero(~np.isfinite(parsed))
        if bad.size:
            row = int(bad[0])
            cell = cells.iloc[row]
            problem = "empty cell" if cell == "" else f"non-numeric value '{cell}'"
            raise DataParseException(f"{path}: line {row + 2} (data row {row + 1}), column '{column}': {problem}")
        # to_numeric only locates bad cells, its fast parser is not correctly rounded
        values[:, column_index] = [float(cell) for cell in cells]
    predictors = [column for column in frame.columns if column != response_column]
    X = values[:, [frame.columns.get_loc(column) for column in predictors]]
    Y = values[:, frame.columns.get_loc(response_column)]
    logger.info("Loaded %s: n=%d p=%d", path, X.shape[0], X.shape[1])
    return DataSet(X, Y, names=predictors)


def save_csv(data: DataSet, path: PathLike, response_column: str = "y") -> None:
    """
    Write a DataSet so that load_csv reads it back exactly.

    Args:
        data: DataSet to write.
        path: Destination path.
        response_column: Header of the response column.
    """
    frame = pd.DataFrame(data.X, columns=list(data.names))
    frame[response_column] = data.Y
    frame.to_csv(Path(path), index=False, float_format="%.17g", encoding="utf-8")


def save_truth(instance: SimulatedInstance, path: PathLike) -> None:
    """
    Write the ground-truth coefficients of a simulated instance.

    Args:
        instance: Simulated instance.
        path: Destination path.
    """
    names = ["intercept"] + list(instance.data.names)
    frame = pd.DataFrame({"coefficient": names, "value": instance.beta_true})
    frame.to_csv(Path(path), index=False, float_format="%.17g", encoding="utf-8")
