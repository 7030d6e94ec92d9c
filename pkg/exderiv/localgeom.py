"""Local Gram matrices, eigenbases, projection matrices, thresholding and pseudoinverses."""

import logging
from typing import Optional

import numpy as np
from scipy import linalg

from exderiv.exceptions import DegenerateNeighborhoodException, InvalidArgumentException
from exderiv.models.data_set import DataSet
from exderiv.models.local_gram import LocalGram
from exderiv.models.local_weights import LocalWeights
from exderiv.models.projection_pair import ProjectionPair

logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-8
PINV_TOL = 1e-10
RANK_TOL = 1e-8
SIGN_TIE_TOL = 1e-12


def weighted_gram(data: DataSet, weights: LocalWeights, x0=None, h: Optional[float] = None) -> LocalGram:
    """
    Weighted second moments of the centered, intercept-augmented predictors.

    With a_i = (1, X_i - x0): C = sum w_i a_i a_i' / sum w and R = sum w_i a_i Y_i / sum w.

    Args:
        data: Data the weights were computed from.
        weights: Kernel weights.
        x0: Centre, defaults to the centre of the weights.
        h: Bandwidth, defaults to the bandwidth of the weights.

    Raises:
        DegenerateNeighborhoodException: If every weight is zero.

    Returns:
        LocalGram.
    """
    x0 = weights.x0 if x0 is None else np.asarray(x0, dtype=np.float64)
    h = weights.h if h is None else h
    return _moments(data, np.asarray(weights.w, dtype=np.float64), x0, h)


def _moments(data: DataSet, w: np.ndarray, x0: np.ndarray, h: Optional[float]) -> LocalGram:
    sum_w = float(np.sum(w))
    if not sum_w > 0:
        raise DegenerateNeighborhoodException(
            f"Every kernel weight is zero around x0 with h={h}; use a larger bandwidth"
        )
    augmented = np.column_stack((np.ones(data.n), data.X - x0))
    weighted = augmented * w[:, None]
    C = weighted.T @ augmented / sum_w
    R = weighted.T @ data.Y / sum_w
    return LocalGram(C=(C + C.T) / 2.0, R=R, x0=x0, h=h, sum_w=sum_w)


def global_gram(data: DataSet) -> LocalGram:
    """
    Unweighted Gram matrix centered at the column means.

    Args:
        data: Data to summarize.

    Returns:
        LocalGram whose C22 block is the sample covariance with divisor n and whose C12 block is zero.
    """
    gram = _moments(data, np.ones(data.n), data.X.mean(axis=0), None)
    C = np.array(gram.C)
    C[0, 1:] = 0.0
    C[1:, 0] = 0.0
    return gram.replace(C=C)


def eigendecompose_sym(M) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a symmetric matrix with a deterministic basis.

    Each eigenvector's largest-magnitude component is made positive, ties going to the lowest index.

    Args:
        M: Symmetric matrix, symmetrized as (M + M') / 2 first.

    Raises:
        InvalidArgumentException: On non-finite entries, a non-square or an asymmetric matrix.

    Returns:
        Eigenvalues in descending order and the matching orthonormal eigenvectors as columns.
    """
    M = np.asarray(M, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidArgumentException(f"Expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidArgumentException("Matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if M.size and np.max(np.abs(M - M.T)) > SYMMETRY_TOL * scale:
        raise InvalidArgumentException("Matrix is not symmetric")
    values, vectors = linalg.eigh((M + M.T) / 2.0)
    values = values[::-1].copy()
    vectors = vectors[:, ::-1].copy()
    for column in range(vectors.shape[1]):
        magnitude = np.abs(vectors[:, column])
        leader = int(np.flatnonzero(magnitude >= magnitude.max() * (1.0 - SIGN_TIE_TOL))[0])
        if vectors[leader, column] < 0:
            vectors[:, column] = -vectors[:, column]
    return values, vectors


def numerical_rank(eigenvalues: np.ndarray, tol: float = RANK_TOL) -> int:
    """
    Count eigenvalues above tol times the largest one.

    Args:
        eigenvalues: Eigenvalues of a positive semidefinite matrix.
        tol: Relative tolerance.

    Returns:
        Numerical rank.
    """
    if eigenvalues.size == 0:
        return 0
    top = float(np.max(eigenvalues))
    if not top > 0:
        return 0
    return int(np.sum(eigenvalues > tol * top))


def projection_matrices(eigenvectors: np.ndarray, d: int, eigenvalues: Optional[np.ndarray] = None) -> ProjectionPair:
    """
    Split an eigenbasis into tangent and normal parts.

    d = 0 makes Pi the identity, a ridge penalty on the derivative block; d = p makes Pi zero.

    Args:
        eigenvectors: Orthonormal eigenvectors as columns, sorted by descending eigenvalue.
        d: Tangent dimension.
        eigenvalues: Matching eigenvalues, kept for diagnostics.

    Raises:
        InvalidArgumentException: If d is outside 0..p.

    Returns:
        ProjectionPair with Pi = U_N U_N' and P = diag(0, Pi).
    """
    p = eigenvectors.shape[1]
    if not 0 <= d <= p:
        raise InvalidArgumentException(f"d must lie in 0..{p}, got {d}")
    return ProjectionPair(U_R=eigenvectors[:, :d], U_N=eigenvectors[:, d:], eigenvalues=eigenvalues)


def threshold(M, t: float) -> np.ndarray:
    """
    Elementwise hard threshold, an entry survives only if its magnitude exceeds t.

    Args:
        M: Array to threshold, the diagonal included.
        t: Threshold.

    Raises:
        InvalidArgumentException: If t < 0.

    Returns:
        Thresholded copy of M.
    """
    if t < 0:
        raise InvalidArgumentException(f"Threshold must be nonnegative, got {t}")
    M = np.asarray(M, dtype=np.float64)
    return np.where(np.abs(M) > t, M, 0.0)


def pinv(M, tol: float = PINV_TOL) -> np.ndarray:
    """
    Moore-Penrose pseudoinverse through the SVD.

    Args:
        M: Matrix to invert.
        tol: Singular values at or below tol times the largest are zeroed.

    Returns:
        Pseudoinverse of M.
    """
    M = np.asarray(M, dtype=np.float64)
    U, s, Vt = linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros(M.T.shape)
    keep = s > tol * s[0]
    return (Vt[keep].T / s[keep]) @ U[:, keep].T
