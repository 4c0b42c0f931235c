"""Singular value decomposition of the Taylor basis.

The columns of B are (n*Ts)^k / k!, so their norms fall by several orders of
magnitude per Taylor order. A bidiagonalisation SVD only resolves the small
singular values to an absolute accuracy of about eps*||B||, which is useless
for the superposition weights d_{1,k}/lambda_k. The one-sided Jacobi SVD in
LAPACK ``gejsv`` is accurate relative to each singular value for column-graded
matrices, so it is used throughout.
"""

import logging
from typing import List, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cholesky, get_lapack_funcs

from .models import NumericalConditionError, SvdFactors, TaylorBasis

logger = logging.getLogger(__name__)

RANK_TOLERANCE = 1e-12

# gejsv job codes: column-scaled relative accuracy, thin U, full V
_JOBA_COLUMN_SCALED = 0
_JOBU_THIN = 0
_JOBV_FULL = 0


def jacobi_svd(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin SVD ``a = u @ diag(s) @ v.T`` with high relative accuracy.

    Args:
        a: Real matrix with at least as many rows as columns

    Returns:
        Tuple (u, s, v) with singular values in descending order

    Raises:
        NumericalConditionError: If LAPACK reports a failure
    """
    a = np.asfortranarray(a, dtype=np.float64)
    m, n = a.shape
    if n == 0:
        return np.zeros((m, 0)), np.zeros(0), np.zeros((0, 0))
    if m < n:
        raise ValueError(f"jacobi_svd needs a tall matrix, got {m} x {n}")
    if n == 1:
        norm = float(np.linalg.norm(a[:, 0]))
        if norm == 0.0:
            raise NumericalConditionError("Zero column in SVD input")
        return a / norm, np.array([norm]), np.ones((1, 1))

    (gejsv,) = get_lapack_funcs(("gejsv",), (a,))
    sva, u, v, work, _iwork, info = gejsv(
        a, joba=_JOBA_COLUMN_SCALED, jobu=_JOBU_THIN, jobv=_JOBV_FULL
    )
    if info != 0:
        raise NumericalConditionError(f"LAPACK gejsv failed with info={info}")

    sigma = (work[0] / work[1]) * sva[:n]
    order = np.argsort(-sigma, kind="stable")
    return u[:, :n][:, order], sigma[order], v[:n, :n][:, order]


def svd_taylor_basis(basis: TaylorBasis) -> SvdFactors:
    """Decompose B = C diag(Lambda) D^T.

    Even-k and odd-k columns of B are orthogonal (odd powers sum to zero over
    the symmetric window), so each parity group is factored on its own and the
    results are merged by descending singular value. Right singular vectors of
    the odd group therefore have an exact zero in the first row.

    Sign convention: the largest-magnitude entry of every right singular
    vector is positive, which makes d_{1,1} > 0.

    Args:
        basis: Taylor basis

    Returns:
        SvdFactors with descending singular values

    Raises:
        NumericalConditionError: If B is numerically rank deficient
    """
    b = basis.matrix
    n_rows, n_terms = b.shape

    parts: List[Tuple[float, np.ndarray, np.ndarray, np.ndarray]] = []
    for parity in (0, 1):
        columns = np.arange(parity, n_terms, 2)
        if columns.size == 0:
            continue
        u, s, v = jacobi_svd(b[:, columns])
        for j in range(s.size):
            parts.append((float(s[j]), columns, u[:, j], v[:, j]))
    parts.sort(key=lambda part: -part[0])

    left = np.zeros((n_rows, n_terms))
    right = np.zeros((n_terms, n_terms))
    sigma = np.zeros(n_terms)
    for idx, (s, columns, u_col, v_col) in enumerate(parts):
        left[:, idx] = u_col
        right[columns, idx] = v_col
        sigma[idx] = s

    for idx in range(n_terms):
        pivot = int(np.argmax(np.abs(right[:, idx])))
        if right[pivot, idx] < 0:
            right[:, idx] = -right[:, idx]
            left[:, idx] = -left[:, idx]

    if sigma[-1] < RANK_TOLERANCE * sigma[0]:
        raise NumericalConditionError(
            f"Taylor basis is rank deficient: smallest singular value {sigma[-1]:.3e} "
            f"below {RANK_TOLERANCE:g} x largest {sigma[0]:.3e}"
        )

    for arr in (left, right, sigma):
        arr.setflags(write=False)
    logger.debug(f"Taylor basis singular values: {sigma}")
    return SvdFactors(left=left, singular_values=sigma, right=right)


def spd_eigh(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a symmetric positive definite matrix.

    Uses M = L L^T and the Jacobi SVD of L^T, so eigenvalues keep relative
    accuracy when M is badly scaled but well conditioned after diagonal
    scaling.

    Returns:
        Tuple (eigenvalues descending, eigenvectors as columns)

    Raises:
        NumericalConditionError: If the matrix is not positive definite
    """
    if matrix.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0))
    try:
        factor = cholesky(matrix, lower=True)
    except LinAlgError as exc:
        raise NumericalConditionError(f"Matrix is not positive definite: {exc}") from exc
    _, s, v = jacobi_svd(factor.T)
    return s**2, v
