"""Numerical verification of the eigenstructure of the right singular matrix.

D holds the eigenvectors of B^T B. Deleting the first row and column of B^T B
gives the minor W11, and the squared first-row entries of D follow from the
two spectra:

    |d_{1,i}|^2 = prod_j (delta_i - w_j) / prod_{j != i} (delta_i - delta_j)

Because B^T B is zero wherever i+j is odd, every even-indexed eigenvalue of
B^T B reappears in W11 and the matching first-row entries vanish.
"""

import logging
import math
from typing import List

import numpy as np

from .models import InterlacingCheck, ModelConfig, VerificationReport
from .svd import spd_eigh, svd_taylor_basis
from .taylor import build_taylor_basis

logger = logging.getLogger(__name__)

RECONSTRUCTION_TOLERANCE = 1e-10
PARITY_TOLERANCE = 1e-15
EIGEN_IDENTITY_TOLERANCE = 1e-9
INTERLACING_TOLERANCE = 1e-8
FORMULA_TOLERANCE = 1e-6
EVEN_ENTRY_TOLERANCE = 1e-9
ODD_ENTRY_FLOOR = 1e-6
# odd entries must stand this far above both rounding level and the even entries
ODD_ENTRY_EPS_FACTOR = 1e3
ODD_TO_EVEN_RATIO = 1e6


def taylor_gram(cfg: ModelConfig) -> np.ndarray:
    """Closed-form B^T B: sum_n (n*Ts)^(i+j) / (i! j!), zero when i+j is odd."""
    t = np.arange(1, cfg.half_window + 1) * cfg.sampling_period_s
    size = cfg.n_terms
    gram = np.zeros((size, size))
    for i in range(size):
        for j in range(size):
            power = i + j
            if power % 2:
                continue
            total = float(cfg.window_length) if power == 0 else 2.0 * float(np.sum(t**power))
            gram[i, j] = total / (math.factorial(i) * math.factorial(j))
    return gram


def first_row_from_spectra(gram_eigenvalues: np.ndarray, minor_eigenvalues: np.ndarray) -> np.ndarray:
    """Squared first-row entries of the eigenvector matrix from both spectra."""
    squares = np.zeros(gram_eigenvalues.size)
    for i, delta in enumerate(gram_eigenvalues):
        numerator = float(np.prod(delta - minor_eigenvalues))
        others = np.delete(gram_eigenvalues, i)
        denominator = float(np.prod(delta - others))
        squares[i] = numerator / denominator
    return squares


def verify_appendix_structure(cfg: ModelConfig) -> VerificationReport:
    """Check the eigenstructure claims for one configuration.

    Failures are carried in the report flags; nothing is raised for a
    failed check.
    """
    basis = build_taylor_basis(cfg)
    factors = svd_taylor_basis(basis)
    b = basis.matrix
    eps = np.finfo(float).eps

    rebuilt = factors.left @ np.diag(factors.singular_values) @ factors.right.T
    reconstruction_error = float(np.linalg.norm(rebuilt - b) / np.linalg.norm(b))

    computed_gram = b.T @ b
    size = cfg.n_terms
    odd_mask = (np.add.outer(np.arange(size), np.arange(size)) % 2).astype(bool)
    gram_parity_max = (
        float(np.max(np.abs(computed_gram[odd_mask]))) / float(np.max(np.abs(computed_gram)))
        if odd_mask.any()
        else 0.0
    )

    gram = taylor_gram(cfg)
    gram_eigenvalues, _ = spd_eigh(gram)
    minor_eigenvalues, _ = spd_eigh(gram[1:, 1:])

    squared_singular = factors.singular_values**2
    eigen_identity_error = float(np.max(np.abs(gram_eigenvalues - squared_singular) / squared_singular))

    interlacing: List[InterlacingCheck] = []
    a = 1
    while 2 * a <= size:
        delta = float(gram_eigenvalues[2 * a - 1])
        w = float(minor_eigenvalues[2 * a - 2])
        interlacing.append(
            InterlacingCheck(index=a, gram_eigenvalue=delta, minor_eigenvalue=w, relative_error=abs(delta - w) / delta)
        )
        a += 1

    svd_squares = factors.first_row**2
    formula_squares = first_row_from_spectra(gram_eigenvalues, minor_eigenvalues)
    formula_error = float(np.max(np.abs(svd_squares - formula_squares)))

    first_row = np.abs(factors.first_row)
    even_max = float(np.max(first_row[1::2])) if size > 1 else 0.0
    odd_min = float(np.min(first_row[0::2]))
    odd_floor = min(ODD_ENTRY_FLOOR, ODD_ENTRY_EPS_FACTOR * eps * float(first_row[0]))
    first_row_parity_ok = (
        even_max <= EVEN_ENTRY_TOLERANCE
        and odd_min >= odd_floor
        and odd_min >= ODD_TO_EVEN_RATIO * even_max
    )

    report = VerificationReport(
        window_cycles=cfg.window_cycles,
        taylor_order=cfg.taylor_order,
        singular_values=factors.singular_values.tolist(),
        d_first_row=factors.first_row.tolist(),
        gram_eigenvalues=gram_eigenvalues.tolist(),
        minor_eigenvalues=minor_eigenvalues.tolist(),
        reconstruction_error=reconstruction_error,
        gram_parity_max=gram_parity_max,
        eigen_identity_max_relative_error=eigen_identity_error,
        interlacing=interlacing,
        first_row_svd_squared=svd_squares.tolist(),
        first_row_formula_squared=formula_squares.tolist(),
        first_row_formula_max_error=formula_error,
        even_first_row_max=even_max,
        odd_first_row_min=odd_min,
        reconstruction_ok=reconstruction_error <= RECONSTRUCTION_TOLERANCE,
        gram_parity_ok=gram_parity_max <= PARITY_TOLERANCE,
        eigen_identity_ok=eigen_identity_error <= EIGEN_IDENTITY_TOLERANCE,
        interlacing_ok=all(check.relative_error <= INTERLACING_TOLERANCE for check in interlacing),
        first_row_formula_ok=formula_error <= FORMULA_TOLERANCE,
        first_row_parity_ok=first_row_parity_ok,
    )
    if not report.passed:
        logger.warning(f"Verification failed for c={cfg.window_cycles}, K={cfg.taylor_order}: {report.failures()}")
    return report
