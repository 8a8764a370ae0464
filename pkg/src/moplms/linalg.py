"""Dense linear algebra helpers shared by the solvers.

Matrices are plain 2-D ``float64`` numpy arrays. :func:`as_matrix` is the
single entry point that validates shape and finiteness.
"""

import numpy as np
from scipy import linalg

from .exceptions import DimensionError, SingularSystemError, SVDConvergenceError

# LAPACK's divide-and-conquer driver iterates internally; this is the number
# of restarts with the slower but more robust QR driver before giving up.
SVD_MAX_RETRIES = 1


def as_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D float64 array.

    1-D input is treated as a single column. Raises ``ValueError`` on NaN or
    infinite entries and on empty arrays.
    """
    m = np.asarray(a, dtype=np.float64)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[1] == 0:
        raise DimensionError(f"{name} has an empty dimension: shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def matmul(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    return a @ b


def frobenius_sq(m):
    m = np.asarray(m, dtype=np.float64)
    return float(np.sum(m * m))


def row_l2_norms(m):
    """Euclidean norm of every row; their sum is the l1/l2 group norm."""
    m = np.asarray(m, dtype=np.float64)
    return np.sqrt(np.sum(m * m, axis=1))


def elementwise_l1(m):
    return float(np.sum(np.abs(m)))


def ridge_solve(X, Y, lambda_ridge):
    """Solve ``min_W ||Y - X W||_F^2 + lambda_ridge ||W||_F^2``.

    Uses a Cholesky factorization of ``X^T X + lambda_ridge I``.

    Parameters
    ----------
    X : array of shape (n, d)
    Y : array of shape (n, m)
    lambda_ridge : float
        Nonnegative ridge weight. Zero is allowed only when ``X^T X`` is
        nonsingular.

    Returns
    -------
    W : array of shape (d, m)
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    if X.shape[0] != Y.shape[0]:
        raise DimensionError(
            f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
    factor = ridge_factor(X, lambda_ridge)
    return linalg.cho_solve(factor, X.T @ Y, check_finite=False)


def ridge_factor(X, lambda_ridge):
    """Cholesky factor of ``X^T X + lambda_ridge I`` for ``scipy.linalg.cho_solve``."""
    if lambda_ridge < 0:
        raise ValueError("lambda_ridge must be nonnegative")
    gram = X.T @ X
    gram[np.diag_indices_from(gram)] += lambda_ridge
    try:
        return linalg.cho_factor(gram, lower=True, check_finite=False)
    except linalg.LinAlgError:
        raise SingularSystemError(
            "normal equations are singular; use a positive ridge penalty") from None


def svd(m):
    """Thin singular value decomposition ``m = U diag(s) V^T``.

    Returns ``(U, s, V)`` with ``s`` sorted in nonincreasing order. Note that
    ``V`` is returned, not its transpose.
    """
    m = np.asarray(m, dtype=np.float64)
    drivers = ["gesdd"] + ["gesvd"] * SVD_MAX_RETRIES
    for driver in drivers:
        try:
            U, s, Vt = linalg.svd(m, full_matrices=False, lapack_driver=driver,
                                  check_finite=False)
        except linalg.LinAlgError:
            continue
        return U, s, Vt.T
    raise SVDConvergenceError(f"SVD did not converge for a {m.shape} matrix")


def largest_sq_singular_value(X, n_iter=100, tol=1e-6, seed=0):
    """Power-iteration estimate of ``sigma_max(X)^2``.

    The estimate is a lower bound that tightens monotonically; callers that
    need an upper bound should inflate it slightly.
    """
    X = np.asarray(X, dtype=np.float64)
    v = np.random.default_rng(seed).standard_normal(X.shape[1])
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(n_iter):
        w = X.T @ (X @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(norm - est) <= tol * norm:
            est = norm
            break
        est = norm
    return float(est)
