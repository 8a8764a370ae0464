"""L2-regularized logistic regression for several binary targets at once.

Each column of ``Y`` is an independent problem::

    sum_i [log(1 + exp(z_i)) - y_i z_i] + lam * ||w||^2,   z = X w + b

The intercept ``b`` is not penalized. Columns are fit one after another
by damped Newton steps with Armijo backtracking.
"""

import numpy as np
from scipy import linalg
from scipy.special import expit

from .exceptions import DimensionError


def _objective(Xa, y, theta, penalty):
    z = Xa @ theta
    return float(np.sum(np.logaddexp(0.0, z) - y * z) + theta @ (penalty * theta))


def _fit_column(Xa, y, penalty, tol, max_iter):
    theta = np.zeros(Xa.shape[1])
    f = _objective(Xa, y, theta, penalty)
    for _ in range(max_iter):
        p = expit(Xa @ theta)
        grad = Xa.T @ (p - y) + 2.0 * penalty * theta
        if np.linalg.norm(grad) <= tol:
            break
        weights = p * (1.0 - p)
        hess = (Xa * weights[:, None]).T @ Xa
        hess[np.diag_indices_from(hess)] += 2.0 * penalty
        try:
            direction = linalg.solve(hess, grad, assume_a="pos", check_finite=False)
        except linalg.LinAlgError:
            direction = grad
        slope = float(grad @ direction)
        if slope <= 1e-13 * max(1.0, abs(f)):
            # objective changes are below rounding level: finish with a
            # full Newton step, which squares the already tiny gradient
            theta = theta - direction
            break
        t = 1.0
        while t > 1e-12:
            cand = theta - t * direction
            f_cand = _objective(Xa, y, cand, penalty)
            if f_cand <= f - 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            break
        theta, f = cand, f_cand
    return theta


def fit_logistic(X, Y, lam, tol=1e-8, max_iter=5000):
    """Fit one logistic model per column of ``Y``.

    Parameters
    ----------
    X : array of shape (n, d)
    Y : array of shape (n, m) with entries in {0, 1}
    lam : float
        Ridge weight on the coefficients, must be positive.
    tol : float
        Stop once the gradient norm of a column's objective is below this.

    Returns
    -------
    W : array of shape (d, m)
    b : array of shape (m,)
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    if Y.ndim == 1:
        Y = Y[:, None]
    if X.shape[0] != Y.shape[0]:
        raise DimensionError(f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
    if lam <= 0:
        raise ValueError("logistic regression needs a positive ridge weight")
    n, d = X.shape
    Xa = np.hstack([X, np.ones((n, 1))])
    penalty = np.full(d + 1, float(lam))
    penalty[-1] = 0.0
    thetas = np.column_stack([_fit_column(Xa, Y[:, j], penalty, tol, max_iter)
                              for j in range(Y.shape[1])])
    return thetas[:d], thetas[d]


def predict_proba(X, W, b):
    return expit(np.asarray(X, dtype=np.float64) @ W + b)
