"""Proximal gradient solver for row-sparse least squares.

Minimizes::

    ||Y - X B||_F^2 + lambda1 * sum_g ||B_g||_2 + lambda2 * ||B||_1

over ``B`` of shape (p, k), where the groups ``B_g`` are the rows of ``B``.
With ``X = Y`` this selects landmark outputs; with an input design matrix and
``lambda2 = 0`` it is the multivariate group lasso.

The iteration is a separable-approximation scheme: a gradient step forms
``U = B - grad / alpha`` and each row of ``U`` is shrunk in closed form.
``alpha`` starts from a Barzilai-Borwein estimate and is increased until a
sufficient-decrease condition holds, which makes the objective monotone.
"""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionError, SolverDivergedError
from .linalg import largest_sq_singular_value, row_l2_norms


@dataclass(frozen=True)
class SolverConfig:
    lambda1: float = 0.0
    lambda2: float = 0.0
    tol: float = 1e-8
    max_iter: int = 10000
    alpha_min: float = 1e-10
    alpha_max: float = 1e10
    backtrack_factor: float = 2.0
    suff_decrease: float = 1e-4

    def __post_init__(self):
        if self.lambda1 < 0 or self.lambda2 < 0:
            raise ValueError("penalty weights must be nonnegative")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if not 0 < self.alpha_min <= self.alpha_max:
            raise ValueError("need 0 < alpha_min <= alpha_max")
        if self.backtrack_factor <= 1:
            raise ValueError("backtrack_factor must exceed 1")
        if self.suff_decrease <= 0:
            raise ValueError("suff_decrease must be positive")


@dataclass(frozen=True)
class CoefficientEstimate:
    """Result of :func:`sparsa_fit`.

    Rows of ``A_hat`` outside ``support`` are exactly zero.
    """

    A_hat: np.ndarray
    row_norms: np.ndarray
    support: tuple
    objective_trace: list = field(repr=False)
    iterations: int = 0
    converged: bool = False

    @property
    def objective(self):
        return self.objective_trace[-1]


def soft_threshold(u, tau):
    return np.sign(u) * np.maximum(np.abs(u) - tau, 0.0)


def prox_group_l1(u, tau1, tau2):
    """Proximal map of ``tau1 ||z||_2 + tau2 ||z||_1`` at ``u``.

    Elementwise soft-thresholding by ``tau2`` followed by a group shrink of
    the result by ``tau1``. The output is exactly zero when
    ``||soft(u, tau2)||_2 <= tau1``.
    """
    if tau1 < 0 or tau2 < 0:
        raise ValueError("thresholds must be nonnegative")
    h = soft_threshold(np.asarray(u, dtype=np.float64), tau2)
    norm = np.linalg.norm(h)
    if norm <= tau1 or norm == 0.0:
        return np.zeros_like(h)
    return (1.0 - tau1 / norm) * h


def prox_rows(U, tau1, tau2):
    """Apply :func:`prox_group_l1` to every row of ``U`` at once."""
    H = soft_threshold(U, tau2)
    norms = row_l2_norms(H)
    keep = norms > tau1
    scale = np.zeros_like(norms)
    scale[keep] = 1.0 - tau1 / norms[keep]
    return H * scale[:, None]


def _check_shapes(X, Y, B=None):
    if X.shape[0] != Y.shape[0]:
        raise DimensionError(
            f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
    if B is not None and B.shape != (X.shape[1], Y.shape[1]):
        raise DimensionError(
            f"B must have shape {(X.shape[1], Y.shape[1])}, got {B.shape}")


def _penalty(B, lambda1, lambda2):
    return lambda1 * float(np.sum(row_l2_norms(B))) + lambda2 * float(np.sum(np.abs(B)))


def objective(X, Y, B, lambda1, lambda2):
    X, Y, B = (np.asarray(a, dtype=np.float64) for a in (X, Y, B))
    _check_shapes(X, Y, B)
    R = Y - X @ B
    return float(np.sum(R * R)) + _penalty(B, lambda1, lambda2)


def loss_gradient(X, Y, B):
    """Gradient ``2 X^T (X B - Y)`` of the squared Frobenius loss."""
    X, Y, B = (np.asarray(a, dtype=np.float64) for a in (X, Y, B))
    _check_shapes(X, Y, B)
    return 2.0 * X.T @ (X @ B - Y)


def kill_lambda(X, Y, lambda2=0.0):
    """Smallest ``lambda1`` for which ``B = 0`` is the solution.

    At ``B = 0`` the gradient is ``-2 X^T Y``; zero is a fixed point of every
    prox step exactly when no row of ``soft(2 X^T Y, lambda2)`` has norm
    above ``lambda1``.
    """
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    _check_shapes(X, Y)
    H = soft_threshold(2.0 * X.T @ Y, lambda2)
    return float(np.max(row_l2_norms(H)))


def sparsa_fit(X, Y, config=None, B0=None):
    """Minimize the row-sparse least squares objective.

    Parameters
    ----------
    X : array of shape (n, p)
        Design matrix. Pass ``X = Y`` for landmark selection.
    Y : array of shape (n, k)
    config : SolverConfig, optional
    B0 : array of shape (p, k), optional
        Starting point, zero by default.

    Returns
    -------
    CoefficientEstimate
    """
    config = config or SolverConfig()
    X = np.asarray(X, dtype=np.float64)
    Y = np.asarray(Y, dtype=np.float64)
    _check_shapes(X, Y)
    lam1, lam2 = config.lambda1, config.lambda2
    p, k = X.shape[1], Y.shape[1]

    B = np.zeros((p, k)) if B0 is None else np.array(B0, dtype=np.float64)
    _check_shapes(X, Y, B)
    R = X @ B - Y
    G = 2.0 * X.T @ R
    F = float(np.sum(R * R)) + _penalty(B, lam1, lam2)
    trace = [F]

    lipschitz = 2.0 * largest_sq_singular_value(X)
    alpha = float(np.clip(lipschitz, config.alpha_min, config.alpha_max))
    converged = False
    it = 0
    while it < config.max_iter:
        it += 1
        while True:
            B_new = prox_rows(B - G / alpha, lam1 / alpha, lam2 / alpha)
            dB = B_new - B
            step_sq = float(np.sum(dB * dB))
            R_new = X @ B_new - Y
            F_new = float(np.sum(R_new * R_new)) + _penalty(B_new, lam1, lam2)
            if not np.isfinite(F_new):
                raise SolverDivergedError(f"objective became {F_new} at iteration {it}")
            if F_new <= F - config.suff_decrease * alpha * step_sq:
                break
            if alpha >= config.alpha_max:
                B_new = None
                break
            alpha = min(alpha * config.backtrack_factor, config.alpha_max)

        if B_new is None:
            # no admissible step even at alpha_max: B is numerically stationary
            converged = True
            break

        G_new = 2.0 * X.T @ R_new
        dG = G_new - G
        rel_change = abs(F - F_new) / max(abs(F), np.finfo(float).tiny)
        B, R, G, F = B_new, R_new, G_new, F_new
        trace.append(F)
        if step_sq == 0.0 or rel_change < config.tol:
            converged = True
            break
        bb = float(np.sum(dG * dB)) / step_sq
        alpha = float(np.clip(bb, config.alpha_min, config.alpha_max))

    norms = row_l2_norms(B)
    support = tuple(int(i) for i in np.flatnonzero(norms > 0.0))
    return CoefficientEstimate(A_hat=B, row_norms=norms, support=support,
                               objective_trace=trace, iterations=it,
                               converged=converged)
