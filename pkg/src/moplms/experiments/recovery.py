"""Empirical landmark-support recovery as the sample size grows."""

from dataclasses import dataclass, replace

import numpy as np
from scipy import linalg

from ..prox import SolverConfig, sparsa_fit
from ..rng import stream


@dataclass(frozen=True)
class RecoveryResult:
    n_grid: list
    trials: int
    recovery_rate: list
    phi_star: float
    lambda1: list


def support_overlap_phi(A_star_rows, sigma_ss, tol=1e-10, max_iter=100000):
    """Largest eigenvalue of ``zeta^T sigma_ss^{-1} zeta``.

    ``zeta`` is ``A_star_rows`` (s x k) with every row scaled to unit
    Euclidean norm. The eigenvalue is found by power iteration on the
    s x s matrix ``L^{-1} zeta zeta^T L^{-T}`` (``L`` the Cholesky factor
    of ``sigma_ss``), which has the same nonzero spectrum.
    """
    A = np.asarray(A_star_rows, dtype=np.float64)
    S = np.asarray(sigma_ss, dtype=np.float64)
    if S.shape != (A.shape[0], A.shape[0]):
        raise ValueError(f"sigma_ss must be {A.shape[0]}x{A.shape[0]}, got {S.shape}")
    if not np.allclose(S, S.T):
        raise ValueError("sigma_ss must be symmetric")
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0):
        raise ValueError("A_star_rows has a zero row")
    zeta = A / norms[:, None]
    try:
        chol = linalg.cholesky(S, lower=True)
    except linalg.LinAlgError:
        raise ValueError("sigma_ss is not positive definite") from None
    Z = linalg.solve_triangular(chol, zeta, lower=True)
    M = Z @ Z.T

    v = np.ones(M.shape[0]) / np.sqrt(M.shape[0])
    lam = 0.0
    for _ in range(max_iter):
        w = M @ v
        lam_new = float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
        if abs(lam_new - lam) <= tol * max(1.0, abs(lam_new)):
            return lam_new
        lam = lam_new
    return lam


def incoherent_dependency(s, k, rng):
    """s x (k - s) coupling block whose rows have disjoint supports.

    Each dependent output has exactly one landmark parent (the leftover
    ``(k - s) mod s`` columns stay pure noise). Rows are scaled to unit
    norm, so the smallest planted row norm is 1.
    """
    free = k - s
    per = free // s
    block = np.zeros((s, free))
    if per == 0:
        return block
    perm = rng.permutation(free)
    for i in range(s):
        cols = perm[i * per:(i + 1) * per]
        vals = rng.uniform(0.5, 1.5, size=per) * rng.choice([-1.0, 1.0], size=per)
        block[i, cols] = vals / np.linalg.norm(vals)
    return block


def recovery_lambda(n, k, scale=1.0):
    """Group penalty ``2 sqrt(scale * n * log k)``.

    This is the ``sqrt(f(k) log k / n)`` rate for a loss averaged over
    ``2n`` samples, rescaled to the summed loss used here; ``scale``
    plays the role of ``f(k)``.
    """
    return 2.0 * np.sqrt(scale * n * np.log(k))


def recovery_experiment(k, s, n_grid, trials, sigma, seed, scale=1.0, config=None):
    """Fraction of trials whose fitted row support equals the planted one.

    Landmark outputs are i.i.d. standard normal (identity covariance);
    dependents follow :func:`incoherent_dependency` plus Gaussian noise of
    standard deviation ``sigma``. The solver runs with ``lambda2 = 0``.
    """
    n_grid = [int(n) for n in n_grid]
    if any(b <= a for a, b in zip(n_grid, n_grid[1:])):
        raise ValueError("n_grid must be strictly ascending")
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 1 <= s < k:
        raise ValueError("need 1 <= s < k")
    base = config or SolverConfig()
    planted = tuple(range(s))

    # phi of a representative planted matrix (trial 0 of the first grid point)
    rep = incoherent_dependency(s, k, stream(seed, 0, 0))
    rows = np.hstack([np.eye(s), rep])
    phi_star = support_overlap_phi(rows, np.eye(s))

    rates, lambdas = [], []
    for gi, n in enumerate(n_grid):
        lam = recovery_lambda(n, k, scale)
        cfg = replace(base, lambda1=float(lam), lambda2=0.0)
        hits = 0
        for t in range(trials):
            rng = stream(seed, gi, t)
            block = incoherent_dependency(s, k, rng)
            Y_L = rng.standard_normal((n, s))
            Y = np.hstack([Y_L, Y_L @ block + sigma * rng.standard_normal((n, k - s))])
            est = sparsa_fit(Y, Y, cfg)
            hits += est.support == planted
        rates.append(hits / trials)
        lambdas.append(float(lam))
    return RecoveryResult(n_grid, trials, rates, float(phi_star), lambdas)
