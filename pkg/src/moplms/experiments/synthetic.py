"""Synthetic data with a planted landmark structure.

The first ``s`` outputs are landmarks, linear in the inputs. Every other
output is a sparse linear combination of landmarks plus noise, so
``Y ~= Y @ A_star`` for a ``k x k`` matrix whose only nonzero rows are the
landmark rows (identity block on the landmark columns).
"""

from dataclasses import dataclass

import numpy as np

from ..landmark import Dataset
from ..rng import stream


@dataclass(frozen=True)
class SyntheticSpec:
    k: int
    d: int
    s: int
    n_train: int
    n_test: int
    sigma_landmark: float = 0.1
    sigma_dependent: float = 0.1
    within_row_density: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not 1 <= self.s <= self.k:
            raise ValueError(f"need 1 <= s <= k, got s={self.s}, k={self.k}")
        if min(self.d, self.n_train, self.n_test) < 1:
            raise ValueError("d, n_train and n_test must be positive")
        if not 0 < self.within_row_density <= 1:
            raise ValueError("within_row_density must lie in (0, 1]")
        if self.sigma_landmark < 0 or self.sigma_dependent < 0:
            raise ValueError("noise levels must be nonnegative")

    @property
    def row_nnz(self):
        """Nonzeros per planted row among the dependent columns."""
        free = self.k - self.s
        if free == 0:
            return 0
        return min(free, max(1, int(round(self.within_row_density * free))))


@dataclass(frozen=True)
class Planted:
    A_star: np.ndarray   # k x k, rows outside L_star are zero
    W_star: np.ndarray   # d x s
    L_star: tuple

    @property
    def dependency(self):
        """The s x (k - s) landmark-to-dependent block."""
        s = len(self.L_star)
        return self.A_star[:s, s:]


def planted_dependency(s, k, row_nnz, rng, unit_rows=False):
    """Draw the s x (k - s) coupling block.

    Each row gets ``row_nnz`` nonzeros at uniformly chosen columns with
    magnitudes uniform on [0.5, 1.5] and random signs.
    """
    block = np.zeros((s, k - s))
    for i in range(s):
        cols = rng.choice(k - s, size=row_nnz, replace=False)
        mags = rng.uniform(0.5, 1.5, size=row_nnz)
        signs = rng.choice([-1.0, 1.0], size=row_nnz)
        block[i, cols] = mags * signs
        if unit_rows and row_nnz:
            block[i] /= np.linalg.norm(block[i])
    return block


def landmark_coefficients(block):
    s, free = block.shape
    k = s + free
    A = np.zeros((k, k))
    A[:s, :s] = np.eye(s)
    A[:s, s:] = block
    return A


def _draw(spec, n, W_star, block, rng):
    X = rng.standard_normal((n, spec.d))
    Y_L = X @ W_star + spec.sigma_landmark * rng.standard_normal((n, spec.s))
    Y_dep = Y_L @ block + spec.sigma_dependent * rng.standard_normal((n, spec.k - spec.s))
    return X, np.hstack([Y_L, Y_dep])


def gen_synthetic_regression(spec):
    """Return ``(train, test, planted)`` for a regression problem."""
    rng = stream(spec.seed, 0)
    W_star = rng.standard_normal((spec.d, spec.s)) / np.sqrt(spec.d)
    block = planted_dependency(spec.s, spec.k, spec.row_nnz, rng)
    X_tr, Y_tr = _draw(spec, spec.n_train, W_star, block, stream(spec.seed, 1))
    X_te, Y_te = _draw(spec, spec.n_test, W_star, block, stream(spec.seed, 2))
    planted = Planted(landmark_coefficients(block), W_star, tuple(range(spec.s)))
    return Dataset(X_tr, Y_tr, "regression"), Dataset(X_te, Y_te, "regression"), planted


def gen_synthetic_classification(spec):
    """Regression construction with every output split at its training median."""
    train, test, planted = gen_synthetic_regression(spec)
    medians = np.median(train.Y, axis=0)
    train = Dataset(train.X, (train.Y > medians).astype(np.float64), "classification")
    test = Dataset(test.X, (test.Y > medians).astype(np.float64), "classification")
    return train, test, planted


def spectral_radius(B):
    return float(np.max(np.abs(np.linalg.eigvals(np.asarray(B, dtype=np.float64)))))


def random_stable_matrix(s, radius, rng):
    """Gaussian s x s matrix rescaled to the given spectral radius."""
    B = rng.standard_normal((s, s))
    return B * (radius / spectral_radius(B))


def gen_ar1_returns(spec, B_star, horizon, burn_in=100):
    """Simulate landmark returns from a stable AR(1) and derive the rest.

    Landmark returns follow ``y_t = B_star y_{t-1} + noise``; dependent
    returns are the planted combination of the same-day landmark returns
    plus noise. The dataset pairs each day's full return vector (inputs)
    with the next day's (targets), ``horizon`` rows in time order.

    Only ``k``, ``s``, the noise levels, the row density and the seed of
    ``spec`` are used.
    """
    B_star = np.asarray(B_star, dtype=np.float64)
    s, k = spec.s, spec.k
    if B_star.shape != (s, s):
        raise ValueError(f"B_star must be {s}x{s}, got {B_star.shape}")
    if spectral_radius(B_star) >= 1.0:
        raise ValueError("B_star is not stable: spectral radius >= 1")
    if horizon < 1:
        raise ValueError("horizon must be positive")
    rng = stream(spec.seed, 3)
    block = planted_dependency(s, k, spec.row_nnz, rng)
    noise = stream(spec.seed, 4)
    T = burn_in + horizon + 1
    Y_L = np.zeros((T, s))
    eps = spec.sigma_landmark * noise.standard_normal((T, s))
    for t in range(1, T):
        Y_L[t] = B_star @ Y_L[t - 1] + eps[t]
    Y_L = Y_L[burn_in:]
    Y_dep = Y_L @ block + spec.sigma_dependent * noise.standard_normal((Y_L.shape[0], k - s))
    series = np.hstack([Y_L, Y_dep])
    planted = Planted(landmark_coefficients(block), B_star, tuple(range(s)))
    return Dataset(series[:-1], series[1:], "regression"), planted
