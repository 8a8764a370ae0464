"""Multi-label and regression error measures.

Hamming loss and F1 are computed per example and averaged over rows.
"""

from dataclasses import dataclass

import numpy as np

from ..exceptions import DimensionError


@dataclass(frozen=True)
class MetricsReport:
    hamming: float = None
    f1: float = None
    mse: float = None

    def rows(self):
        return [(name, value) for name, value in
                (("hamming", self.hamming), ("f1", self.f1), ("mse", self.mse))
                if value is not None]


def _pair(Y, Y_hat, binary):
    Y = np.asarray(Y, dtype=np.float64)
    Y_hat = np.asarray(Y_hat, dtype=np.float64)
    if Y.ndim == 1:
        Y, Y_hat = Y[None, :], Y_hat.reshape(1, -1)
    if Y.shape != Y_hat.shape:
        raise DimensionError(
            f"shape mismatch: truth is {Y.shape[0]}x{Y.shape[1]}, "
            f"prediction is {Y_hat.shape[0]}x{Y_hat.shape[1]}")
    if binary:
        for name, M in (("truth", Y), ("prediction", Y_hat)):
            if not np.all((M == 0) | (M == 1)):
                raise ValueError(f"{name} has entries other than 0 and 1")
    return Y, Y_hat


def hamming_loss(Y, Y_hat):
    Y, Y_hat = _pair(Y, Y_hat, binary=True)
    k = Y.shape[1]
    per_row = (Y.sum(axis=1) + Y_hat.sum(axis=1) - 2.0 * np.sum(Y * Y_hat, axis=1)) / k
    return float(per_row.mean())


def f1_score(Y, Y_hat):
    """Example-averaged F1; a row where both sides are empty scores 1."""
    Y, Y_hat = _pair(Y, Y_hat, binary=True)
    denom = Y.sum(axis=1) + Y_hat.sum(axis=1)
    hits = 2.0 * np.sum(Y * Y_hat, axis=1)
    per_row = np.ones_like(denom)
    nz = denom > 0
    per_row[nz] = hits[nz] / denom[nz]
    return float(per_row.mean())


def mse(Y, Y_hat):
    Y, Y_hat = _pair(Y, Y_hat, binary=False)
    diff = Y - Y_hat
    return float(np.mean(diff * diff))


def evaluate(Y, Y_hat, task):
    if task == "classification":
        return MetricsReport(hamming=hamming_loss(Y, Y_hat), f1=f1_score(Y, Y_hat))
    return MetricsReport(mse=mse(Y, Y_hat))
