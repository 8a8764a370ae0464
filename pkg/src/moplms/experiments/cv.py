"""K-fold grid search shared by the landmark model and the baselines."""

from dataclasses import dataclass

import numpy as np

from .. import baselines
from .. import landmark
from ..exceptions import (EmptySupportError, SingularSystemError, SolverDivergedError,
                          SVDConvergenceError)
from ..prox import kill_lambda
from ..rng import stream
from .metrics import hamming_loss, mse

METHODS = ("moplms", "one_vs_all", "group_lasso", "low_rank")
FIT_FAILURES = (EmptySupportError, SingularSystemError, SolverDivergedError,
                SVDConvergenceError)


class InfeasibleGridError(ValueError):
    """Every grid cell failed to produce a model."""


@dataclass(frozen=True)
class CVResult:
    best: tuple
    cells: list
    scores: list        # mean validation loss per cell, inf for failed cells
    fold_scores: list   # per cell, one entry per fold

    def table(self):
        return list(zip(self.cells, self.scores))


def fold_assignment(n, folds, seed):
    """Fold index for every row: position in a seeded shuffle, mod ``folds``."""
    perm = stream(seed, 7).permutation(n)
    assign = np.empty(n, dtype=int)
    assign[perm] = np.arange(n) % folds
    return assign


def fit_method(method, dataset, cell, config=None):
    """Fit ``method`` with hyperparameters ``cell`` and return a predictor."""
    if method == "moplms":
        lam1, lam2, lam_s = cell
        model = landmark.fit(dataset, lam1, lam2, lam_s, config)
        return lambda X: landmark.predict(model, X)
    (lam,) = cell
    if method == "one_vs_all":
        model = baselines.fit_one_vs_all(dataset, lam)
    elif method == "group_lasso":
        model = baselines.fit_group_lasso(dataset, lam, config)
    elif method == "low_rank":
        model = baselines.fit_low_rank(dataset, lam)
    else:
        raise ValueError(f"unknown method {method!r}")
    return lambda X: baselines.predict_baseline(model, X)


def _loss(task, Y, Y_hat):
    return hamming_loss(Y, Y_hat) if task == "classification" else mse(Y, Y_hat)


def _preference(cell):
    # larger penalties first: sparser models win ties
    return tuple(-float(v) for v in cell)


def cross_validate(dataset, grid, folds=3, method="moplms", seed=0, config=None):
    """Pick the grid cell with the lowest mean validation loss.

    The loss is MSE for regression and Hamming loss for classification.
    A cell whose fit fails on any fold scores ``inf``. Ties go to the
    larger first penalty, then the larger second one.

    Parameters
    ----------
    dataset : Dataset
    grid : list of tuples
        ``(lambda1, lambda2, lambda_stage2)`` for ``moplms``, ``(lam,)``
        for the baselines.
    folds : int
    method : str
    seed : int
        Seeds the fold shuffle.

    Returns
    -------
    CVResult
    """
    if folds < 2:
        raise ValueError("need at least 2 folds")
    if folds > dataset.n:
        raise ValueError(f"cannot make {folds} folds from {dataset.n} rows")
    cells = [tuple(float(v) for v in np.atleast_1d(c)) for c in grid]
    if not cells:
        raise ValueError("empty hyperparameter grid")
    assign = fold_assignment(dataset.n, folds, seed)
    splits = [(dataset.subset(assign != f), dataset.subset(assign == f))
              for f in range(folds)]

    fold_scores = []
    for cell in cells:
        per_fold = []
        for train, valid in splits:
            try:
                predict = fit_method(method, train, cell, config)
                per_fold.append(_loss(dataset.task, valid.Y, predict(valid.X)))
            except FIT_FAILURES:
                per_fold = [np.inf] * folds
                break
        fold_scores.append(per_fold)
    scores = [float(np.mean(s)) for s in fold_scores]
    if all(np.isinf(scores)):
        raise InfeasibleGridError(
            "every grid cell failed (empty landmark support or solver failure)")
    best = min(range(len(cells)), key=lambda i: (scores[i], _preference(cells[i])))
    return CVResult(cells[best], cells, scores, fold_scores)


def relative_grid(dataset, method, fractions, lambda2_fractions=(0.0,),
                  stage2=(1.0,)):
    """Grid whose penalties are fractions of the data-dependent kill level.

    For ``moplms`` and ``group_lasso`` the reference is :func:`kill_lambda`
    of the relevant problem; for ``low_rank`` it is the largest singular
    value of ``2 X^T Y`` (the smallest trace penalty giving ``B = 0``).
    Ridge weights (``stage2`` for ``moplms``, ``fractions`` for
    ``one_vs_all``) are fractions of the largest eigenvalue of ``X^T X``.
    """
    X = dataset.X - dataset.X.mean(axis=0)
    Y = dataset.Y - dataset.Y.mean(axis=0)
    gram_scale = float(np.linalg.norm(X, 2) ** 2)
    if method == "moplms":
        ref = kill_lambda(Y, Y)
        return [(f1 * ref, f2 * ref, ls * gram_scale) for f1 in fractions
                for f2 in lambda2_fractions for ls in stage2]
    if method == "group_lasso":
        ref = kill_lambda(X, Y)
    elif method == "low_rank":
        ref = float(np.linalg.norm(2.0 * X.T @ Y, 2))
    elif method == "one_vs_all":
        ref = gram_scale
    else:
        raise ValueError(f"unknown method {method!r}")
    return [(f * ref,) for f in fractions]
