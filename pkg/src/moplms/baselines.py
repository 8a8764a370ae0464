"""Standard multi-output regressors and classifiers used as comparisons.

All three fit a coefficient matrix ``B`` (d x k) plus one intercept per
output:

* one-vs-all: k independent ridge or logistic models,
* group lasso: ``||Y - X B||_F^2 + lam ||B||_{1,2}`` with input rows as groups,
* low rank: ``||Y - X B||_F^2 + lam ||B||_*`` (trace norm).
"""

import json
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import linalg

from .exceptions import DimensionError, ModelFormatError, SolverDivergedError
from .glm import fit_logistic, predict_proba
from .landmark import SCHEMA_VERSION, TASKS, parse_document
from .linalg import as_matrix, largest_sq_singular_value, ridge_factor, svd
from .prox import SolverConfig, sparsa_fit

KINDS = ("one_vs_all", "group_lasso", "low_rank")


@dataclass(frozen=True, eq=False)
class BaselineModel:
    kind: str
    task: str
    B: np.ndarray
    intercepts: np.ndarray
    hyperparameters: dict = field(default_factory=dict)
    x_means: np.ndarray = None
    y_means: np.ndarray = None
    rank: int = None

    @property
    def n_inputs(self):
        return self.B.shape[0]


def _centered(dataset):
    x_means = dataset.X.mean(axis=0)
    y_means = dataset.Y.mean(axis=0)
    return dataset.X - x_means, dataset.Y - y_means, x_means, y_means


def _require_regression(dataset, kind):
    if dataset.task != "regression":
        raise ValueError(f"{kind} baseline supports regression only")


def fit_one_vs_all(dataset, lambda_reg):
    """One independent model per output column."""
    if dataset.task == "regression":
        # column by column, so a single-output fit reproduces its column bit for bit
        x_means = dataset.X.mean(axis=0)
        Xc = dataset.X - x_means
        factor = ridge_factor(Xc, lambda_reg)
        y_means = np.array([col.mean() for col in dataset.Y.T])
        B = np.column_stack([linalg.cho_solve(factor, Xc.T @ (col - m), check_finite=False)
                             for col, m in zip(dataset.Y.T, y_means)])
        intercepts = np.array([m - x_means @ b for m, b in zip(y_means, B.T)])
    else:
        B, intercepts = fit_logistic(dataset.X, dataset.Y, lambda_reg)
        x_means = y_means = None
    return BaselineModel("one_vs_all", dataset.task, B, np.asarray(intercepts),
                         {"lambda_reg": float(lambda_reg)}, x_means, y_means)


def fit_group_lasso(dataset, lambda_group, config=None):
    _require_regression(dataset, "group lasso")
    Xc, Yc, x_means, y_means = _centered(dataset)
    cfg = replace(config or SolverConfig(), lambda1=lambda_group, lambda2=0.0)
    est = sparsa_fit(Xc, Yc, cfg)
    B = est.A_hat
    return BaselineModel("group_lasso", "regression", B, y_means - x_means @ B,
                         {"lambda_group": float(lambda_group)}, x_means, y_means)


def prox_trace(U, tau):
    """Singular value soft-thresholding.

    Returns ``(Z, rank, trace_norm)`` for the thresholded matrix ``Z``.
    """
    left, s, right = svd(U)
    s = np.maximum(s - tau, 0.0)
    r = int(np.count_nonzero(s))
    return (left[:, :r] * s[:r]) @ right[:, :r].T, r, float(np.sum(s))


def fit_low_rank(dataset, lambda_trace, tol=1e-8, max_iter=10000,
                 backtrack_factor=2.0, suff_decrease=1e-4):
    """Trace-norm regularized multivariate regression.

    Proximal gradient with Barzilai-Borwein trial steps and the same
    monotone acceptance rule as :func:`moplms.prox.sparsa_fit`.
    """
    _require_regression(dataset, "low-rank")
    X, Y, x_means, y_means = _centered(dataset)
    d, k = X.shape[1], Y.shape[1]
    B = np.zeros((d, k))
    R = -Y
    G = 2.0 * X.T @ R
    F = float(np.sum(R * R))
    rank = 0
    alpha = max(2.0 * largest_sq_singular_value(X), 1e-10)
    alpha_max = 1e10
    for _ in range(max_iter):
        while True:
            B_new, r_new, nuc = prox_trace(B - G / alpha, lambda_trace / alpha)
            dB = B_new - B
            step_sq = float(np.sum(dB * dB))
            R_new = X @ B_new - Y
            F_new = float(np.sum(R_new * R_new)) + lambda_trace * nuc
            if not np.isfinite(F_new):
                raise SolverDivergedError("low-rank objective became non-finite")
            if F_new <= F - suff_decrease * alpha * step_sq:
                break
            if alpha >= alpha_max:
                B_new = None
                break
            alpha = min(alpha * backtrack_factor, alpha_max)
        if B_new is None:
            break
        G_new = 2.0 * X.T @ R_new
        rel = abs(F - F_new) / max(abs(F), np.finfo(float).tiny)
        if step_sq > 0:
            bb = float(np.sum((G_new - G) * dB)) / step_sq
            alpha = float(np.clip(bb, 1e-10, alpha_max))
        B, G, F, rank = B_new, G_new, F_new, r_new
        if step_sq == 0.0 or rel < tol:
            break
    return BaselineModel("low_rank", "regression", B, y_means - x_means @ B,
                         {"lambda_trace": float(lambda_trace)}, x_means, y_means,
                         rank=rank)


def predict_baseline(model, X_new):
    X_new = as_matrix(X_new, "X_new")
    if X_new.shape[1] != model.n_inputs:
        raise DimensionError(
            f"model expects {model.n_inputs} input columns, got {X_new.shape[1]}")
    if model.task == "classification":
        return (predict_proba(X_new, model.B, model.intercepts) > 0.5).astype(np.float64)
    return X_new @ model.B + model.intercepts


def save_baseline(model):
    doc = {
        "format": "moplms-model",
        "schema_version": SCHEMA_VERSION,
        "kind": model.kind,
        "task": model.task,
        "hyperparameters": model.hyperparameters,
        "B": model.B.tolist(),
        "intercepts": model.intercepts.tolist(),
        "x_means": None if model.x_means is None else model.x_means.tolist(),
        "y_means": None if model.y_means is None else model.y_means.tolist(),
        "rank": model.rank,
    }
    return json.dumps(doc, indent=1)


def load_baseline(document):
    doc = parse_document(document)
    if doc.get("kind") not in KINDS:
        raise ModelFormatError(f"document holds a {doc.get('kind')!r} model, not a baseline")
    try:
        opt = lambda key: None if doc[key] is None else np.array(doc[key], dtype=np.float64)
        model = BaselineModel(
            kind=doc["kind"],
            task=doc["task"],
            B=np.array(doc["B"], dtype=np.float64),
            intercepts=np.array(doc["intercepts"], dtype=np.float64),
            hyperparameters={k: float(v) for k, v in doc["hyperparameters"].items()},
            x_means=opt("x_means"),
            y_means=opt("y_means"),
            rank=doc["rank"],
        )
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ModelFormatError(f"malformed model document: {exc!r}") from None
    if (model.task not in TASKS or model.B.ndim != 2
            or model.intercepts.shape != (model.B.shape[1],)):
        raise ModelFormatError("malformed model document: inconsistent dimensions")
    return model
