"""Landmark output selection and the composed multi-output predictor.

Fitting has two stages. Stage 1 regresses the output matrix on itself with
a row-sparse penalty; the nonzero rows of the coefficient matrix are the
landmark outputs, and its columns describe every output as a combination of
landmarks. Stage 2 fits an input-to-landmark model. Prediction runs stage 2
on new inputs and pushes the landmark predictions through the stage-1
coefficients to recover the remaining outputs.
"""

import json
from dataclasses import dataclass, replace

import numpy as np

from .exceptions import DimensionError, EmptySupportError, ModelFormatError
from .glm import fit_logistic, predict_proba
from .linalg import as_matrix, ridge_solve
from .prox import SolverConfig, sparsa_fit

SCHEMA_VERSION = 1
TASKS = ("regression", "classification")
PROPAGATION_MODES = ("hard", "probability")


@dataclass(frozen=True)
class Dataset:
    X: np.ndarray
    Y: np.ndarray
    task: str = "regression"

    def __post_init__(self):
        X = as_matrix(self.X, "X")
        Y = as_matrix(self.Y, "Y")
        if X.shape[0] != Y.shape[0]:
            raise DimensionError(
                f"X has {X.shape[0]} rows but Y has {Y.shape[0]}")
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.task == "classification" and not np.all((Y == 0) | (Y == 1)):
            raise ValueError("classification targets must be 0 or 1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)

    @property
    def n(self):
        return self.X.shape[0]

    def subset(self, rows):
        return Dataset(self.X[rows], self.Y[rows], self.task)


@dataclass(frozen=True, eq=False)
class LandmarkModel:
    """A fitted landmark predictor.

    ``W`` has one column per landmark (shape d x s); ``intercepts`` has
    length s. For classification these are logistic-regression parameters.
    """

    task: str
    landmarks: tuple
    A_hat: np.ndarray
    W: np.ndarray
    intercepts: np.ndarray
    y_means: np.ndarray
    lambda1: float
    lambda2: float
    lambda_stage2: float
    propagate: str = "hard"
    schema_version: int = SCHEMA_VERSION
    # stage-1 solver diagnostics
    objective: float = float("nan")
    iterations: int = 0

    @property
    def n_outputs(self):
        return self.A_hat.shape[0]

    @property
    def n_inputs(self):
        return self.W.shape[0]


def select_landmarks(estimate):
    """Indices of the nonzero rows of a stage-1 estimate, ascending."""
    support = sorted(int(i) for i in estimate.support)
    if not support:
        raise EmptySupportError(
            "empty landmark support: lambda1 is too large, lower it")
    return tuple(support)


def fit(dataset, lambda1, lambda2, lambda_stage2, config=None, propagate="hard",
        center_labels=True):
    """Fit the three-step landmark model.

    Parameters
    ----------
    dataset : Dataset
    lambda1, lambda2 : float
        Group and elementwise penalties of the stage-1 problem.
    lambda_stage2 : float
        Ridge weight of the stage-2 model (positive).
    config : SolverConfig, optional
        Solver settings; its penalty fields are overridden.
    propagate : {"hard", "probability"}
        Classification only: whether hardened landmark labels or their
        probabilities are pushed through ``A_hat``.
    center_labels : bool
        Classification only: run stage 1 on column-centered labels and add
        the label means back before thresholding. Regression always centers.

    Returns
    -------
    LandmarkModel
    """
    if lambda_stage2 <= 0:
        raise ValueError("lambda_stage2 must be positive")
    if propagate not in PROPAGATION_MODES:
        raise ValueError(f"unknown propagation mode {propagate!r}")
    config = replace(config or SolverConfig(), lambda1=lambda1, lambda2=lambda2)
    X, Y = dataset.X, dataset.Y

    if dataset.task == "regression" or center_labels:
        y_means = Y.mean(axis=0)
    else:
        y_means = np.zeros(Y.shape[1])
    Yc = Y - y_means
    estimate = sparsa_fit(Yc, Yc, config)
    landmarks = select_landmarks(estimate)
    cols = list(landmarks)

    if dataset.task == "regression":
        # unpenalized intercept via centering
        x_means = X.mean(axis=0)
        W = ridge_solve(X - x_means, Y[:, cols] - y_means[cols], lambda_stage2)
        intercepts = y_means[cols] - x_means @ W
    else:
        W, intercepts = fit_logistic(X, Y[:, cols], lambda_stage2)

    return LandmarkModel(
        task=dataset.task,
        landmarks=landmarks,
        A_hat=estimate.A_hat,
        W=W,
        intercepts=np.asarray(intercepts, dtype=np.float64),
        y_means=y_means,
        lambda1=float(lambda1),
        lambda2=float(lambda2),
        lambda_stage2=float(lambda_stage2),
        propagate=propagate,
        objective=estimate.objective,
        iterations=estimate.iterations,
    )


def predict_landmarks(model, X_new):
    """Stage-2 output for the landmark coordinates only (shape m x s).

    Regression returns real values; classification returns probabilities.
    """
    X_new = as_matrix(X_new, "X_new")
    if X_new.shape[1] != model.n_inputs:
        raise DimensionError(
            f"model expects {model.n_inputs} input columns, got {X_new.shape[1]}")
    if model.task == "regression":
        return X_new @ model.W + model.intercepts
    return predict_proba(X_new, model.W, model.intercepts)


def predict(model, X_new):
    """Predict every output for the rows of ``X_new`` (shape m x k)."""
    stage2 = predict_landmarks(model, X_new)
    cols = list(model.landmarks)
    A_L = model.A_hat[cols, :]

    if model.task == "regression":
        means = model.y_means
        out = means + (stage2 - means[cols]) @ A_L
        out[:, cols] = stage2
        return out

    hard = (stage2 > 0.5).astype(np.float64)
    carrier = hard if model.propagate == "hard" else stage2
    means = model.y_means
    out = (means + (carrier - means[cols]) @ A_L > 0.5).astype(np.float64)
    out[:, cols] = hard
    return out


def _model_to_dict(model):
    return {
        "format": "moplms-model",
        "schema_version": model.schema_version,
        "kind": "landmark",
        "task": model.task,
        "n_outputs": model.n_outputs,
        "n_inputs": model.n_inputs,
        "landmarks": list(model.landmarks),
        "lambda1": model.lambda1,
        "lambda2": model.lambda2,
        "lambda_stage2": model.lambda_stage2,
        "propagate": model.propagate,
        "objective": model.objective,
        "iterations": model.iterations,
        "y_means": model.y_means.tolist(),
        "A_hat": model.A_hat.tolist(),
        "stage2": {
            "W": model.W.tolist(),
            "intercepts": model.intercepts.tolist(),
        },
    }


def save_model(model):
    """Serialize to a JSON document.

    Floats are written in shortest round-trip form, so loading reproduces
    every value bit for bit.
    """
    return json.dumps(_model_to_dict(model), indent=1)


def parse_document(document):
    try:
        doc = json.loads(document)
    except (json.JSONDecodeError, TypeError) as exc:
        raise ModelFormatError(f"malformed model document: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != "moplms-model":
        raise ModelFormatError("malformed model document: not a moplms model")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ModelFormatError(
            f"unsupported schema_version {version!r} (supported: {SCHEMA_VERSION})")
    return doc


def _array(doc, key, ndim):
    try:
        arr = np.array(doc[key], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"malformed model document: bad field {key!r}") from exc
    if arr.ndim != ndim:
        # empty 2-D lists collapse to 1-D
        if ndim == 2 and arr.size == 0:
            return arr.reshape(0, 0)
        raise ModelFormatError(f"malformed model document: field {key!r} has wrong rank")
    return arr


def load_model(document):
    doc = parse_document(document)
    if doc.get("kind") != "landmark":
        raise ModelFormatError(f"document holds a {doc.get('kind')!r} model, not a landmark model")
    try:
        stage2 = doc["stage2"]
        model = LandmarkModel(
            task=doc["task"],
            landmarks=tuple(int(i) for i in doc["landmarks"]),
            A_hat=_array(doc, "A_hat", 2),
            W=_array(stage2, "W", 2),
            intercepts=_array(stage2, "intercepts", 1),
            y_means=_array(doc, "y_means", 1),
            lambda1=float(doc["lambda1"]),
            lambda2=float(doc["lambda2"]),
            lambda_stage2=float(doc["lambda_stage2"]),
            propagate=doc.get("propagate", "hard"),
            schema_version=doc["schema_version"],
            objective=float(doc.get("objective", float("nan"))),
            iterations=int(doc.get("iterations", 0)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ModelFormatError):
            raise
        raise ModelFormatError(f"malformed model document: {exc!r}") from None
    k, s = model.A_hat.shape[0], len(model.landmarks)
    if (model.task not in TASKS or model.A_hat.shape != (k, k)
            or model.W.shape[1] != s or model.intercepts.shape != (s,)
            or model.y_means.shape != (k,)):
        raise ModelFormatError("malformed model document: inconsistent dimensions")
    return model
