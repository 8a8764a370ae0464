"""Sample-size sweep comparing the landmark model with the baselines."""

import numpy as np

from .cv import cross_validate, fit_method, relative_grid
from .metrics import evaluate
from .synthetic import SyntheticSpec, gen_synthetic_classification, gen_synthetic_regression

# Relative grids; see relative_grid for what each fraction multiplies.
REGRESSION_GRIDS = {
    "moplms": dict(fractions=(0.003, 0.01, 0.03, 0.1), stage2=(0.003, 0.03, 0.3)),
    "one_vs_all": dict(fractions=tuple(np.geomspace(1e-4, 1.0, 12))),
    "group_lasso": dict(fractions=tuple(np.geomspace(1e-3, 0.3, 12))),
    "low_rank": dict(fractions=tuple(np.geomspace(1e-4, 0.3, 12))),
}
CLASSIFICATION_GRIDS = {
    "moplms": dict(fractions=(0.03, 0.1, 0.3), stage2=(0.001, 0.01, 0.1)),
    "one_vs_all": dict(fractions=(0.0003, 0.001, 0.003, 0.01, 0.03, 0.1)),
}
NOT_IMPLEMENTED = ("mlcs", "ml-cca")


def default_grids(task):
    return REGRESSION_GRIDS if task == "regression" else CLASSIFICATION_GRIDS


def tuned_fit(method, train, folds=3, seed=0, grid=None):
    """Cross-validate ``method`` on ``train`` and refit on all of it.

    Returns ``(predict, best_cell)``.
    """
    kwargs = grid or default_grids(train.task)[method]
    cells = relative_grid(train, method, **kwargs)
    result = cross_validate(train, cells, folds=folds, method=method, seed=seed)
    return fit_method(method, train, result.best), result.best


def run_bench(k, d, s, n_grid, seeds, task="regression", n_test=200, methods=None,
              folds=3, **spec_kwargs):
    """Test metrics for every method, training size and seed.

    Returns a list of ``(method, n, seed, metric, value)`` rows. Regression
    reports ``mse``; classification reports ``hamming`` and ``f1``.
    """
    grids = default_grids(task)
    methods = tuple(methods or grids)
    unknown = [m for m in methods if m not in grids]
    if unknown:
        raise ValueError(f"method {unknown[0]!r} is not available for {task}")
    gen = gen_synthetic_regression if task == "regression" else gen_synthetic_classification
    metrics = ("mse",) if task == "regression" else ("hamming", "f1")
    rows = []
    for n in n_grid:
        for seed in seeds:
            spec = SyntheticSpec(k=k, d=d, s=s, n_train=n, n_test=n_test, seed=seed,
                                 **spec_kwargs)
            train, test, _ = gen(spec)
            for method in methods:
                predict, _ = tuned_fit(method, train, folds, seed)
                report = evaluate(test.Y, predict(test.X), task)
                for metric in metrics:
                    rows.append((method, n, seed, metric, float(getattr(report, metric))))
    return rows
