import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from moplms.exceptions import DimensionError
from moplms.experiments.metrics import evaluate, f1_score, hamming_loss, mse

binary = arrays(np.float64, (5, 6), elements=st.sampled_from([0.0, 1.0]))
Y = np.array([[1, 0, 1, 0]])
Y_HAT = np.array([[1, 1, 0, 0]])


def test_hamming_examples():
    assert hamming_loss(Y, Y) == 0.0
    assert hamming_loss(Y, Y_HAT) == 0.5
    assert hamming_loss(Y, 1 - Y) == 1.0


def test_f1_examples():
    assert f1_score(Y, Y) == 1.0
    assert f1_score(Y, Y_HAT) == 0.5
    assert f1_score(np.zeros((1, 4)), np.zeros((1, 4))) == 1.0


def test_mse_examples():
    assert mse(Y, Y) == 0.0
    assert mse(np.zeros((2, 2)), np.ones((2, 2))) == 1.0
    rng = np.random.default_rng(0)
    A, B = rng.normal(size=(4, 3)), rng.normal(size=(4, 3))
    total = 0.0
    for i in range(4):
        for j in range(3):
            total += (A[i, j] - B[i, j]) ** 2
    assert mse(A, B) == pytest.approx(total / 12, rel=1e-14)


@given(binary, binary)
def test_hamming_is_mismatch_fraction(a, b):
    assert hamming_loss(a, b) == pytest.approx(np.mean(a != b), abs=1e-15)


@given(binary, binary, st.permutations(range(6)))
def test_column_permutation_symmetry(a, b, perm):
    assert hamming_loss(a[:, perm], b[:, perm]) == pytest.approx(hamming_loss(a, b), abs=1e-15)
    assert f1_score(a[:, perm], b[:, perm]) == pytest.approx(f1_score(a, b), abs=1e-15)


@given(arrays(np.float64, (3, 4), elements=st.floats(-1e3, 1e3)),
       arrays(np.float64, (3, 4), elements=st.floats(-1e3, 1e3)))
def test_mse_symmetric(a, b):
    assert mse(a, b) == mse(b, a)


def test_shape_mismatch_names_both():
    with pytest.raises(DimensionError, match="2x3.*2x4"):
        mse(np.zeros((2, 3)), np.zeros((2, 4)))


def test_non_binary_rejected():
    with pytest.raises(ValueError, match="other than 0 and 1"):
        hamming_loss(Y, Y * 0.5)


def test_evaluate():
    report = evaluate(Y, Y_HAT, "classification")
    assert report.rows() == [("hamming", 0.5), ("f1", 0.5)]
    assert evaluate(Y, Y, "regression").rows() == [("mse", 0.0)]
