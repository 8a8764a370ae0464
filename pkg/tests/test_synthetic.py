import numpy as np
import pytest

from moplms.experiments.synthetic import (SyntheticSpec, gen_ar1_returns,
                                          gen_synthetic_classification,
                                          gen_synthetic_regression, random_stable_matrix,
                                          spectral_radius)
from moplms.rng import stream


def test_noiseless_all_landmarks():
    spec = SyntheticSpec(k=5, d=4, s=5, n_train=20, n_test=5, sigma_landmark=0.0,
                         sigma_dependent=0.0)
    train, test, planted = gen_synthetic_regression(spec)
    np.testing.assert_array_equal(train.Y, train.X @ planted.W_star)
    np.testing.assert_array_equal(planted.A_star, np.eye(5))


def test_planted_structure():
    spec = SyntheticSpec(k=30, d=10, s=4, n_train=50, n_test=10, sigma_dependent=0.0)
    train, _, planted = gen_synthetic_regression(spec)
    assert planted.L_star == (0, 1, 2, 3)
    assert np.all(planted.A_star[4:] == 0)
    np.testing.assert_allclose(train.Y, train.Y @ planted.A_star, atol=1e-12)
    nz = np.abs(planted.dependency[planted.dependency != 0])
    assert np.all((nz >= 0.5) & (nz <= 1.5))
    assert np.all(np.count_nonzero(planted.dependency, axis=1) == spec.row_nnz)


@pytest.mark.parametrize("gen", [gen_synthetic_regression, gen_synthetic_classification])
def test_generators_deterministic(gen):
    spec = SyntheticSpec(k=12, d=5, s=3, n_train=30, n_test=10, seed=4)
    a, b = gen(spec), gen(spec)
    for x, y in zip(a[:2], b[:2]):
        assert x.X.tobytes() == y.X.tobytes() and x.Y.tobytes() == y.Y.tobytes()
    other = gen(SyntheticSpec(k=12, d=5, s=3, n_train=30, n_test=10, seed=5))
    assert other[0].X.tobytes() != a[0].X.tobytes()


def test_classification_is_median_split():
    spec = SyntheticSpec(k=8, d=5, s=2, n_train=100, n_test=20, seed=1)
    train, test, _ = gen_synthetic_classification(spec)
    assert train.task == "classification"
    np.testing.assert_array_equal(train.Y.mean(axis=0), 0.5)
    assert set(np.unique(test.Y)) <= {0.0, 1.0}


def test_spec_validation():
    with pytest.raises(ValueError):
        SyntheticSpec(k=3, d=2, s=4, n_train=5, n_test=5)
    with pytest.raises(ValueError):
        SyntheticSpec(k=3, d=2, s=2, n_train=5, n_test=5, within_row_density=0)


def test_stable_matrix():
    B = random_stable_matrix(6, 0.9, stream(0))
    assert spectral_radius(B) == pytest.approx(0.9)


def test_ar1_white_noise():
    spec = SyntheticSpec(k=8, d=1, s=3, n_train=1, n_test=1, seed=2)
    horizon = 2000
    data, _ = gen_ar1_returns(spec, np.zeros((3, 3)), horizon)
    for j in range(3):
        r = np.corrcoef(data.X[:, j], data.Y[:, j])[0, 1]
        assert abs(r) <= 3 / np.sqrt(horizon)


def test_ar1_structure_and_determinism():
    spec = SyntheticSpec(k=20, d=1, s=4, n_train=1, n_test=1, seed=3)
    B = random_stable_matrix(4, 0.8, stream(1))
    a, planted = gen_ar1_returns(spec, B, 50)
    b, _ = gen_ar1_returns(spec, B, 50)
    assert a.X.shape == (50, 20) and a.Y.shape == (50, 20)
    np.testing.assert_array_equal(a.X[1:], a.Y[:-1])
    assert a.Y.tobytes() == b.Y.tobytes()
    with pytest.raises(ValueError, match="not stable"):
        gen_ar1_returns(spec, 2 * np.eye(4), 10)
