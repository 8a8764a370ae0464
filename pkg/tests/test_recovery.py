import numpy as np
import pytest

from moplms.experiments.recovery import (incoherent_dependency, recovery_experiment,
                                         support_overlap_phi)
from moplms.rng import stream


def test_phi_orthonormal():
    assert support_overlap_phi(np.eye(3, 7), np.eye(3)) == pytest.approx(1.0)


def test_phi_identical_rows():
    v = np.arange(1.0, 6.0)
    assert support_overlap_phi(np.tile(v, (4, 1)), np.eye(4)) == pytest.approx(4.0, rel=1e-8)


def test_phi_bounds():
    rng = np.random.default_rng(0)
    for _ in range(20):
        A = rng.normal(size=(4, 9))
        phi = support_overlap_phi(A, np.eye(4))
        assert 1.0 - 1e-8 <= phi <= 4.0 + 1e-8


def test_phi_rejects_bad_covariance():
    with pytest.raises(ValueError):
        support_overlap_phi(np.eye(2, 4), -np.eye(2))
    with pytest.raises(ValueError):
        support_overlap_phi(np.eye(2, 4), np.eye(3))


def test_incoherent_dependency_rows():
    block = incoherent_dependency(4, 30, stream(1))
    np.testing.assert_allclose(np.linalg.norm(block, axis=1), 1.0)
    assert np.all(np.count_nonzero(block, axis=0) <= 1)


def test_recovery_far_below_s():
    result = recovery_experiment(60, 6, [3], 10, 0.1, seed=0)
    assert result.recovery_rate[0] <= 0.1


def test_recovery_noiseless_rate():
    n = int(np.ceil(10 * 6 * np.log(60 - 6)))
    result = recovery_experiment(60, 6, [n], 20, 0.0, seed=1)
    assert result.recovery_rate[0] >= 0.9


def test_recovery_deterministic():
    a = recovery_experiment(20, 3, [20, 40], 3, 0.1, seed=5)
    b = recovery_experiment(20, 3, [20, 40], 3, 0.1, seed=5)
    assert a == b


def test_recovery_argument_checks():
    with pytest.raises(ValueError):
        recovery_experiment(20, 3, [40, 20], 3, 0.1, seed=0)
    with pytest.raises(ValueError):
        recovery_experiment(20, 20, [40], 3, 0.1, seed=0)
