import numpy as np
import pytest

from wlprecode import (
    ConfigurationError,
    SystemConfig,
    augment_channel,
    deaugment_precoder,
    generate_channel,
    real_equivalence_residual,
)


def test_same_seed_same_matrix():
    cfg = SystemConfig(n_antennas=2, n_users=2, snr=10.0)
    a = generate_channel(cfg, 123)
    b = generate_channel(cfg, 123)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, generate_channel(cfg, 124))


def test_single_entry_shape():
    cfg = SystemConfig(n_antennas=1, n_users=1, snr=10.0)
    assert generate_channel(cfg, 0).shape == (1, 1)


def test_entry_statistics_large_sample():
    cfg = SystemConfig(n_antennas=256, n_users=256, snr=10.0)
    h = generate_channel(cfg, 2024)
    var = np.mean(np.abs(h) ** 2)
    assert 0.98 <= var <= 1.02
    # circular symmetry: both parts carry half the variance
    assert np.var(h.real) == pytest.approx(0.5, rel=0.03)
    assert np.var(h.imag) == pytest.approx(0.5, rel=0.03)
    assert abs(np.mean(h)) < 0.01


def test_augment_definition():
    h = np.array([[1.0 + 2.0j]])
    assert np.array_equal(augment_channel(h), np.array([[1.0, -2.0]]))


def test_augment_real_channel_zero_block():
    h = np.array([[3.0, -1.0], [0.5, 2.0]], dtype=complex)
    h_aug = augment_channel(h)
    assert np.array_equal(h_aug[:, :2], h.real)
    assert np.array_equal(h_aug[:, 2:], np.zeros((2, 2)))


def test_augment_isometry():
    rng = np.random.default_rng(5)
    for _ in range(5):
        h = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
        assert np.linalg.norm(augment_channel(h)) == pytest.approx(
            np.linalg.norm(h), rel=1e-14
        )


def test_deaugment_basis_vectors():
    assert deaugment_precoder(np.array([[1.0], [0.0]])) == np.array([[1.0 + 0.0j]])
    assert deaugment_precoder(np.array([[0.0], [1.0]])) == np.array([[1.0j]])


def test_deaugment_round_trip():
    rng = np.random.default_rng(6)
    v_aug = rng.standard_normal((8, 3))
    v = deaugment_precoder(v_aug)
    rebuilt = np.vstack([v.real, v.imag])
    assert np.array_equal(rebuilt, v_aug)


def test_deaugment_odd_rows_rejected():
    with pytest.raises(ConfigurationError):
        deaugment_precoder(np.zeros((5, 2)))


def test_real_equivalence_random():
    rng = np.random.default_rng(7)
    for seed in range(10):
        h = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
        v_aug = rng.standard_normal((8, 3))
        s = rng.standard_normal(3)
        assert real_equivalence_residual(h, v_aug, s) <= 1e-10


def test_real_equivalence_degenerate_inputs():
    rng = np.random.default_rng(8)
    h = rng.standard_normal((3, 4)) + 1j * rng.standard_normal((3, 4))
    v_aug = rng.standard_normal((8, 3))
    assert real_equivalence_residual(h, v_aug, np.zeros(3)) == 0.0
    assert real_equivalence_residual(h, np.zeros((8, 3)), rng.standard_normal(3)) == 0.0
