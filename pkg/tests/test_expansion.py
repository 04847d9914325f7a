from fractions import Fraction
from math import comb

import numpy as np
import pytest

from wlprecode import (
    PeCoefficients,
    PolynomialOrderError,
    SystemConfig,
    asymptotic_moment,
    augment_channel,
    empirical_moments,
    generate_channel,
    normalize_rows,
    pe_apply,
    pe_coefficients,
    pe_detector_matrix,
    wl_mmse_detector,
)


def _cfg(n, k, snr_db=15.0):
    return SystemConfig(n_antennas=n, n_users=k, snr=10 ** (snr_db / 10.0))


def _reg_c(cfg):
    return cfg.real_noise_variance * cfg.n_users / (cfg.tx_power * cfg.n_antennas)


class TestAsymptoticMoment:
    def test_zeroth_and_first_are_one(self):
        for ratio in (0.1, 0.5, 1.0, 2.0):
            assert asymptotic_moment(0, ratio) == 1.0
            assert asymptotic_moment(1, ratio) == pytest.approx(1.0, rel=1e-15)

    def test_second_moment_hand_value(self):
        # sum collapses to 1 + ratio
        assert asymptotic_moment(2, 0.5) == pytest.approx(1.5, rel=1e-15)

    def test_third_moment_hand_value(self):
        # terms 1, 3*ratio, ratio^2 at ratio=1 give 5
        assert asymptotic_moment(3, 1.0) == pytest.approx(5.0, rel=1e-15)

    def test_exact_rational_reference(self):
        # independent evaluation in exact arithmetic
        for m in range(1, 9):
            for ratio in (Fraction(1, 4), Fraction(3, 4), Fraction(3, 2)):
                exact = sum(
                    Fraction(comb(m, i) * comb(m, i + 1), m) * ratio**i
                    for i in range(m)
                )
                assert asymptotic_moment(m, float(ratio)) == pytest.approx(
                    float(exact), rel=1e-12
                )

    def test_nondecreasing_in_ratio(self):
        grid = np.linspace(0.1, 2.0, 10)
        for m in (2, 3, 4, 5):
            values = [asymptotic_moment(m, r) for r in grid]
            assert np.all(np.diff(values) > 0)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            asymptotic_moment(-1, 0.5)
        with pytest.raises(ValueError):
            asymptotic_moment(2, 0.0)

    def test_monte_carlo_consistency(self):
        cfg = _cfg(256, 256)
        est = empirical_moments([1, 2, 3, 4], cfg, n_trials=40, seed=3)
        for m, value in zip([1, 2, 3, 4], est):
            exact = asymptotic_moment(m, cfg.beta / 2)
            assert abs(value - exact) / exact <= 0.02


class TestPeCoefficients:
    def test_order_zero_closed_form(self):
        cfg = _cfg(50, 75)
        c = _reg_c(cfg)
        coeffs = pe_coefficients(0, cfg)
        assert coeffs.omega[0] == pytest.approx(
            1.0 / (1.0 + cfg.beta / 2.0 + c), rel=1e-12
        )
        assert coeffs.reg_c == pytest.approx(c, rel=1e-15)

    @pytest.mark.parametrize("order", [1, 2, 3, 4, 5])
    def test_solving_system_residual(self, order):
        cfg = _cfg(50, 75)
        coeffs = pe_coefficients(order, cfg)
        c = coeffs.reg_c
        idx = np.arange(1, order + 2)
        system = np.array(
            [
                [
                    asymptotic_moment(m + n, cfg.beta / 2)
                    + c * asymptotic_moment(m + n - 1, cfg.beta / 2)
                    for n in idx
                ]
                for m in idx
            ]
        )
        rhs = np.array([asymptotic_moment(m, cfg.beta / 2) for m in idx])
        residual = np.linalg.norm(system @ coeffs.omega - rhs) / np.linalg.norm(rhs)
        assert residual <= 1e-10

    def test_order_cap(self):
        with pytest.raises(PolynomialOrderError):
            pe_coefficients(9, _cfg(50, 75))
        with pytest.raises(PolynomialOrderError):
            pe_coefficients(-1, _cfg(50, 75))


class TestPeDetectorMatrix:
    def test_order_zero_is_scaled_channel(self):
        cfg = _cfg(8, 6)
        h_aug = augment_channel(generate_channel(cfg, 61))
        coeffs = pe_coefficients(0, cfg)
        expected = coeffs.omega[0] * h_aug / cfg.n_antennas
        assert pe_detector_matrix(h_aug, coeffs) == pytest.approx(expected, rel=1e-14)

    def test_matches_explicit_power_sum(self):
        cfg = _cfg(8, 6)
        h_aug = augment_channel(generate_channel(cfg, 62))
        coeffs = pe_coefficients(3, cfg)
        a = h_aug.T @ h_aug / cfg.n_antennas
        total = np.zeros((6, 16))
        power = np.eye(16)
        for w in coeffs.omega:
            total += w * (h_aug / cfg.n_antennas) @ power
            power = power @ a
        assert np.linalg.norm(pe_detector_matrix(h_aug, coeffs) - total) <= 1e-10

    def test_approaches_wl_mmse_with_order(self):
        # average Frobenius distance to the exact detector shrinks with order
        cfg = _cfg(32, 48)
        orders = range(6)
        coeffs = [pe_coefficients(order, cfg) for order in orders]
        gaps = np.zeros(len(coeffs))
        for trial in range(100):
            h_aug = augment_channel(generate_channel(cfg, 6300 + trial))
            exact = wl_mmse_detector(h_aug, cfg)
            for i, cf in enumerate(coeffs):
                gaps[i] += np.linalg.norm(pe_detector_matrix(h_aug, cf) - exact)
        assert np.all(np.diff(gaps) < 0)


class TestPeApply:
    def test_matches_explicit_precoder(self):
        cfg = _cfg(16, 12)
        h_aug = augment_channel(generate_channel(cfg, 71))
        coeffs = pe_coefficients(4, cfg)
        u_norm, delta = normalize_rows(pe_detector_matrix(h_aug, coeffs))
        z = np.random.default_rng(72).standard_normal(12)
        assert np.linalg.norm(pe_apply(h_aug, coeffs, delta, z) - u_norm.T @ z) <= 1e-10

    def test_zero_vector(self):
        cfg = _cfg(16, 12)
        h_aug = augment_channel(generate_channel(cfg, 73))
        coeffs = pe_coefficients(2, cfg)
        delta = np.ones(12)
        assert np.array_equal(
            pe_apply(h_aug, coeffs, delta, np.zeros(12)), np.zeros(32)
        )

    def test_order_zero_formula(self):
        cfg = _cfg(16, 12)
        h_aug = augment_channel(generate_channel(cfg, 74))
        coeffs = pe_coefficients(0, cfg)
        delta = np.linspace(1.0, 2.0, 12)
        z = np.random.default_rng(75).standard_normal(12)
        expected = coeffs.omega[0] * h_aug.T @ (z / delta) / cfg.n_antennas
        assert pe_apply(h_aug, coeffs, delta, z) == pytest.approx(expected, rel=1e-12)

    def test_matrix_valued_symbols(self):
        cfg = _cfg(16, 12)
        h_aug = augment_channel(generate_channel(cfg, 76))
        coeffs = pe_coefficients(3, cfg)
        u_norm, delta = normalize_rows(pe_detector_matrix(h_aug, coeffs))
        z = np.random.default_rng(77).standard_normal((12, 5))
        assert np.linalg.norm(pe_apply(h_aug, coeffs, delta, z) - u_norm.T @ z) <= 1e-10

    def test_synthetic_coefficients_accepted(self):
        # Horner evaluation does not depend on the coefficient solver
        cfg = _cfg(16, 12)
        h_aug = augment_channel(generate_channel(cfg, 78))
        omega = np.array([1.0, -0.5, 0.25])
        coeffs = PeCoefficients(order=2, omega=omega, reg_c=0.0)
        u_norm, delta = normalize_rows(pe_detector_matrix(h_aug, coeffs))
        z = np.random.default_rng(79).standard_normal(12)
        assert np.linalg.norm(pe_apply(h_aug, coeffs, delta, z) - u_norm.T @ z) <= 1e-10
