import math

import mpmath
import numpy as np
import pytest

from wlprecode import (
    MMSE,
    SystemConfig,
    analytic_curves,
    asymptotic_sinr_mmse,
    asymptotic_sinr_wl_mmse,
    asymptotic_sum_rate,
    generate_channel,
    stieltjes,
    stieltjes_derivative,
)

GRID = [(b, g) for b in (0.1, 0.5, 1.0, 1.5, 2.0) for g in (1e-3, 1e-2, 0.1, 1.0, 10.0)]
# Finite differences with the contractual step 1e-6*gamma are themselves
# rounding-limited when the radical dwarfs the transform (overloaded beta at
# gamma ~ 1e-3), so the FD comparison samples gamma >= 0.01.
FD_GRID = [(b, g) for b in (0.1, 0.5, 1.0, 1.5, 2.0) for g in (1e-2, 0.1, 1.0, 10.0)]


def _stieltjes_mp(beta, gamma):
    """50-digit reference evaluation of the closed form."""
    with mpmath.workdps(50):
        b, g = mpmath.mpf(beta), mpmath.mpf(gamma)
        radical = mpmath.sqrt(
            (1 - b) ** 2 / (4 * g**2) + (1 + b) / (2 * g) + mpmath.mpf(1) / 4
        )
        return float(radical + (1 - b) / (2 * g) - mpmath.mpf(1) / 2)


class TestStieltjes:
    def test_no_interference_limit(self):
        # beta -> 0: the radical collapses and the value tends to 1/gamma
        assert abs(stieltjes(1e-9, 0.5) - 2.0) <= 1e-6

    def test_hand_value_beta_gamma_one(self):
        assert stieltjes(1.0, 1.0) == pytest.approx(math.sqrt(1.25) - 0.5, rel=1e-14)

    @pytest.mark.parametrize("beta,gamma", GRID)
    def test_against_high_precision_reference(self, beta, gamma):
        assert stieltjes(beta, gamma) == pytest.approx(
            _stieltjes_mp(beta, gamma), rel=1e-12
        )

    def test_monotone_decreasing_in_gamma(self):
        for beta in (0.3, 1.0, 1.7):
            gammas = np.logspace(-3, 1, 12)
            values = [stieltjes(beta, g) for g in gammas]
            assert np.all(np.diff(values) < 0)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            stieltjes(1.0, 0.0)
        with pytest.raises(ValueError):
            stieltjes(0.0, 1.0)
        with pytest.raises(ValueError):
            stieltjes(1.0, -0.5)

    def test_monte_carlo_eigenvalue_oracle(self):
        # average of 1/(s+gamma) over Gram eigenvalues at N=K=512
        beta, gamma = 1.0, 1.0
        cfg = SystemConfig(n_antennas=512, n_users=512, snr=1.0)
        acc = 0.0
        trials = 3
        for seed in range(trials):
            h = generate_channel(cfg, seed)
            lam = np.linalg.eigvalsh(h.conj().T @ h / cfg.n_antennas)
            acc += np.mean(1.0 / (lam + gamma))
        assert abs(acc / trials - stieltjes(beta, gamma)) / stieltjes(beta, gamma) <= 0.01


class TestStieltjesDerivative:
    def test_no_interference_limit(self):
        gamma = 0.5
        assert abs(stieltjes_derivative(1e-9, gamma) + 1.0 / gamma**2) <= 1e-6 / gamma**2

    @pytest.mark.parametrize("beta,gamma", FD_GRID)
    def test_finite_difference_agreement(self, beta, gamma):
        h = 1e-6 * gamma
        fd = (stieltjes(beta, gamma + h) - stieltjes(beta, gamma - h)) / (2 * h)
        assert stieltjes_derivative(beta, gamma) == pytest.approx(fd, rel=1e-5)

    @pytest.mark.parametrize("beta,gamma", GRID)
    def test_always_negative(self, beta, gamma):
        assert stieltjes_derivative(beta, gamma) < 0


class TestAsymptoticSinr:
    @pytest.mark.parametrize("beta,gamma", GRID)
    def test_collapse_identity(self, beta, gamma):
        # zeta + gamma psi == xi algebraically, so the assembled SINR must
        # coincide with the Stieltjes transform itself
        assert asymptotic_sinr_mmse(beta, gamma) == pytest.approx(
            stieltjes(beta, gamma), rel=1e-12
        )

    def test_fig3_regime_values(self):
        assert asymptotic_sinr_mmse(1.5, 0.015) == pytest.approx(
            _stieltjes_mp(1.5, 0.015), rel=1e-12
        )
        assert asymptotic_sinr_wl_mmse(1.5, 0.015) == pytest.approx(
            _stieltjes_mp(0.75, 0.0075), rel=1e-12
        )
        # reference magnitudes for the overloaded 20 dB point
        assert asymptotic_sinr_mmse(1.5, 0.015) == pytest.approx(1.846, rel=0.01)
        assert asymptotic_sinr_wl_mmse(1.5, 0.015) == pytest.approx(36.03, rel=0.01)

    def test_widely_linear_wins_when_overloaded(self):
        assert asymptotic_sinr_wl_mmse(1.5, 0.015) > asymptotic_sinr_mmse(1.5, 0.015)

    def test_halved_parameter_mapping_is_exact(self):
        for beta, gamma in GRID:
            assert asymptotic_sinr_wl_mmse(beta, gamma) == asymptotic_sinr_mmse(
                beta / 2, gamma / 2
            )

    def test_array_gain_limit(self):
        gamma = 0.01
        assert asymptotic_sinr_mmse(1e-9, gamma) == pytest.approx(1 / gamma, rel=1e-6)


class TestAsymptoticSumRate:
    def test_fig3_reference_values(self):
        cfg = SystemConfig(n_antennas=100, n_users=150, snr=100.0)
        r_wl = asymptotic_sum_rate("wl_mmse", cfg)
        r_mmse = asymptotic_sum_rate(MMSE, cfg)
        assert r_wl == pytest.approx(390.9, rel=0.01)
        assert r_mmse == pytest.approx(226.3, rel=0.01)
        # high-precision self-consistency with the SINR engine
        assert r_wl == pytest.approx(
            0.5 * 150 * math.log2(1 + asymptotic_sinr_wl_mmse(1.5, 0.015)), rel=1e-12
        )

    def test_linear_in_users_at_fixed_load(self):
        small = SystemConfig(n_antennas=100, n_users=150, snr=100.0)
        large = SystemConfig(n_antennas=200, n_users=300, snr=100.0)
        assert asymptotic_sum_rate("mmse", large) == pytest.approx(
            2 * asymptotic_sum_rate("mmse", small), rel=1e-12
        )

    def test_unsupported_kind_rejected(self):
        cfg = SystemConfig(n_antennas=4, n_users=2, snr=10.0)
        with pytest.raises(ValueError):
            asymptotic_sum_rate("wl_zf", cfg)


class TestAnalyticCurves:
    def test_sorted_and_consistent(self):
        curves = analytic_curves([0.5, 1.0, 1.5], 100, 100.0)
        assert np.all(np.diff(curves["beta"]) > 0)
        assert curves["sum_rate_wl_mmse"][2] == pytest.approx(390.9, rel=0.01)
        assert curves["sum_rate_mmse"][2] == pytest.approx(226.3, rel=0.01)

    def test_low_load_array_gain(self):
        beta, n, snr = 0.01, 100, 100.0
        curves = analytic_curves([beta], n, snr)
        per_user = curves["sum_rate_mmse"][0] / (beta * n)
        assert per_user == pytest.approx(math.log2(1 + snr / beta), rel=0.01)

    def test_domain_error_names_grid_point(self):
        with pytest.raises(ValueError, match="beta=0.0"):
            analytic_curves([0.0, 0.5], 100, 100.0)
