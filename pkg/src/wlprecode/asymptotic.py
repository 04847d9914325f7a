"""Closed-form large-system SINRs and sum rates.

Everything here is a scalar function of the load factor beta = K/N and the
effective noise ratio gamma = beta/snr: in the large-system limit the
per-user quantities lose their user index. The widely-linear results follow
from the complex ones by the substitution (beta, gamma) -> (beta/2, gamma/2).
"""

import math

import numpy as np

from .config import SystemConfig


def _check_domain(beta: float, gamma: float) -> None:
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")


def stieltjes(beta: float, gamma: float) -> float:
    """Stieltjes transform of the limiting Gram eigenvalue law at -gamma.

    Equals the normalized trace of ((1/N) H^H H + gamma I)^{-1} in the
    large-system limit; also the asymptotic MMSE SINR.
    """
    _check_domain(beta, gamma)
    radical = math.sqrt(
        (1.0 - beta) ** 2 / (4.0 * gamma**2) + (1.0 + beta) / (2.0 * gamma) + 0.25
    )
    return radical + (1.0 - beta) / (2.0 * gamma) - 0.5


def stieltjes_derivative(beta: float, gamma: float) -> float:
    """Analytic d/d(gamma) of :func:`stieltjes`; always negative."""
    _check_domain(beta, gamma)
    radical = math.sqrt(
        (1.0 - beta) ** 2 / (4.0 * gamma**2) + (1.0 + beta) / (2.0 * gamma) + 0.25
    )
    d_radical = -((1.0 - beta) ** 2 / gamma + (1.0 + beta)) / (4.0 * gamma**2 * radical)
    return d_radical - (1.0 - beta) / (2.0 * gamma**2)


def asymptotic_sinr_mmse(beta: float, gamma: float) -> float:
    """Asymptotic per-user SINR under complex MMSE filtering.

    Assembled literally as signal^2 / (interference + noise) from the
    Stieltjes transform and its derivative; algebraically this collapses
    to the transform itself, which the test suite asserts.
    """
    xi = stieltjes(beta, gamma)
    d_h = stieltjes_derivative(beta, gamma)
    psi = -d_h
    zeta = xi + gamma * d_h
    return xi * xi / (zeta + gamma * psi)


def asymptotic_sinr_wl_mmse(beta: float, gamma: float) -> float:
    """Asymptotic per-user SINR under widely-linear MMSE filtering.

    The augmented channel doubles the column dimension and halves the
    effective noise, shifting the complex result to (beta/2, gamma/2).
    """
    return asymptotic_sinr_mmse(beta / 2.0, gamma / 2.0)


def _per_user_rate(family: str, beta: float, gamma: float) -> float:
    if family == "mmse":
        return math.log2(1.0 + asymptotic_sinr_mmse(beta, gamma))
    if family == "wl_mmse":
        return 0.5 * math.log2(1.0 + asymptotic_sinr_wl_mmse(beta, gamma))
    raise ValueError(f"no closed-form sum rate for kind {family!r}")


def asymptotic_sum_rate(kind, cfg: SystemConfig) -> float:
    """Asymptotic downlink sum rate in bits/s/Hz for MMSE or WL-MMSE.

    ``kind`` may be a PrecoderKind or a family string. The widely-linear
    rate carries the 0.5 prefactor of real-valued data symbols.
    """
    family = getattr(kind, "family", kind)
    return cfg.n_users * _per_user_rate(family, cfg.beta, cfg.gamma)


def analytic_curves(betas, n_antennas: int, snr: float) -> dict[str, np.ndarray]:
    """Tabulate SINR and sum-rate curves over a beta grid (no rounding of K).

    Used by the CLI: rates are beta * N * per-user-rate, continuous in beta.
    Raises ValueError naming the offending grid point on domain errors.
    """
    betas = np.asarray(list(betas), dtype=np.float64)
    out = {
        "beta": betas,
        "gamma": betas / snr,
        "sinr_mmse": np.empty_like(betas),
        "sinr_wl_mmse": np.empty_like(betas),
        "sum_rate_mmse": np.empty_like(betas),
        "sum_rate_wl_mmse": np.empty_like(betas),
    }
    for i, beta in enumerate(betas):
        gamma = beta / snr
        try:
            out["sinr_mmse"][i] = asymptotic_sinr_mmse(beta, gamma)
            out["sinr_wl_mmse"][i] = asymptotic_sinr_wl_mmse(beta, gamma)
            out["sum_rate_mmse"][i] = beta * n_antennas * _per_user_rate("mmse", beta, gamma)
            out["sum_rate_wl_mmse"][i] = beta * n_antennas * _per_user_rate(
                "wl_mmse", beta, gamma
            )
        except ValueError as exc:
            raise ValueError(f"invalid grid point beta={beta}: {exc}") from None
    return out
