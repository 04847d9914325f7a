"""Polynomial expansion of the widely-linear MMSE inverse.

The regularized inverse in the WL-MMSE detector is replaced by a low-order
matrix polynomial whose coefficients depend only on the load factor and
SNR, never on the channel realization. Coefficients come from a small
moment system built on the limiting eigenvalue moments of the channel
Gram; application is matrix-free via Horner's scheme.
"""

from dataclasses import dataclass
from math import comb

import numpy as np

from .config import SystemConfig
from .exceptions import PolynomialOrderError
from .validation import check_augmented_channel

# Moment matrices are Hankel-like and blow up quickly; beyond this order the
# solve returns garbage silently, so refuse loudly instead.
MAX_ORDER = 8
COEFF_RCOND_MIN = 1e-13


def asymptotic_moment(m: int, ratio: float) -> float:
    """Limiting m-th eigenvalue moment of a sample Gram matrix.

    ``ratio`` is the rows/columns aspect ratio of the underlying random
    matrix; for the augmented K x 2N channel pass beta / 2. Moments are
    normalized over the K nonzero eigenvalues so the first moment is 1.
    """
    if m < 0:
        raise ValueError(f"moment order must be >= 0, got {m}")
    if not ratio > 0:
        raise ValueError(f"ratio must be positive, got {ratio}")
    if m == 0:
        return 1.0
    return sum(comb(m, i) * comb(m, i + 1) * ratio**i for i in range(m)) / m


@dataclass(frozen=True)
class PeCoefficients:
    """Polynomial order, coefficient vector omega_0..omega_L, regularizer."""

    order: int
    omega: np.ndarray
    reg_c: float


def pe_coefficients(order: int, cfg: SystemConfig) -> PeCoefficients:
    """Solve the moment system for the expansion coefficients.

    With one-based moment indices m, n in {1..L+1} mapped onto the
    coefficients omega_0..omega_L, the system matrix holds
    ``moment(m+n) + c * moment(m+n-1)`` at effective ratio beta/2 and the
    right-hand side holds ``moment(m)``, where
    c = (0.5 sigma_n^2 / P_TX)(K/N). Channel-independent by construction.
    """
    if order < 0:
        raise PolynomialOrderError(f"order must be >= 0, got {order}")
    if order > MAX_ORDER:
        raise PolynomialOrderError(
            f"order {order} exceeds the supported maximum {MAX_ORDER}"
        )
    ratio = cfg.beta / 2.0
    c = (cfg.real_noise_variance / cfg.tx_power) * (cfg.n_users / cfg.n_antennas)
    idx = np.arange(1, order + 2)
    xi = {m: asymptotic_moment(m, ratio) for m in range(0, 2 * order + 3)}
    system = np.array(
        [[xi[m + n] + c * xi[m + n - 1] for n in idx] for m in idx]
    )
    rhs = np.array([xi[m] for m in idx])
    rcond = 1.0 / np.linalg.cond(system)
    if not np.isfinite(rcond) or rcond < COEFF_RCOND_MIN:
        raise PolynomialOrderError(
            f"moment system too ill-conditioned at order {order} "
            f"(rcond={rcond:.2e}); reduce the order"
        )
    omega = np.linalg.solve(system, rhs)
    return PeCoefficients(order=order, omega=omega, reg_c=c)


def pe_detector_matrix(h_aug: np.ndarray, coeffs: PeCoefficients) -> np.ndarray:
    """Explicit K x 2N polynomial detector (1/N) H~ sum_l omega_l A^l.

    Evaluated by Horner on the K x 2N block, so the 2N x 2N Gram power
    A^l = ((1/N) H~^T H~)^l is never formed.
    """
    h_aug = check_augmented_channel(h_aug)
    n = h_aug.shape[1] // 2
    omega = coeffs.omega
    acc = omega[-1] * h_aug
    for w in omega[-2::-1]:
        acc = (acc @ h_aug.T) @ h_aug / n + w * h_aug
    return acc / n


def pe_apply(
    h_aug: np.ndarray,
    coeffs: PeCoefficients,
    delta: np.ndarray,
    z: np.ndarray,
) -> np.ndarray:
    """Apply the normalized polynomial precoder to a vector, matrix-free.

    Computes V_pe @ z as sum_l omega_l A^l ((1/N) H~^T (z / delta)) with
    Horner's scheme; only matrix-vector products with H~ are used, so one
    precoded vector costs O(L K N). ``delta`` must be the row norms of the
    polynomial detector (from :func:`wlprecode.precoding.normalize_rows`).
    """
    h_aug = check_augmented_channel(h_aug)
    n = h_aug.shape[1] // 2
    z = np.asarray(z, dtype=np.float64)
    w = (z.T / delta).T
    y = h_aug.T @ w / n
    omega = coeffs.omega
    acc = omega[-1] * y
    for coeff in omega[-2::-1]:
        acc = h_aug.T @ (h_aug @ acc) / n + coeff * y
    return acc
