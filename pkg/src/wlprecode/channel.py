"""Rayleigh channel generation and the augmented real-valued representation.

The augmented convention is normative for the whole package:

* channel:  ``H_aug = [Re(H), -Im(H)]`` with shape (K, 2N),
* precoder: ``V_aug = [Re(V); Im(V)]`` with shape (2N, K),

so that ``Re(H @ V @ s) == H_aug @ V_aug @ s`` for every real symbol
vector ``s``.
"""

import numpy as np

from .config import SystemConfig
from .validation import check_augmented_precoder, check_channel_matrix


def generate_channel(cfg: SystemConfig, seed) -> np.ndarray:
    """Draw one K x N i.i.d. Rayleigh fading channel realization.

    Entries are circularly-symmetric complex Gaussian with zero mean and
    unit variance (real and imaginary parts independent N(0, 0.5)).
    The same seed and dimensions reproduce the matrix bit for bit.
    """
    rng = np.random.default_rng(seed)
    shape = (cfg.n_users, cfg.n_antennas)
    h = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return np.sqrt(0.5) * h


def augment_channel(h) -> np.ndarray:
    """Map a complex K x N channel to its K x 2N real augmented form."""
    h = check_channel_matrix(h)
    return np.hstack([h.real, -h.imag])


def deaugment_precoder(v_aug) -> np.ndarray:
    """Reassemble the complex N x K precoder from its 2N x K augmented form."""
    v_aug = check_augmented_precoder(v_aug)
    n = v_aug.shape[0] // 2
    return v_aug[:n] + 1j * v_aug[n:]


def real_equivalence_residual(h, v_aug, symbols) -> float:
    """Residual norm between the complex and augmented downlink models.

    Returns ``||Re(H V s) - H_aug V_aug s||`` for a real symbol vector s;
    an algebraic identity, so the result is zero up to rounding.
    """
    h = check_channel_matrix(h)
    v_aug = check_augmented_precoder(v_aug)
    s = np.asarray(symbols, dtype=np.float64)
    v = deaugment_precoder(v_aug)
    lhs = np.real(h @ (v @ s))
    rhs = augment_channel(h) @ (v_aug @ s)
    return float(np.linalg.norm(lhs - rhs))
