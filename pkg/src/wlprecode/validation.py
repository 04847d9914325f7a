"""Input validation helpers shared by the functional API and the estimators."""

import numpy as np

from .exceptions import ConfigurationError


def check_channel_matrix(x) -> np.ndarray:
    """Validate and return a K x N complex channel matrix."""
    h = np.asarray(x)
    if h.ndim != 2:
        raise ConfigurationError(f"channel matrix must be 2-D, got shape {h.shape}")
    if h.size == 0:
        raise ConfigurationError("channel matrix must be non-empty")
    if not np.all(np.isfinite(h.real)) or not np.all(np.isfinite(h.imag)):
        raise ConfigurationError("channel matrix contains non-finite entries")
    return h.astype(np.complex128, copy=False)


def check_augmented_channel(x) -> np.ndarray:
    """Validate a K x 2N real augmented channel matrix."""
    h = np.asarray(x, dtype=np.float64)
    if h.ndim != 2 or h.shape[1] % 2 != 0 or h.shape[1] == 0:
        raise ConfigurationError(
            f"augmented channel must be 2-D with an even column count, got {h.shape}"
        )
    return h


def check_augmented_precoder(x) -> np.ndarray:
    """Validate a 2N x K real augmented precoder matrix."""
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 2 or v.shape[0] % 2 != 0 or v.shape[0] == 0:
        raise ConfigurationError(
            f"augmented precoder must be 2-D with an even row count, got {v.shape}"
        )
    return v


def check_symbols(d, n_users: int, *, real: bool) -> np.ndarray:
    """Validate a symbol vector/matrix with K rows; real or complex field."""
    z = np.asarray(d)
    if z.ndim not in (1, 2) or z.shape[0] != n_users:
        raise ConfigurationError(
            f"symbols must have {n_users} rows, got shape {z.shape}"
        )
    if real:
        if np.iscomplexobj(z):
            raise ConfigurationError("widely-linear precoders transmit real-valued symbols")
        return z.astype(np.float64, copy=False)
    return z.astype(np.complex128, copy=False)


def check_dimensions_match(h: np.ndarray, cfg) -> None:
    """Channel shape must agree with the (K, N) recorded in the config."""
    if h.shape != (cfg.n_users, cfg.n_antennas):
        raise ConfigurationError(
            f"channel shape {h.shape} does not match config "
            f"(K={cfg.n_users}, N={cfg.n_antennas})"
        )
