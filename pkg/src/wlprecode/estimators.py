"""Scikit-learn style estimator wrappers around the precoding pipeline.

Each precoder is an estimator: ``fit(H)`` builds the precoder for one
channel realization (rows of H are users, columns are base-station
antennas), and ``transform(D)`` maps data symbols (K,) or (K, T) to the
complex N-antenna transmit signal, power allocation included. Parameters
follow sklearn conventions, so ``get_params``, ``set_params`` and
``clone`` work as usual.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .channel import augment_channel
from .config import SystemConfig
from .expansion import pe_apply
from .precoding import PrecoderKind, build_precoder
from .validation import check_channel_matrix, check_symbols


def _fit_precoder(est, kind: PrecoderKind, X):
    h = check_channel_matrix(X)
    k, n = h.shape
    cfg = SystemConfig(
        n_antennas=n, n_users=k, snr=est.snr, noise_variance=est.noise_variance
    )
    est.solution_ = build_precoder(kind, h, cfg)
    est.config_ = cfg
    est.n_users_ = k
    est.n_antennas_ = n
    est.delta_ = est.solution_.delta
    est.power_ = est.solution_.p
    return est


def _transmit(est, D) -> np.ndarray:
    check_is_fitted(est, "solution_")
    sol = est.solution_
    d = check_symbols(D, est.n_users_, real=sol.kind.widely_linear)
    scaled = (d.T * np.sqrt(sol.p)).T
    x = sol.v @ scaled
    if sol.kind.widely_linear:
        n = est.n_antennas_
        return x[:n] + 1j * x[n:]
    return x


class WlMmsePrecoder(BaseEstimator):
    """Widely-linear MMSE precoder for real-valued data symbols."""

    def __init__(self, snr=10.0, noise_variance=1.0):
        self.snr = snr
        self.noise_variance = noise_variance

    def fit(self, X, y=None):
        return _fit_precoder(self, PrecoderKind("wl_mmse"), X)

    def transform(self, D):
        return _transmit(self, D)


class WlZfPrecoder(BaseEstimator):
    """Widely-linear zero-forcing precoder; needs K <= 2N."""

    def __init__(self, snr=10.0, noise_variance=1.0):
        self.snr = snr
        self.noise_variance = noise_variance

    def fit(self, X, y=None):
        return _fit_precoder(self, PrecoderKind("wl_zf"), X)

    def transform(self, D):
        return _transmit(self, D)


class PeWlMmsePrecoder(BaseEstimator):
    """Polynomial-expansion WL-MMSE precoder.

    ``fit`` solves the moment system and the duality power allocation once;
    ``transform`` applies the precoder matrix-free with Horner's scheme, so
    one precoded vector costs O(order * K * N).
    """

    def __init__(self, order=4, snr=10.0, noise_variance=1.0):
        self.order = order
        self.snr = snr
        self.noise_variance = noise_variance

    def fit(self, X, y=None):
        from .expansion import pe_coefficients

        _fit_precoder(self, PrecoderKind("pe_wl_mmse", self.order), X)
        self.coefficients_ = pe_coefficients(self.order, self.config_)
        self.channel_aug_ = augment_channel(check_channel_matrix(X))
        return self

    def transform(self, D):
        check_is_fitted(self, "solution_")
        d = check_symbols(D, self.n_users_, real=True)
        scaled = (d.T * np.sqrt(self.solution_.p)).T
        x = pe_apply(self.channel_aug_, self.coefficients_, self.delta_, scaled)
        n = self.n_antennas_
        return x[:n] + 1j * x[n:]


class MmsePrecoder(BaseEstimator):
    """Conventional complex MMSE precoder (benchmark)."""

    def __init__(self, snr=10.0, noise_variance=1.0):
        self.snr = snr
        self.noise_variance = noise_variance

    def fit(self, X, y=None):
        return _fit_precoder(self, PrecoderKind("mmse"), X)

    def transform(self, D):
        return _transmit(self, D)


class ZfPrecoder(BaseEstimator):
    """Conventional complex zero-forcing precoder; needs K <= N."""

    def __init__(self, snr=10.0, noise_variance=1.0):
        self.snr = snr
        self.noise_variance = noise_variance

    def fit(self, X, y=None):
        return _fit_precoder(self, PrecoderKind("zf"), X)

    def transform(self, D):
        return _transmit(self, D)


class ConjugateBeamformer(BaseEstimator):
    """Conjugate beamforming (downlink matched filter) with uniform power."""

    def __init__(self, snr=10.0, noise_variance=1.0):
        self.snr = snr
        self.noise_variance = noise_variance

    def fit(self, X, y=None):
        return _fit_precoder(self, PrecoderKind("bf"), X)

    def transform(self, D):
        return _transmit(self, D)


_KIND_TO_CLASS = {
    "wl_mmse": WlMmsePrecoder,
    "wl_zf": WlZfPrecoder,
    "mmse": MmsePrecoder,
    "zf": ZfPrecoder,
    "bf": ConjugateBeamformer,
}


def make_precoder(kind, snr=10.0, noise_variance=1.0):
    """Estimator instance for a PrecoderKind or kind token like 'pe:4'."""
    if not isinstance(kind, PrecoderKind):
        kind = PrecoderKind.parse(str(kind))
    if kind.family == "pe_wl_mmse":
        return PeWlMmsePrecoder(
            order=kind.pe_order, snr=snr, noise_variance=noise_variance
        )
    return _KIND_TO_CLASS[kind.family](snr=snr, noise_variance=noise_variance)
