"""Precoder construction through the dual-uplink pipeline.

Every duality-based precoder is built the same way: form an unnormalized
uplink detector, normalize its rows, transpose it into a unit-column
precoder, evaluate the dual-uplink SINRs under uniform uplink powers, and
solve the duality system for downlink powers that reproduce those SINRs.
Widely-linear kinds run the pipeline over the augmented real field with
half the noise variance; the complex benchmarks run it over the complex
field unchanged.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.linalg.lapack import dpocon, zpocon

from .channel import augment_channel
from .config import SystemConfig
from .exceptions import (
    ConfigurationError,
    DegenerateChannelError,
    InfeasiblePrecoderError,
)
from .validation import check_channel_matrix, check_dimensions_match

# Reciprocal condition estimate below which a zero-forcing Gram matrix is
# declared numerically singular.
ZF_RCOND_MIN = 1e-12
# Allocated powers may round to tiny negatives; anything below this is an error.
NEGATIVE_POWER_TOL = 1e-12

_FAMILIES = ("wl_mmse", "wl_zf", "pe_wl_mmse", "mmse", "zf", "bf")
_WIDELY_LINEAR = frozenset({"wl_mmse", "wl_zf", "pe_wl_mmse"})


@dataclass(frozen=True)
class PrecoderKind:
    """A precoder family plus, for polynomial expansion, its order."""

    family: str
    pe_order: int | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ConfigurationError(f"unknown precoder family {self.family!r}")
        if self.family == "pe_wl_mmse":
            if self.pe_order is None or self.pe_order < 0:
                raise ConfigurationError("pe_wl_mmse requires pe_order >= 0")
        elif self.pe_order is not None:
            raise ConfigurationError(f"{self.family} does not take a pe_order")

    @property
    def widely_linear(self) -> bool:
        return self.family in _WIDELY_LINEAR

    @property
    def uses_duality(self) -> bool:
        return self.family != "bf"

    @property
    def noise_factor(self) -> float:
        """Noise-variance scale in SINR denominators: 0.5 for the real-part
        (widely-linear) pipeline, 1 for the complex one."""
        return 0.5 if self.widely_linear else 1.0

    @property
    def rate_factor(self) -> float:
        """Per-user rate prefactor: real symbols carry half a complex dimension."""
        return 0.5 if self.widely_linear else 1.0

    @property
    def label(self) -> str:
        if self.family == "pe_wl_mmse":
            return f"pe:{self.pe_order}"
        return self.family

    @classmethod
    def parse(cls, token: str) -> "PrecoderKind":
        token = token.strip().lower()
        if token.startswith("pe:"):
            try:
                order = int(token[3:])
            except ValueError:
                raise ConfigurationError(f"bad polynomial order in {token!r}") from None
            return cls("pe_wl_mmse", order)
        return cls(token)


WL_MMSE = PrecoderKind("wl_mmse")
WL_ZF = PrecoderKind("wl_zf")
MMSE = PrecoderKind("mmse")
ZF = PrecoderKind("zf")
CONJUGATE_BF = PrecoderKind("bf")


def pe_wl_mmse(order: int) -> PrecoderKind:
    """Polynomial-expansion WL-MMSE kind of the given order."""
    return PrecoderKind("pe_wl_mmse", order)


@dataclass(frozen=True)
class DualUplinkReport:
    """Dual-uplink SINRs and the ingredients of the duality power system.

    ``big_b[m, n] == |row n of the channel . column m of the precoder|**2``
    (the uplink gain matrix), and ``b`` is the per-user duality vector
    SINR / ((1 + SINR) * |diagonal gain|^2). ``noise_factor`` records the
    noise scale (0.5 real pipeline, 1.0 complex) the SINRs were computed
    with.
    """

    sinr_ul: np.ndarray
    b: np.ndarray
    big_b: np.ndarray
    noise_factor: float


@dataclass(frozen=True)
class PrecoderSolution:
    """A built precoder: unit-column matrix, powers, and scaling factors.

    ``v`` is real 2N x K (augmented) for widely-linear kinds and complex
    N x K otherwise. ``p`` sums to the transmit budget; ``delta`` holds the
    row norms of the unnormalized detector. ``uplink`` carries the
    dual-uplink report for duality-allocated kinds (None for conjugate BF).
    """

    kind: PrecoderKind
    v: np.ndarray
    p: np.ndarray
    delta: np.ndarray
    uplink: DualUplinkReport | None = None


def _spd_solve(gram: np.ndarray, rhs: np.ndarray, *, rcond_min: float | None):
    """Solve gram @ X = rhs via Cholesky; optionally guard the conditioning."""
    try:
        factor = cho_factor(gram)
    except np.linalg.LinAlgError as exc:
        raise InfeasiblePrecoderError(f"Gram matrix is not positive definite: {exc}")
    if rcond_min is not None:
        pocon = zpocon if np.iscomplexobj(gram) else dpocon
        rcond, info = pocon(factor[0], np.linalg.norm(gram, 1))
        if info != 0 or rcond < rcond_min:
            raise InfeasiblePrecoderError(
                f"Gram matrix numerically singular (rcond={rcond:.2e} < {rcond_min:.0e})"
            )
    return cho_solve(factor, rhs)


def wl_mmse_detector(h_aug: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    """Unnormalized widely-linear MMSE uplink detector, K x 2N real.

    Solves (1/N) H_aug ((1/N) H_aug^T H_aug + c I)^{-1} with the
    regularizer c = (0.5 sigma_n^2 / P_TX) (K / N); the regularized Gram is
    symmetric positive definite for any positive noise variance.
    """
    n = cfg.n_antennas
    if h_aug.shape != (cfg.n_users, 2 * n):
        raise ConfigurationError(
            f"augmented channel shape {h_aug.shape} does not match config"
        )
    c = (cfg.real_noise_variance / cfg.tx_power) * (cfg.n_users / n)
    gram = h_aug.T @ h_aug / n + c * np.eye(2 * n)
    return _spd_solve(gram, h_aug.T / n, rcond_min=None).T


def wl_zf_detector(h_aug: np.ndarray) -> np.ndarray:
    """Unnormalized widely-linear zero-forcing detector (H~ H~^T)^{-1} H~."""
    k, two_n = h_aug.shape
    if k > two_n:
        raise InfeasiblePrecoderError(
            f"widely-linear ZF needs K <= 2N, got K={k}, 2N={two_n}"
        )
    gram = h_aug @ h_aug.T
    return _spd_solve(gram, h_aug, rcond_min=ZF_RCOND_MIN)


def mmse_detector(h: np.ndarray, cfg: SystemConfig) -> np.ndarray:
    """Unnormalized complex MMSE detector H (H^H H + (sigma_n^2/rho) I)^{-1}."""
    h = check_channel_matrix(h)
    check_dimensions_match(h, cfg)
    n = cfg.n_antennas
    gram = h.conj().T @ h + (cfg.noise_variance / cfg.rho) * np.eye(n)
    return _spd_solve(gram, h.conj().T, rcond_min=None).conj().T


def zf_detector(h: np.ndarray) -> np.ndarray:
    """Unnormalized complex zero-forcing detector (H H^H)^{-1} H."""
    h = check_channel_matrix(h)
    k, n = h.shape
    if k > n:
        raise InfeasiblePrecoderError(f"ZF needs K <= N, got K={k}, N={n}")
    gram = h @ h.conj().T
    return _spd_solve(gram, h, rcond_min=ZF_RCOND_MIN)


def normalize_rows(u_raw: np.ndarray):
    """Split a detector into unit-norm rows and their norms (delta)."""
    delta = np.linalg.norm(u_raw, axis=1)
    if np.any(delta == 0.0):
        raise DegenerateChannelError("detector has a zero row; user unservable")
    return u_raw / delta[:, None], delta


def dual_uplink_sinr(
    u_norm: np.ndarray, channel: np.ndarray, cfg: SystemConfig
) -> DualUplinkReport:
    """Per-user SINRs in the dual uplink under uniform powers P_TX / K.

    ``channel`` is the augmented real K x 2N matrix for widely-linear
    pipelines or the complex K x N matrix for the complex ones; the noise
    factor (0.5 vs 1.0) follows the field of the inputs.
    """
    complex_field = np.iscomplexobj(channel) or np.iscomplexobj(u_norm)
    eta = 1.0 if complex_field else 0.5
    v = u_norm.conj().T if complex_field else u_norm.T
    gains = np.abs(channel @ v) ** 2          # [k, j] = |h_k . v_j|^2
    ul_gains = gains.T                        # [k, j] = |u_k . h_j|^2
    q = cfg.rho
    diag = np.diag(ul_gains)
    row_norm_sq = np.sum(np.abs(u_norm) ** 2, axis=1)
    interference = q * (ul_gains.sum(axis=1) - diag)
    sinr = q * diag / (eta * cfg.noise_variance * row_norm_sq + interference)
    b = sinr / ((1.0 + sinr) * np.diag(gains))
    return DualUplinkReport(sinr_ul=sinr, b=b, big_b=ul_gains, noise_factor=eta)


def duality_power_allocation(report: DualUplinkReport, cfg: SystemConfig) -> np.ndarray:
    """Downlink powers that reproduce the dual-uplink SINRs per user.

    Solves (I - diag(b) B^T) p = eta sigma_n^2 b. The matrix
    diag(1/b) - B^T is a nonsingular M-matrix whenever the report comes
    from a realizable uplink, which makes p nonnegative and forces
    sum(p) == P_TX (the same budget the uplink spent).
    """
    b = report.b
    system = np.eye(b.size) - b[:, None] * report.big_b.T
    rhs = report.noise_factor * cfg.noise_variance * b
    try:
        p = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise InfeasiblePrecoderError(f"duality power system singular: {exc}")
    if np.any(p < -NEGATIVE_POWER_TOL):
        raise InfeasiblePrecoderError(
            f"duality produced negative power (min {p.min():.3e}); "
            "numerical breakdown, not clamping"
        )
    return np.where(p < 0.0, 0.0, p)


def conjugate_bf(h: np.ndarray, cfg: SystemConfig) -> PrecoderSolution:
    """Conjugate beamforming: normalized H^H columns, uniform powers."""
    h = check_channel_matrix(h)
    check_dimensions_match(h, cfg)
    delta = np.linalg.norm(h, axis=1)
    if np.any(delta == 0.0):
        raise DegenerateChannelError("channel has a zero row; user unservable")
    v = h.conj().T / delta[None, :]
    p = np.full(cfg.n_users, cfg.tx_power / cfg.n_users)
    return PrecoderSolution(kind=CONJUGATE_BF, v=v, p=p, delta=delta)


def build_precoder(kind: PrecoderKind, h: np.ndarray, cfg: SystemConfig) -> PrecoderSolution:
    """Build any supported precoder for one channel realization.

    Composes detector construction, row normalization, transposition and
    duality power allocation; conjugate BF short-circuits to uniform power.
    """
    if kind.family == "bf":
        return conjugate_bf(h, cfg)

    h = check_channel_matrix(h)
    check_dimensions_match(h, cfg)
    if kind.widely_linear:
        field_channel = augment_channel(h)
        if kind.family == "wl_mmse":
            u_raw = wl_mmse_detector(field_channel, cfg)
        elif kind.family == "wl_zf":
            u_raw = wl_zf_detector(field_channel)
        else:
            from .expansion import pe_coefficients, pe_detector_matrix

            coeffs = pe_coefficients(kind.pe_order, cfg)
            u_raw = pe_detector_matrix(field_channel, coeffs)
    else:
        field_channel = h
        if kind.family == "mmse":
            u_raw = mmse_detector(h, cfg)
        else:
            u_raw = zf_detector(h)

    u_norm, delta = normalize_rows(u_raw)
    report = dual_uplink_sinr(u_norm, field_channel, cfg)
    p = duality_power_allocation(report, cfg)
    v = u_norm.conj().T if np.iscomplexobj(u_norm) else u_norm.T
    return PrecoderSolution(kind=kind, v=v, p=p, delta=delta, uplink=report)
