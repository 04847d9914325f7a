"""Monte-Carlo harness: downlink SINR measurement, trials, sweeps, oracles.

Reproducibility model: every trial draws its channel from a 64-bit seed
token derived from the master seed and the trial's position in the sweep,
so results are independent of worker count and execution order. Within a
grid point all precoder kinds see the same channel (paired comparison).
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .asymptotic import asymptotic_sum_rate
from .channel import augment_channel, generate_channel
from .config import SystemConfig
from .exceptions import ConfigurationError, InfeasiblePrecoderError
from .precoding import PrecoderKind, PrecoderSolution, build_precoder
from .validation import check_channel_matrix, check_dimensions_match

ANALYTIC_FAMILIES = ("mmse", "wl_mmse")


def derive_seed(master_seed: int, *path: int) -> int:
    """64-bit seed token for a trial at the given position in a sweep.

    A splittable derivation: the same (master, path) always gives the same
    token, regardless of how many workers run the sweep.
    """
    ss = np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(path))
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class TrialResult:
    """Per-user downlink SINRs and rates for one channel realization."""

    sinr_dl: np.ndarray
    rates: np.ndarray
    sum_rate: float


@dataclass(frozen=True)
class SweepSpec:
    """One sweep: a beta grid crossed with a list of precoder kinds."""

    n_antennas: int
    beta_grid: tuple
    snr_db: float
    kinds: tuple
    n_trials: int
    master_seed: int
    noise_variance: float = 1.0

    def __post_init__(self):
        if self.n_trials < 1:
            raise ConfigurationError(f"n_trials must be >= 1, got {self.n_trials}")
        if len(self.beta_grid) == 0:
            raise ConfigurationError("beta_grid is empty")
        if len(self.kinds) == 0:
            raise ConfigurationError("kinds list is empty")
        for beta in self.beta_grid:
            if round(beta * self.n_antennas) < 1:
                raise ConfigurationError(
                    f"beta={beta} gives no users at N={self.n_antennas}"
                )

    @property
    def snr(self) -> float:
        return 10.0 ** (self.snr_db / 10.0)

    def config_for(self, beta: float) -> SystemConfig:
        return SystemConfig(
            n_antennas=self.n_antennas,
            n_users=round(beta * self.n_antennas),
            snr=self.snr,
            noise_variance=self.noise_variance,
        )


@dataclass(frozen=True)
class SweepPoint:
    """Aggregated result for one (beta, kind) grid point."""

    beta: float
    kind: PrecoderKind
    mean_sum_rate: float
    std_err: float
    analytic_sum_rate: float | None
    n_ok: int
    n_infeasible: int


@dataclass
class SweepResult:
    points: list
    metadata: dict = field(default_factory=dict)


def measure_downlink_sinr(
    solution: PrecoderSolution, h: np.ndarray, cfg: SystemConfig
) -> np.ndarray:
    """Measured downlink SINR per user for a built precoder.

    SINR_k = p_k |g_kk|^2 / (sum_{j != k} p_j |g_kj|^2 + eta sigma_n^2)
    with G the effective channel-times-precoder gain matrix; the per-user
    receiver scalings cancel out.
    """
    h = check_channel_matrix(h)
    check_dimensions_match(h, cfg)
    kind = solution.kind
    channel = augment_channel(h) if kind.widely_linear else h
    gains = np.abs(channel @ solution.v) ** 2
    p = solution.p
    signal = p * np.diag(gains)
    interference = gains @ p - np.diag(gains) * p
    return signal / (interference + kind.noise_factor * cfg.noise_variance)


def run_trial(kind: PrecoderKind, cfg: SystemConfig, seed) -> TrialResult:
    """Generate a channel, build the precoder, measure SINRs and rates."""
    h = generate_channel(cfg, seed)
    solution = build_precoder(kind, h, cfg)
    sinr = measure_downlink_sinr(solution, h, cfg)
    rates = kind.rate_factor * np.log2(1.0 + sinr)
    return TrialResult(sinr_dl=sinr, rates=rates, sum_rate=float(rates.sum()))


def _sweep_job(spec: SweepSpec, point_index: int, trial: int):
    """All kinds on one shared channel; None marks an infeasible kind."""
    beta = spec.beta_grid[point_index]
    cfg = spec.config_for(beta)
    seed = derive_seed(spec.master_seed, point_index, trial)
    h = generate_channel(cfg, seed)
    out = []
    for kind in spec.kinds:
        try:
            solution = build_precoder(kind, h, cfg)
            sinr = measure_downlink_sinr(solution, h, cfg)
            out.append(float(np.sum(kind.rate_factor * np.log2(1.0 + sinr))))
        except InfeasiblePrecoderError:
            out.append(None)
    return out


def run_sweep(spec: SweepSpec, threads: int = 1) -> SweepResult:
    """Run the full (beta, kind) grid; deterministic for any thread count.

    Infeasible trials are excluded from the averages and counted per point;
    a sweep where every single (point, kind, trial) is infeasible raises.
    """
    jobs = [
        (pi, t) for pi in range(len(spec.beta_grid)) for t in range(spec.n_trials)
    ]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda a: _sweep_job(spec, *a), jobs))
    else:
        rows = [_sweep_job(spec, *job) for job in jobs]

    points = []
    infeasible_counts = {}
    for pi, beta in enumerate(spec.beta_grid):
        cfg = spec.config_for(beta)
        start = pi * spec.n_trials
        block = rows[start : start + spec.n_trials]
        for ki, kind in enumerate(spec.kinds):
            values = [row[ki] for row in block if row[ki] is not None]
            n_ok = len(values)
            n_inf = spec.n_trials - n_ok
            if n_ok > 0:
                mean = float(np.mean(values))
                std = float(np.std(values, ddof=1)) if n_ok > 1 else 0.0
                stderr = std / math.sqrt(n_ok)
            else:
                mean = math.nan
                stderr = math.nan
            analytic = (
                asymptotic_sum_rate(kind, cfg)
                if kind.family in ANALYTIC_FAMILIES
                else None
            )
            points.append(
                SweepPoint(
                    beta=beta,
                    kind=kind,
                    mean_sum_rate=mean,
                    std_err=stderr,
                    analytic_sum_rate=analytic,
                    n_ok=n_ok,
                    n_infeasible=n_inf,
                )
            )
            if n_inf:
                infeasible_counts[f"{beta:g},{kind.label}"] = n_inf

    if all(point.n_ok == 0 for point in points):
        raise InfeasiblePrecoderError("every grid point of the sweep is infeasible")

    metadata = {
        "n_antennas": spec.n_antennas,
        "snr_db": spec.snr_db,
        "noise_variance": spec.noise_variance,
        "beta_grid": list(spec.beta_grid),
        "kinds": [kind.label for kind in spec.kinds],
        "n_trials": spec.n_trials,
        "master_seed": spec.master_seed,
        "infeasible": infeasible_counts,
    }
    return SweepResult(points=points, metadata=metadata)


def _gram_eigenvalues(cfg: SystemConfig, seed) -> np.ndarray:
    h_aug = augment_channel(generate_channel(cfg, seed))
    w = h_aug @ h_aug.T / cfg.n_antennas
    return np.linalg.eigvalsh(w)


def empirical_moments(
    orders, cfg: SystemConfig, n_trials: int = 100, seed: int = 0
) -> np.ndarray:
    """Monte-Carlo (1/K) tr(((1/N) H~ H~^T)^m) for each requested order."""
    orders = list(orders)
    acc = np.zeros(len(orders))
    for t in range(n_trials):
        lam = _gram_eigenvalues(cfg, derive_seed(seed, t))
        for i, m in enumerate(orders):
            acc[i] += np.sum(lam**m) / cfg.n_users
    return acc / n_trials


def empirical_moment(m: int, cfg: SystemConfig, n_trials: int = 100, seed: int = 0) -> float:
    """Monte-Carlo estimate of one Gram eigenvalue moment (m <= 6)."""
    if m > 6:
        raise ConfigurationError(f"empirical moments supported for m <= 6, got {m}")
    return float(empirical_moments([m], cfg, n_trials, seed)[0])


def empirical_pe_oracle(
    order: int, cfg: SystemConfig, n_trials: int = 100, seed: int = 0
) -> np.ndarray:
    """Brute-force least-squares oracle for the expansion coefficients.

    Fits the polynomial detector to the exact widely-linear MMSE detector
    in the energy of the detector-output difference over the dual-uplink
    received signal (uniform powers plus real noise), accumulating the
    sample normal equations across trials. The solution is channel-driven
    and converges to the moment-system coefficients as N grows, which makes
    it the arbiter for the moment-index conventions.
    """
    if order > 6:
        raise ConfigurationError(f"oracle supported for order <= 6, got {order}")
    n = cfg.n_antennas
    c = (cfg.real_noise_variance / cfg.tx_power) * (cfg.n_users / n)
    size = order + 1
    gram = np.zeros((size, size))
    rhs = np.zeros(size)
    for t in range(n_trials):
        lam = _gram_eigenvalues(cfg, derive_seed(seed, t))
        # power sums (1/N) tr(A^j) for every exponent the system needs
        psums = {j: float(np.sum(lam**j)) / n for j in range(1, 2 * order + 3)}
        for m in range(size):
            for l in range(size):
                gram[m, l] += psums[m + l + 2] + c * psums[m + l + 1]
            rhs[m] += psums[m + 1]
    rcond = 1.0 / np.linalg.cond(gram)
    if not np.isfinite(rcond) or rcond < 1e-14:
        raise ConfigurationError(
            f"sample normal equations singular (rcond={rcond:.2e}); increase n_trials"
        )
    return np.linalg.solve(gram, rhs)


def pe_oracle_objective(
    omega: np.ndarray, cfg: SystemConfig, n_trials: int = 100, seed: int = 0
) -> float:
    """Sample value of the oracle's objective at a given coefficient vector.

    Evaluates the accumulated output-difference energy (up to a positive
    constant factor) over the same channels the oracle with this seed uses;
    lets tests verify oracle optimality.
    """
    n = cfg.n_antennas
    c = (cfg.real_noise_variance / cfg.tx_power) * (cfg.n_users / n)
    omega = np.asarray(omega, dtype=np.float64)
    total = 0.0
    for t in range(n_trials):
        lam = _gram_eigenvalues(cfg, derive_seed(seed, t))
        poly = np.polynomial.polynomial.polyval(lam, omega)
        residual = poly - 1.0 / (lam + c)
        total += float(np.sum(lam * (lam + c) * residual**2)) / n
    return total / n_trials
