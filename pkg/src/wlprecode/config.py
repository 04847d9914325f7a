"""System configuration for the downlink MU-MISO model.

All powers are linear (not dB). The CLI converts dB inputs before
constructing a :class:`SystemConfig`.
"""

from dataclasses import dataclass

from .exceptions import ConfigurationError


@dataclass(frozen=True)
class SystemConfig:
    """Dimensions and power budget of one downlink system.

    Attributes
    ----------
    n_antennas : int
        Number of base-station antennas (N).
    n_users : int
        Number of single-antenna user terminals (K).
    snr : float
        Transmit signal-to-noise ratio P_TX / sigma_n^2, linear.
    noise_variance : float
        Per-user complex noise variance sigma_n^2 (default 1).
    """

    n_antennas: int
    n_users: int
    snr: float
    noise_variance: float = 1.0

    def __post_init__(self):
        if self.n_antennas < 1:
            raise ConfigurationError(f"n_antennas must be >= 1, got {self.n_antennas}")
        if self.n_users < 1:
            raise ConfigurationError(f"n_users must be >= 1, got {self.n_users}")
        if not self.snr > 0:
            raise ConfigurationError(f"snr must be positive, got {self.snr}")
        if not self.noise_variance > 0:
            raise ConfigurationError(
                f"noise_variance must be positive, got {self.noise_variance}"
            )

    @property
    def beta(self) -> float:
        """Load factor K/N; beta > 1 is the overloaded regime."""
        return self.n_users / self.n_antennas

    @property
    def tx_power(self) -> float:
        """Total transmit power budget P_TX = snr * sigma_n^2."""
        return self.snr * self.noise_variance

    @property
    def rho(self) -> float:
        """Per-user power share P_TX / K (uniform dual-uplink power)."""
        return self.tx_power / self.n_users

    @property
    def real_noise_variance(self) -> float:
        """Variance of the real part of the noise, exactly 0.5 * sigma_n^2."""
        return 0.5 * self.noise_variance

    @property
    def gamma(self) -> float:
        """Effective noise-to-power ratio sigma_n^2 / (rho * N) == beta / snr."""
        return self.beta / self.snr
