"""Widely-linear MMSE precoding for large-scale MU-MISO downlinks.

Simulation of duality-built linear precoders (widely-linear and complex
MMSE/ZF, conjugate beamforming, polynomial-expansion WL-MMSE), closed-form
large-system sum-rate analysis, and a Monte-Carlo sweep harness that
cross-validates the two.
"""

__version__ = "0.1.0"

from .asymptotic import (
    analytic_curves,
    asymptotic_sinr_mmse,
    asymptotic_sinr_wl_mmse,
    asymptotic_sum_rate,
    stieltjes,
    stieltjes_derivative,
)
from .channel import (
    augment_channel,
    deaugment_precoder,
    generate_channel,
    real_equivalence_residual,
)
from .config import SystemConfig
from .estimators import (
    ConjugateBeamformer,
    MmsePrecoder,
    PeWlMmsePrecoder,
    WlMmsePrecoder,
    WlZfPrecoder,
    ZfPrecoder,
    make_precoder,
)
from .exceptions import (
    ConfigurationError,
    DegenerateChannelError,
    InfeasiblePrecoderError,
    PolynomialOrderError,
    PrecodingError,
)
from .expansion import (
    PeCoefficients,
    asymptotic_moment,
    pe_apply,
    pe_coefficients,
    pe_detector_matrix,
)
from .precoding import (
    CONJUGATE_BF,
    MMSE,
    WL_MMSE,
    WL_ZF,
    ZF,
    DualUplinkReport,
    PrecoderKind,
    PrecoderSolution,
    build_precoder,
    conjugate_bf,
    dual_uplink_sinr,
    duality_power_allocation,
    mmse_detector,
    normalize_rows,
    pe_wl_mmse,
    wl_mmse_detector,
    wl_zf_detector,
    zf_detector,
)
from .sim import (
    SweepPoint,
    SweepResult,
    SweepSpec,
    TrialResult,
    derive_seed,
    empirical_moment,
    empirical_moments,
    empirical_pe_oracle,
    measure_downlink_sinr,
    pe_oracle_objective,
    run_sweep,
    run_trial,
)

__all__ = [
    "__version__",
    "SystemConfig",
    "PrecoderKind",
    "PrecoderSolution",
    "DualUplinkReport",
    "PeCoefficients",
    "SweepSpec",
    "SweepPoint",
    "SweepResult",
    "TrialResult",
    "WL_MMSE",
    "WL_ZF",
    "MMSE",
    "ZF",
    "CONJUGATE_BF",
    "pe_wl_mmse",
    "generate_channel",
    "augment_channel",
    "deaugment_precoder",
    "real_equivalence_residual",
    "wl_mmse_detector",
    "wl_zf_detector",
    "mmse_detector",
    "zf_detector",
    "conjugate_bf",
    "normalize_rows",
    "dual_uplink_sinr",
    "duality_power_allocation",
    "build_precoder",
    "asymptotic_moment",
    "pe_coefficients",
    "pe_detector_matrix",
    "pe_apply",
    "stieltjes",
    "stieltjes_derivative",
    "asymptotic_sinr_mmse",
    "asymptotic_sinr_wl_mmse",
    "asymptotic_sum_rate",
    "analytic_curves",
    "measure_downlink_sinr",
    "run_trial",
    "run_sweep",
    "derive_seed",
    "empirical_moment",
    "empirical_moments",
    "empirical_pe_oracle",
    "pe_oracle_objective",
    "WlMmsePrecoder",
    "WlZfPrecoder",
    "PeWlMmsePrecoder",
    "MmsePrecoder",
    "ZfPrecoder",
    "ConjugateBeamformer",
    "make_precoder",
    "PrecodingError",
    "ConfigurationError",
    "DegenerateChannelError",
    "InfeasiblePrecoderError",
    "PolynomialOrderError",
]
