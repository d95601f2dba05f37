"""Secret-key generation rates from reciprocal wireless channels.

Closed-form achievable-rate machinery for half-duplex and full-duplex
channel probing, with a Monte Carlo oracle that validates every formula
against the exact observation models.
"""

from .analysis import (
    BetaStarResult,
    HighSnrResult,
    RegionMesh,
    beta_star,
    concavity_check,
    feasible_fd,
    feasible_hd,
    high_snr_check,
    improvement_surface,
    region_mesh,
    secret_key_rate_vs_beta,
)
from .errors import (
    AssumptionViolated,
    DegenerateStatistics,
    InvalidCorrelationMatrix,
    InvalidSample,
    NoPositiveRate,
    OutOfRange,
    OutsideFeasibleRegion,
)
from .gains import (
    ModeGains,
    fd_gains,
    gains,
    gains_strong_eve_fd,
    gains_strong_eve_hd,
    hd_gains,
    mode_gains,
    whitening_transform,
)
from .keyrate import (
    RatePoint,
    RegionCurve,
    auxiliary_variance,
    improvement_ratio,
    key_reconciliation,
    mode_rate_bound,
    positivity,
    region_curve,
    region_point,
)
from .mcoracle import (
    CheckResult,
    SampleBatch,
    SeededStream,
    bound_direction_checks,
    covariance_checks,
    empirical_log_chisq,
    empirical_mmse_variance,
    mmse_channel_estimates,
    sample_observations,
    validation_report,
)
from .model import (
    Mode,
    SourceStats,
    SystemParams,
    correlation_matrix,
    fd_source_stats,
    hd_source_stats,
    source_stats,
    validate,
)
from .rates import (
    EULER_GAMMA,
    RateKind,
    ReconRate,
    channel_estimate_variance,
    expected_log_chisq,
    fd_conditional_variance,
    fd_mmse_coefficient,
    fd_rate_gain,
    fd_reconciliation_rate_lower,
    hd_reconciliation_rate_upper,
    mmse_error_variance_fd,
    mmse_error_variance_hd,
)
from .tsv import SweepTable, write_tsv

__version__ = "0.1.0"
