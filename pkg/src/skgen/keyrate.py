"""The key-reconciliation function and the achievable rate region.

Given the two effective gains of a mode, the maximum secret-key rate at
reconciliation rate ``R_r`` is

    R_sk(R_r) = (beta/2) log2( (1 + b - 4^(-R_r/beta) (b - e)) / (1 + e) )

with ``b = |b_x|^2`` and ``e = |e_x|^2``.  The same boundary can be
traced through the auxiliary-variable description of the rate region;
the two parameterizations round-trip exactly, which the tests exploit.
Negative values are returned as is: the sign carries the positivity
criterion (``R_r > 0`` and ``b > e``).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .gains import ModeGains, mode_gains
from .model import Mode, SourceStats, SystemParams
from .rates import fd_reconciliation_rate_lower, hd_reconciliation_rate_upper

__all__ = [
    "RatePoint",
    "RegionCurve",
    "key_reconciliation",
    "auxiliary_variance",
    "region_point",
    "region_curve",
    "positivity",
    "improvement_ratio",
    "mode_rate_bound",
]

# Beyond this many bits of R_r/beta the 4^(-R_r/beta) term is flushed
# to zero so the infinite-rate limit is exact.
_EXPONENT_CAP = 60.0


@dataclass(frozen=True)
class RatePoint:
    """A (reconciliation rate, secret-key rate) pair in bits/observation."""

    r_r: float
    r_sk: float
    beta: float


@dataclass(frozen=True)
class RegionCurve:
    """Boundary of the achievable (R_r, R_sk) region, ordered by R_r."""

    points: tuple[RatePoint, ...]


def _decay(r_r, beta):
    """``4^(-r_r/beta)`` with the large-exponent flush."""
    t = np.asarray(r_r, dtype=float) / beta
    return np.where(t > _EXPONENT_CAP, 0.0, np.exp2(-2.0 * np.minimum(t, _EXPONENT_CAP)))


def key_rate_raw(b_x2, e_x2, r_r, beta):
    """Broadcasting core of the key-reconciliation function."""
    q = _decay(r_r, beta)
    return beta / 2.0 * np.log2((1.0 + b_x2 - q * (b_x2 - e_x2)) / (1.0 + e_x2))


def key_reconciliation(gains: ModeGains, r_r: float, beta: float) -> float:
    """Secret-key rate achievable at reconciliation rate ``r_r``.

    May be negative; see ``positivity`` for the sign criterion.
    """
    if r_r < 0:
        raise OutOfRange(f"r_r must be >= 0, got {r_r!r}")
    if not 0.0 < beta < 1.0:
        raise OutOfRange(f"beta must lie in (0, 1), got {beta!r}")
    return float(key_rate_raw(gains.b_x2, gains.e_x2, r_r, beta))


def auxiliary_variance(r_r: float, beta: float, b_x2: float, sigma_x2: float) -> float:
    """Conditional variance of Alice's observation given the auxiliary
    description that attains reconciliation rate ``r_r``.

    ``sigma_x2 / (4^(r_r/beta) (1 + b_x2) - b_x2)``, computed via the
    decayed form so large rates underflow gracefully toward 0.
    """
    if r_r < 0:
        raise OutOfRange(f"r_r must be >= 0, got {r_r!r}")
    q = float(_decay(r_r, beta))
    return sigma_x2 * q / ((1.0 + b_x2) - b_x2 * q)


def region_point(
    stats: SourceStats, gains: ModeGains, sigma2_x_given_u: float, beta: float
) -> RatePoint:
    """Boundary rate pair for one auxiliary variance.

    Evaluates the determinant expressions of the region with the scalar
    reduction ``|I + v v^T s| = 1 + s |v|^2``: the minimum required
    reconciliation rate and the maximum secret-key rate for the given
    ``sigma2_x_given_u``.
    """
    sx2 = stats.sigma_x2
    if not 0.0 < sigma2_x_given_u <= sx2:
        raise OutOfRange(
            f"sigma2_x_given_u must lie in (0, sigma_x2={sx2!r}], got {sigma2_x_given_u!r}"
        )
    ratio = sigma2_x_given_u / sx2
    # 1 + sigma2_x_given_u |v|^2, written through the x-scaled gains.
    by = 1.0 + ratio * gains.b_x2
    bz = 1.0 + ratio * gains.e_x2
    r_r = beta / 2.0 * (np.log2(sx2 / sigma2_x_given_u) - np.log2((1.0 + gains.b_x2) / by))
    r_sk = beta / 2.0 * (
        np.log2((1.0 + gains.b_x2) / by) - np.log2((1.0 + gains.e_x2) / bz)
    )
    return RatePoint(float(r_r), float(r_sk), beta)


def region_curve(
    stats: SourceStats, gains: ModeGains, beta: float, n: int = 64, min_ratio: float = 1e-9
) -> RegionCurve:
    """Trace the region boundary for ``n`` log-spaced auxiliary variances.

    Runs from the no-information corner (0, 0) toward the perfect-
    description limit.  Monotone in both coordinates when ``b > e``.
    """
    ratios = np.geomspace(1.0, min_ratio, n)
    pts = tuple(region_point(stats, gains, float(r) * stats.sigma_x2, beta) for r in ratios)
    return RegionCurve(pts)


def positivity(gains: ModeGains, r_r: float) -> bool:
    """True iff the key-reconciliation function is strictly positive."""
    return r_r > 0 and gains.b_x2 > gains.e_x2


def improvement_ratio(r_sk_fd_lower: float, r_sk_hd_upper: float) -> float:
    """Relative secret-key gain of FD over HD, ``(fd - hd) / hd``.

    Built from the FD lower and HD upper bounds this is itself a lower
    bound on the true ratio, meaningful when the numerator is >= 0.
    """
    if r_sk_hd_upper == 0:
        raise ZeroDivisionError("HD secret-key rate is zero; ratio undefined")
    return (r_sk_fd_lower - r_sk_hd_upper) / r_sk_hd_upper


def mode_rate_bound(params: SystemParams, mode: Mode) -> RatePoint:
    """Worst-case-pairing rate bound of one mode.

    HD composes its gains with the Jensen *upper* reconciliation bound;
    FD with the convexity *lower* bound.  The FD-minus-HD difference of
    these two is therefore a conservative estimate of the FD advantage.
    """
    mode = Mode(mode)
    g = mode_gains(params, mode)
    if mode is Mode.HD:
        r_r = hd_reconciliation_rate_upper(params.snr, params.beta).value
    else:
        r_r = fd_reconciliation_rate_lower(params.snr, params.alpha, params.beta).value
    return RatePoint(r_r, key_reconciliation(g, r_r, params.beta), params.beta)
