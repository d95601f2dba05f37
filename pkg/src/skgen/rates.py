"""Reconciliation-phase rates: MMSE estimation errors and the two bounds.

During the reconciliation phase Alice sends a rate-limited public
message over the Alice-to-Bob channel, which Bob decodes with an
imperfect channel estimate obtained from probing.  The HD rate admits a
Jensen upper bound in closed form; the FD rate admits a lower bound via
the convexity of ``log2(1 + c e^x)`` and the closed-form expectation of
``ln(h^2)`` for Gaussian ``h``.  All rates are in bits; SNRs are linear.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import OutOfRange

__all__ = [
    "EULER_GAMMA",
    "RateKind",
    "ReconRate",
    "mmse_error_variance_hd",
    "mmse_error_variance_fd",
    "channel_estimate_variance",
    "hd_reconciliation_rate_upper",
    "fd_mmse_coefficient",
    "fd_conditional_variance",
    "fd_rate_gain",
    "fd_reconciliation_rate_lower",
    "expected_log_chisq",
]

EULER_GAMMA = float(np.euler_gamma)  # 0.5772156649015329


class RateKind(str, Enum):
    HD_UPPER = "hd_upper"
    FD_LOWER = "fd_lower"
    USER_SUPPLIED = "user_supplied"


@dataclass(frozen=True)
class ReconRate:
    """A reconciliation rate in bits per coherence block, tagged with
    the bound it came from."""

    value: float
    kind: RateKind


def _require_positive_snr(snr) -> None:
    if np.any(np.asarray(snr) <= 0) or not np.all(np.isfinite(snr)):
        raise OutOfRange(f"snr must be positive and finite, got {snr!r}")


def _require_beta(beta) -> None:
    if np.any(np.asarray(beta) <= 0) or np.any(np.asarray(beta) >= 1):
        raise OutOfRange(f"beta must lie in (0, 1), got {beta!r}")


def mmse_error_variance_hd(snr):
    """Error variance of the MMSE channel estimate from one HD probe.

    Equals ``1 / (1 + snr)``: the estimate ``c y`` of ``h_ab`` from the
    probing observation ``y = sqrt(snr) h_ab + n`` leaves exactly the
    noise share of the observation unexplained.
    """
    _require_positive_snr(snr)
    return 1.0 / (1.0 + snr)


def mmse_error_variance_fd(snr, alpha):
    """Error variance of the MMSE channel estimate from one FD probe.

    The residual self-interference acts as extra noise of power
    ``alpha^2 snr``, giving ``(1 + alpha^2 snr) / (1 + snr (1 + alpha^2))``.
    Reduces to the HD value at ``alpha = 0``.
    """
    _require_positive_snr(snr)
    if np.any(np.asarray(alpha) < 0):
        raise OutOfRange(f"alpha must be >= 0, got {alpha!r}")
    a2 = np.square(alpha)
    return (1.0 + a2 * snr) / (1.0 + snr * (1.0 + a2))


def channel_estimate_variance(snr, alpha=0.0):
    """Variance of the MMSE channel estimate itself, ``1 - error``."""
    return 1.0 - mmse_error_variance_fd(snr, alpha)


def hd_reconciliation_rate_upper(snr, beta) -> ReconRate:
    """Jensen upper bound on the HD reconciliation rate.

    ``(1 - beta)/4 * log2(1 + snr)``: half the blocks remain after
    probing, HD halves the link rate again, and Jensen moves the
    expectation over the fading inside the logarithm.
    """
    _require_positive_snr(snr)
    _require_beta(beta)
    return ReconRate(float((1.0 - beta) / 4.0 * np.log2(1.0 + snr)), RateKind.HD_UPPER)


def fd_mmse_coefficient(snr, alpha, hhat):
    """Coefficient minimizing ``E[(x_r - c y_r)^2]`` given the estimate ``hhat``."""
    _require_positive_snr(snr)
    s2 = mmse_error_variance_fd(snr, alpha)
    return hhat * snr / (1.0 + snr * (s2 + np.square(alpha) + np.square(hhat)))


def fd_conditional_variance(snr, alpha, hhat):
    """Residual variance ``Var[x_r - c y_r | hhat]`` at the MMSE ``c``."""
    _require_positive_snr(snr)
    s2 = mmse_error_variance_fd(snr, alpha)
    base = s2 + np.square(alpha)
    return snr * (1.0 + snr * base) / (1.0 + snr * (base + np.square(hhat)))


def fd_rate_gain(snr, alpha):
    """Gain multiplying the squared channel estimate inside the FD rate bound.

    ``snr (1 + snr (1 + alpha^2)) / (1 + 2 snr + alpha^2 snr (1 + snr))``.
    """
    _require_positive_snr(snr)
    a2 = np.square(alpha)
    return snr * (1.0 + snr * (1.0 + a2)) / (1.0 + 2.0 * snr + a2 * snr * (1.0 + snr))


def fd_reconciliation_rate_lower(snr, alpha, beta) -> ReconRate:
    """Convexity lower bound on the FD reconciliation rate.

    ``(1-beta)/2 * log2(1 + exp(-gamma)/2 * snr^2 /
    (1 + 2 snr + alpha^2 snr (1 + snr)))`` where ``gamma`` is the
    Euler-Mascheroni constant.  Equals
    ``(1-beta)/2 * log2(1 + fd_rate_gain * sigma_hhat^2 exp(-gamma)/2)``.
    """
    _require_positive_snr(snr)
    _require_beta(beta)
    a2 = np.square(alpha)
    den = 1.0 + 2.0 * snr + a2 * snr * (1.0 + snr)
    inner = 1.0 + 0.5 * np.exp(-EULER_GAMMA) * np.square(snr) / den
    return ReconRate(float((1.0 - beta) / 2.0 * np.log2(inner)), RateKind.FD_LOWER)


def expected_log_chisq(sigma2):
    """``E[ln h^2]`` for zero-mean Gaussian ``h`` of variance ``sigma2``.

    Closed form ``ln(sigma2 / 2) - gamma``.
    """
    if np.any(np.asarray(sigma2) <= 0):
        raise OutOfRange(f"sigma2 must be positive, got {sigma2!r}")
    return np.log(sigma2 / 2.0) - EULER_GAMMA
