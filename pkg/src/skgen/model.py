"""Scenario parameters and exact second-order statistics of the probing sources.

Three single-antenna nodes (Alice, Bob, Eve) observe a reciprocal
flat-fading channel once per coherence block.  In half-duplex (HD) mode
Alice and Bob probe in alternating directions and Eve collects two
observations per block; in full-duplex (FD) mode both probe
simultaneously, paying a residual self-interference penalty, and Eve
collects a single superposed observation.  All channel coefficients and
noises are zero-mean unit-variance jointly Gaussian, so each mode's
observation vector ``(x, y, z)`` is fully described by its second
moments.  This module validates the parameter set and produces those
moments in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import DegenerateStatistics, InvalidCorrelationMatrix, OutOfRange

__all__ = [
    "Mode",
    "SystemParams",
    "SourceStats",
    "validate",
    "correlation_matrix",
    "hd_source_stats",
    "fd_source_stats",
    "source_stats",
]

# Relative tolerance for the principal-minor positivity test, and the
# eigenvalue floor (relative to the trace) below which a covariance is
# treated as singular.
PSD_MINOR_TOL = 1e-12
EIGENVALUE_FLOOR = 1e-10


class Mode(str, Enum):
    """Duplexing mode of the probing phase."""

    HD = "hd"
    FD = "fd"


@dataclass(frozen=True)
class SystemParams:
    """Full scenario parameter set.

    Parameters
    ----------
    snr : float
        Linear SNR of the Alice-Bob probing links (> 0).
    snr_ae, snr_be : float
        Linear SNRs of the Alice-to-Eve and Bob-to-Eve links (> 0).
    rho_e : float
        Correlation between the two Eve-side channels, in [-1, 1].
    rho_ae, rho_be : float
        Correlations of Eve's channels with the Bob-to-Alice channel,
        in [-1, 1].
    rho_ba : float
        Reciprocity correlation between the two probing directions,
        in [-1, 1].
    delta : float
        Delay penalty on reciprocity when HD replies exceed the channel
        coherence time, in (0, 1].  Irrelevant in FD mode.
    alpha : float
        Residual self-interference amplitude relative to the desired
        signal (>= 0).  Irrelevant in HD mode.
    beta : float
        Fraction of coherence blocks spent probing, in (0, 1).
    strong_eve : bool
        If true, Eve's receiver noise is dropped (worst case).
    """

    snr: float
    snr_ae: float
    snr_be: float
    rho_e: float = 0.0
    rho_ae: float = 0.0
    rho_be: float = 0.0
    rho_ba: float = 1.0
    delta: float = 1.0
    alpha: float = 0.0
    beta: float = 0.5
    strong_eve: bool = False

    @property
    def xi(self) -> float:
        """Ratio of Bob-to-Eve vs Alice-to-Eve channel amplitudes."""
        return math.sqrt(self.snr_be / self.snr_ae)

    def with_(self, **changes) -> "SystemParams":
        """Return a copy with the given fields replaced."""
        return replace(self, **changes)


@dataclass(frozen=True, eq=False)
class SourceStats:
    """Second-order statistics of one mode's Gaussian vector source.

    ``sigma_z`` is 2x2 in HD mode (Eve sees both probing directions)
    and 1x1 in FD mode (Eve sees their superposition).
    ``sigma_z_given_x`` is Eve's covariance conditioned on Alice's
    observation, ``Sigma_z - sigma_zx sigma_zx^T / sigma_x2``.
    """

    mode: Mode
    sigma_x2: float
    sigma_y2: float
    sigma_yx: float
    sigma_z: np.ndarray
    sigma_zx: np.ndarray
    sigma_z_given_x: np.ndarray

    @property
    def n_z(self) -> int:
        return self.sigma_z.shape[0]


def correlation_matrix(params: SystemParams) -> np.ndarray:
    """3x3 correlation matrix of (h_ba, h_ae, h_be)."""
    return np.array(
        [
            [1.0, params.rho_ae, params.rho_be],
            [params.rho_ae, 1.0, params.rho_e],
            [params.rho_be, params.rho_e, 1.0],
        ]
    )


def _leading_minors(params: SystemParams) -> list[float]:
    # Closed-form leading principal minors of the 3x3 unit-diagonal matrix.
    r_ae, r_be, r_e = params.rho_ae, params.rho_be, params.rho_e
    det3 = 1.0 + 2.0 * r_ae * r_be * r_e - r_ae**2 - r_be**2 - r_e**2
    return [1.0, 1.0 - r_ae**2, det3]


def validate(params: SystemParams) -> SystemParams:
    """Check every invariant of ``SystemParams`` and return it unchanged.

    Raises
    ------
    OutOfRange
        If a field lies outside its admissible interval.
    InvalidCorrelationMatrix
        If the implied correlation matrix of (h_ba, h_ae, h_be) fails
        the leading-principal-minor positivity test.
    """
    for name in ("snr", "snr_ae", "snr_be"):
        value = getattr(params, name)
        if not (math.isfinite(value) and value > 0):
            raise OutOfRange(f"{name} must be positive and finite, got {value!r}")
    for name in ("rho_e", "rho_ae", "rho_be", "rho_ba"):
        value = getattr(params, name)
        if not (math.isfinite(value) and -1.0 <= value <= 1.0):
            raise OutOfRange(f"{name} must lie in [-1, 1], got {value!r}")
    if not (math.isfinite(params.delta) and 0.0 < params.delta <= 1.0):
        raise OutOfRange(f"delta must lie in (0, 1], got {params.delta!r}")
    if not (math.isfinite(params.alpha) and params.alpha >= 0.0):
        raise OutOfRange(f"alpha must be >= 0, got {params.alpha!r}")
    if not (math.isfinite(params.beta) and 0.0 < params.beta < 1.0):
        raise OutOfRange(f"beta must lie strictly inside (0, 1), got {params.beta!r}")

    minors = _leading_minors(params)
    # Unit diagonal, so the PSD tolerance is relative to 1.
    if any(m < -PSD_MINOR_TOL for m in minors):
        raise InvalidCorrelationMatrix(
            f"correlation matrix of (h_ba, h_ae, h_be) has leading minors {minors}"
        )
    return params


def _check_nondegenerate(stats: SourceStats) -> SourceStats:
    for name, mat in (("Sigma_z", stats.sigma_z), ("Sigma_z|x", stats.sigma_z_given_x)):
        eigs = np.linalg.eigvalsh(mat)
        floor = EIGENVALUE_FLOOR * float(np.trace(mat))
        if eigs[0] <= floor:
            raise DegenerateStatistics(
                f"{name} has eigenvalue {eigs[0]:.3e} at or below floor {floor:.3e}"
            )
    return stats


def _assemble(mode, sigma_x2, sigma_yx, sigma_z, sigma_zx) -> SourceStats:
    sigma_z = np.asarray(sigma_z, dtype=float)
    sigma_zx = np.asarray(sigma_zx, dtype=float)
    cond = sigma_z - np.outer(sigma_zx, sigma_zx) / sigma_x2
    stats = SourceStats(
        mode=mode,
        sigma_x2=float(sigma_x2),
        sigma_y2=float(sigma_x2),
        sigma_yx=float(sigma_yx),
        sigma_z=sigma_z,
        sigma_zx=sigma_zx,
        sigma_z_given_x=cond,
    )
    return _check_nondegenerate(stats)


def hd_source_stats(params: SystemParams) -> SourceStats:
    """Second-order statistics of the HD probing source.

    Alice and Bob observe ``x = sqrt(snr) h_ba + n_a`` and
    ``y = sqrt(snr) h_ab + n_b``; Eve observes each probing direction
    separately, ``z_k = sqrt(snr_ke) h_ke + n_ke``.  With
    ``strong_eve`` the additive unit noise on Eve's diagonal is
    dropped.
    """
    validate(params)
    s, sa, sb = params.snr, params.snr_ae, params.snr_be
    eve_noise = 0.0 if params.strong_eve else 1.0
    cross = math.sqrt(sa * sb) * params.rho_e
    sigma_z = [[sa + eve_noise, cross], [cross, sb + eve_noise]]
    sigma_zx = [
        math.sqrt(s * sa) * params.rho_ae,
        math.sqrt(s * sb) * params.rho_be,
    ]
    return _assemble(Mode.HD, 1.0 + s, s * params.delta * params.rho_ba, sigma_z, sigma_zx)


def fd_source_stats(params: SystemParams) -> SourceStats:
    """Second-order statistics of the FD probing source.

    Both directions are probed simultaneously, so the delay penalty
    disappears from the reciprocity cross-moment, but the residual
    self-interference ``alpha`` inflates the observation variances.
    Eve sees the superposition of both pilots in a single scalar.
    """
    validate(params)
    s, sa, sb = params.snr, params.snr_ae, params.snr_be
    eve_noise = 0.0 if params.strong_eve else 1.0
    sigma_z = [[sa + sb + 2.0 * math.sqrt(sa * sb) * params.rho_e + eve_noise]]
    sigma_zx = [math.sqrt(s * sa) * params.rho_ae + math.sqrt(s * sb) * params.rho_be]
    sigma_x2 = 1.0 + s * (1.0 + params.alpha**2)
    return _assemble(Mode.FD, sigma_x2, s * params.rho_ba, sigma_z, sigma_zx)


def source_stats(params: SystemParams, mode: Mode) -> SourceStats:
    """Dispatch to the HD or FD statistics builder."""
    if Mode(mode) is Mode.HD:
        return hd_source_stats(params)
    return fd_source_stats(params)
