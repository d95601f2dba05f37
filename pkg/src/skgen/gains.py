"""Effective source gains and the whitening transform.

After whitening Bob's and Eve's observations, the probing source is
equivalent to ``y~ = b x + w_y`` and ``z~ = e x + w_z`` with unit
noises.  Only the two scalars ``|b_x|^2 = sigma_x^2 |b|^2`` and
``|e_x|^2 = sigma_x^2 |e|^2`` enter the key-reconciliation function, so
this module is the funnel between raw second moments and rate
computations.

The per-mode closed forms are the production path; the generic
quadratic-form route through a ``SourceStats`` exists as an independent
cross-check and for transformed or hand-built statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStatistics, OutsideFeasibleRegion
from .model import Mode, SourceStats, SystemParams, validate

__all__ = [
    "ModeGains",
    "gains",
    "hd_gains",
    "fd_gains",
    "mode_gains",
    "gains_strong_eve_hd",
    "gains_strong_eve_fd",
    "whitening_transform",
]

# Denominators below this fraction of sigma_x^2 count as singular.
_DENOM_FLOOR = 1e-10


@dataclass(frozen=True)
class ModeGains:
    """The pair of effective gains that parameterizes one mode's rates."""

    b_x2: float
    e_x2: float
    mode: Mode
    strong_eve: bool = False


def _inv_quadratic_form(mat: np.ndarray, vec: np.ndarray) -> float:
    """``vec^T mat^{-1} vec`` for 1x1 or 2x2 symmetric ``mat`` by adjugate."""
    if mat.shape == (1, 1):
        det = mat[0, 0]
        if det <= 0:
            raise DegenerateStatistics(f"Sigma_z = {det:.3e} is not positive")
        return float(vec[0] ** 2 / det)
    a, b, c = mat[0, 0], mat[0, 1], mat[1, 1]
    det = a * c - b * b
    if det <= 0:
        raise DegenerateStatistics(f"Sigma_z has determinant {det:.3e}")
    v0, v1 = vec
    return float((c * v0 * v0 - 2.0 * b * v0 * v1 + a * v1 * v1) / det)


def _gain_from_moments(sigma_x2: float, qf: float) -> float:
    """Gain ``qf / (sigma_x2 - qf)`` with a singularity guard."""
    den = sigma_x2 - qf
    if den <= _DENOM_FLOOR * sigma_x2:
        raise DegenerateStatistics(
            f"conditional variance {den:.3e} vanished against sigma_x2 = {sigma_x2:.3e}"
        )
    return qf / den


def gains(stats: SourceStats, strong_eve: bool = False) -> ModeGains:
    """Effective gains from second moments via the quadratic-form route.

    ``|e_x|^2 = q / (sigma_x^2 - q)`` with
    ``q = sigma_zx^T Sigma_z^{-1} sigma_zx``; analogously for Bob with
    scalar moments.  Invariant under any non-singular linear transform
    of ``z``, since ``q`` is.
    """
    qf_y = stats.sigma_yx**2 / stats.sigma_y2
    qf_z = _inv_quadratic_form(stats.sigma_z, stats.sigma_zx)
    return ModeGains(
        b_x2=_gain_from_moments(stats.sigma_x2, qf_y),
        e_x2=_gain_from_moments(stats.sigma_x2, qf_z),
        mode=stats.mode,
        strong_eve=strong_eve,
    )


def _hd_b(params: SystemParams) -> float:
    s = params.snr
    num = (s * params.delta * params.rho_ba) ** 2
    den = (1.0 + s) ** 2 - num
    if den <= _DENOM_FLOOR * (1.0 + s) ** 2:
        raise DegenerateStatistics("HD Bob gain denominator vanished")
    return num / den


def _fd_b(params: SystemParams) -> float:
    s = params.snr
    sx2 = 1.0 + s * (1.0 + params.alpha**2)
    num = (s * params.rho_ba) ** 2
    den = sx2**2 - num
    if den <= _DENOM_FLOOR * sx2**2:
        raise DegenerateStatistics("FD Bob gain denominator vanished")
    return num / den


def _hd_e_general(params: SystemParams) -> float:
    s, sa, sb = params.snr, params.snr_ae, params.snr_be
    n_hd = (
        s * (1.0 + sb) * sa * params.rho_ae**2
        + s * (1.0 + sa) * sb * params.rho_be**2
        - 2.0 * sa * sb * s * params.rho_ae * params.rho_be * params.rho_e
    )
    det_z = (1.0 + sa) * (1.0 + sb) - sa * sb * params.rho_e**2
    den = (1.0 + s) * det_z - n_hd
    if det_z <= 0 or den <= _DENOM_FLOOR * (1.0 + s) * det_z:
        raise DegenerateStatistics("HD Eve gain denominator vanished")
    return n_hd / den


def _fd_e_general(params: SystemParams) -> float:
    s, sa, sb = params.snr, params.snr_ae, params.snr_be
    n_fd = s * (math.sqrt(sa) * params.rho_ae + math.sqrt(sb) * params.rho_be) ** 2
    sigma_z = 1.0 + sa + sb + 2.0 * math.sqrt(sa * sb) * params.rho_e
    sx2 = 1.0 + s * (1.0 + params.alpha**2)
    den = sx2 * sigma_z - n_fd
    if sigma_z <= 0 or den <= _DENOM_FLOOR * sx2 * sigma_z:
        raise DegenerateStatistics("FD Eve gain denominator vanished")
    return n_fd / den


def gains_strong_eve_hd(params: SystemParams) -> float:
    """Eve's HD gain when her receiver noise is dropped.

    ``snr A / ((1+snr)(1-rho_e^2) - snr A)`` with
    ``A = rho_ae^2 + rho_be^2 - 2 rho_e rho_ae rho_be``.  Independent of
    the Eve-side SNR levels.
    """
    validate(params)
    s = params.snr
    a = params.rho_ae**2 + params.rho_be**2 - 2.0 * params.rho_e * params.rho_ae * params.rho_be
    den = (1.0 + s) * (1.0 - params.rho_e**2) - s * a
    if den <= 0:
        raise OutsideFeasibleRegion(
            f"HD strong-eavesdropper tuple infeasible (margin {den:.3e})"
        )
    return s * a / den


def gains_strong_eve_fd(params: SystemParams) -> float:
    """Eve's FD gain when her receiver noise is dropped.

    ``snr (rho_ae + xi rho_be)^2 / ((1 + xi^2 + 2 xi rho_e) sigma_x^2
    - snr (rho_ae + xi rho_be)^2)`` with ``xi = sqrt(snr_be / snr_ae)``.
    Vanishes on the nulling line ``rho_ae = -xi rho_be``.
    """
    validate(params)
    s, xi = params.snr, params.xi
    num = s * (params.rho_ae + xi * params.rho_be) ** 2
    sx2 = 1.0 + s * (1.0 + params.alpha**2)
    den = (1.0 + xi**2 + 2.0 * xi * params.rho_e) * sx2 - num
    if den <= 0:
        raise OutsideFeasibleRegion(
            f"FD strong-eavesdropper tuple infeasible (margin {den:.3e})"
        )
    return num / den


def hd_gains(params: SystemParams) -> ModeGains:
    """Closed-form HD gains; honors ``params.strong_eve``."""
    validate(params)
    e = gains_strong_eve_hd(params) if params.strong_eve else _hd_e_general(params)
    return ModeGains(_hd_b(params), e, Mode.HD, params.strong_eve)


def fd_gains(params: SystemParams) -> ModeGains:
    """Closed-form FD gains; honors ``params.strong_eve``."""
    validate(params)
    e = gains_strong_eve_fd(params) if params.strong_eve else _fd_e_general(params)
    return ModeGains(_fd_b(params), e, Mode.FD, params.strong_eve)


def mode_gains(params: SystemParams, mode: Mode) -> ModeGains:
    if Mode(mode) is Mode.HD:
        return hd_gains(params)
    return fd_gains(params)


def whitening_transform(stats: SourceStats) -> tuple[np.ndarray, np.ndarray]:
    """Lower-triangular factors (A_y, A_z) with ``A A^T`` equal to the
    conditional covariances of y and z given x.

    Applying ``A^{-1}`` whitens the conditional noise, which is the
    information-lossless step reducing the source to the two-gain form.
    """
    cond_y = np.array([[stats.sigma_y2 - stats.sigma_yx**2 / stats.sigma_x2]])
    try:
        a_y = np.linalg.cholesky(cond_y)
        a_z = np.linalg.cholesky(stats.sigma_z_given_x)
    except np.linalg.LinAlgError as exc:
        raise DegenerateStatistics(f"conditional covariance not factorizable: {exc}")
    return a_y, a_z
