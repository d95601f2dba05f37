"""Independent Monte Carlo ground truth for the closed-form pipeline.

Samples the exact probing observation models and re-estimates every
moment, error variance, expectation and bound direction that the rest
of the package computes analytically.  Streams use a counter-based
generator (Philox) keyed by ``(seed, stream_id)`` so parallel sweeps
stay reproducible without coordination; identical keys reproduce
identical draws bit-exactly on one platform.

Correlated channel draws are produced from a factor of the 3x3
correlation matrix of ``(h_ba, h_ae, h_be)``, and the reverse channel
is completed explicitly as ``h_ab = d h_ba + sqrt(1 - d^2) g`` with an
independent ``g`` and ``d`` the effective reciprocity coefficient.
This realizes the minimal symmetric completion of the unspecified
cross-moments (``E[h_ab h_ae] = d rho_ae`` and likewise for ``h_be``)
while remaining well-defined at ``|d| = 1``, where a direct 4x4
factorization would be singular.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidSample, OutOfRange
from .model import Mode, SourceStats, SystemParams, correlation_matrix, source_stats, validate
from .rates import (
    expected_log_chisq,
    fd_rate_gain,
    fd_reconciliation_rate_lower,
    hd_reconciliation_rate_upper,
    mmse_error_variance_fd,
    mmse_error_variance_hd,
)

__all__ = [
    "SeededStream",
    "SampleBatch",
    "CheckResult",
    "sample_observations",
    "mmse_channel_estimates",
    "empirical_mmse_variance",
    "empirical_log_chisq",
    "covariance_checks",
    "bound_direction_checks",
    "validation_report",
]


@dataclass(frozen=True)
class SeededStream:
    """Reproducible, splittable random stream identity."""

    seed: int
    stream_id: int = 0

    def generator(self) -> np.random.Generator:
        if self.seed < 0 or self.stream_id < 0:
            raise OutOfRange("seed and stream_id must be non-negative")
        return np.random.Generator(np.random.Philox(key=[self.seed, self.stream_id]))

    def split(self, stream_id: int) -> "SeededStream":
        return SeededStream(self.seed, stream_id)


@dataclass(eq=False)
class SampleBatch:
    """I.i.d. draws of channels and observations for one mode."""

    params: SystemParams
    mode: Mode
    n: int
    h_ba: np.ndarray
    h_ab: np.ndarray
    h_ae: np.ndarray
    h_be: np.ndarray
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray  # shape (n, N_z)


@dataclass(frozen=True)
class CheckResult:
    """One empirical-vs-analytic comparison.

    ``kind`` is ``two-sided`` (|estimate - target| <= n_se * se),
    ``upper`` (estimate <= target + n_se * se) or ``lower``
    (estimate >= target - n_se * se).
    """

    name: str
    estimate: float
    target: float
    se: float
    n_se: float
    kind: str
    passed: bool


def _check(name, estimate, target, se, n_se, kind) -> CheckResult:
    if kind == "two-sided":
        ok = abs(estimate - target) <= n_se * se
    elif kind == "upper":
        ok = estimate <= target + n_se * se
    elif kind == "lower":
        ok = estimate >= target - n_se * se
    else:
        raise ValueError(f"unknown check kind {kind!r}")
    return CheckResult(name, float(estimate), float(target), float(se), n_se, kind, ok)


def _correlation_factor(params: SystemParams) -> np.ndarray:
    corr = correlation_matrix(params)
    try:
        return np.linalg.cholesky(corr)
    except np.linalg.LinAlgError:
        # Valid but singular correlation (e.g. |rho_e| = 1): use the
        # symmetric eigenvalue square root instead.
        eigvals, eigvecs = np.linalg.eigh(corr)
        return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


def sample_observations(
    params: SystemParams, mode: Mode, n: int, stream: SeededStream
) -> SampleBatch:
    """Draw ``n`` i.i.d. blocks of the exact observation model.

    Draw order is fixed (channel block, reciprocity completion, noise
    block) so a given stream always yields the same batch.
    """
    validate(params)
    mode = Mode(mode)
    if n < 1:
        raise OutOfRange(f"n must be >= 1, got {n!r}")
    rng = stream.generator()

    base = rng.standard_normal((n, 3)) @ _correlation_factor(params).T
    h_ba, h_ae, h_be = base[:, 0], base[:, 1], base[:, 2]
    d = params.delta * params.rho_ba if mode is Mode.HD else params.rho_ba
    g = rng.standard_normal(n)
    h_ab = d * h_ba + np.sqrt(max(1.0 - d * d, 0.0)) * g

    s, sa, sb = params.snr, params.snr_ae, params.snr_be
    rs, rsa, rsb = np.sqrt(s), np.sqrt(sa), np.sqrt(sb)
    eve_noise = 0.0 if params.strong_eve else 1.0
    if mode is Mode.HD:
        noise = rng.standard_normal((n, 4))
        x = rs * h_ba + noise[:, 0]
        y = rs * h_ab + noise[:, 1]
        z = np.column_stack(
            [rsa * h_ae + eve_noise * noise[:, 2], rsb * h_be + eve_noise * noise[:, 3]]
        )
    else:
        noise = rng.standard_normal((n, 5))
        x = rs * h_ba + params.alpha * rs * noise[:, 2] + noise[:, 0]
        y = rs * h_ab + params.alpha * rs * noise[:, 3] + noise[:, 1]
        z = (rsa * h_ae + rsb * h_be + eve_noise * noise[:, 4]).reshape(n, 1)
    return SampleBatch(params, mode, n, h_ba, h_ab, h_ae, h_be, x, y, z)


def _probing_sigma_y2(params: SystemParams, mode: Mode) -> float:
    if Mode(mode) is Mode.HD:
        return 1.0 + params.snr
    return 1.0 + params.snr * (1.0 + params.alpha**2)


def mmse_channel_estimates(batch: SampleBatch) -> np.ndarray:
    """MMSE estimates of ``h_ab`` from the probing observations ``y``.

    Uses the analytic coefficient ``sqrt(snr) / sigma_y^2``; the
    estimates are zero-mean Gaussian with variance
    ``snr / sigma_y^2``.
    """
    c = np.sqrt(batch.params.snr) / _probing_sigma_y2(batch.params, batch.mode)
    return c * batch.y


def empirical_mmse_variance(batch: SampleBatch) -> tuple[float, float]:
    """Empirical channel-estimation error variance with standard error."""
    resid_sq = (batch.h_ab - mmse_channel_estimates(batch)) ** 2
    return float(resid_sq.mean()), float(resid_sq.std(ddof=1) / np.sqrt(batch.n))


def empirical_log_chisq(hhat: np.ndarray) -> tuple[float, float]:
    """Sample mean of ``ln(hhat^2)`` with standard error.

    Raises
    ------
    InvalidSample
        If any draw is exactly zero (log of zero; a measure-zero event
        for the continuous model).
    """
    hhat = np.asarray(hhat, dtype=float)
    if hhat.size == 0:
        raise InvalidSample("empty batch")
    if np.any(hhat == 0.0):
        raise InvalidSample("batch contains exact zeros; ln(h^2) undefined")
    logs = np.log(hhat**2)
    return float(logs.mean()), float(logs.std(ddof=1) / np.sqrt(logs.size))


def covariance_checks(
    batch: SampleBatch, stats: SourceStats, n_se: float = 5.0
) -> list[CheckResult]:
    """Compare every second moment of the batch against ``stats``.

    Variances, the legitimate cross-moment, Eve's covariance entries
    and Eve's cross-moments with Alice, each within ``n_se`` standard
    errors (two-sided).
    """
    n = batch.n
    results = []

    def moment(name, samples, target):
        results.append(
            _check(name, samples.mean(), target, samples.std(ddof=1) / np.sqrt(n), n_se, "two-sided")
        )

    moment("var_x", batch.x**2, stats.sigma_x2)
    moment("var_y", batch.y**2, stats.sigma_y2)
    moment("cov_xy", batch.x * batch.y, stats.sigma_yx)
    nz = stats.n_z
    for i in range(nz):
        for j in range(i, nz):
            moment(f"cov_z{i + 1}z{j + 1}", batch.z[:, i] * batch.z[:, j], stats.sigma_z[i, j])
    for i in range(nz):
        moment(f"cov_z{i + 1}x", batch.z[:, i] * batch.x, stats.sigma_zx[i])
    return results


def bound_direction_checks(
    params: SystemParams, mode: Mode, n: int, stream: SeededStream, n_se: float = 3.0
) -> list[CheckResult]:
    """Verify the direction of the mode's reconciliation-rate bound.

    HD: the Jensen bound must sit at or above the sample mean of
    ``(1-beta)/4 log2(1 + h^2 snr)`` over the true channel.  FD: the
    convexity bound must sit at or below the sample mean of
    ``(1-beta)/2 log2(1 + c h^2)`` over the channel estimate.
    """
    validate(params)
    mode = Mode(mode)
    rng = stream.generator()
    s, beta = params.snr, params.beta
    if mode is Mode.HD:
        h = rng.standard_normal(n)
        samples = 0.25 * (1.0 - beta) * np.log2(1.0 + h**2 * s)
        bound = hd_reconciliation_rate_upper(s, beta).value
        kind, name = "upper", "jensen_upper_hd"
    else:
        sigma_hhat2 = s / _probing_sigma_y2(params, mode)
        hhat = np.sqrt(sigma_hhat2) * rng.standard_normal(n)
        gain = fd_rate_gain(s, params.alpha)
        samples = 0.5 * (1.0 - beta) * np.log2(1.0 + gain * hhat**2)
        bound = fd_reconciliation_rate_lower(s, params.alpha, beta).value
        kind, name = "lower", "convexity_lower_fd"
    se = samples.std(ddof=1) / np.sqrt(n)
    return [_check(name, samples.mean(), bound, se, n_se, kind)]


def validation_report(
    params: SystemParams,
    n: int,
    seed: int,
    inject_bias: float = 0.0,
) -> list[CheckResult]:
    """Run the full oracle suite for one parameter set.

    Covariance agreement (5 SE), MMSE error variances (3 SE), the
    log-chi-square expectation (3 SE) and both bound directions (3 SE),
    for the HD and FD sources.  ``inject_bias`` multiplies the analytic
    FD error-variance target by ``1 + inject_bias``; it exists as a
    negative control for the test harness.
    """
    results: list[CheckResult] = []
    for stream_id, mode in ((0, Mode.HD), (1, Mode.FD)):
        batch = sample_observations(params, mode, n, SeededStream(seed, stream_id))
        results.extend(_prefixed(covariance_checks(batch, source_stats(params, mode)), mode))
        est, se = empirical_mmse_variance(batch)
        if mode is Mode.HD:
            target = mmse_error_variance_hd(params.snr)
        else:
            target = mmse_error_variance_fd(params.snr, params.alpha) * (1.0 + inject_bias)
        results.append(_check(f"{mode.value}_mmse_error_variance", est, target, se, 3.0, "two-sided"))

        hhat = mmse_channel_estimates(batch)
        est, se = empirical_log_chisq(hhat)
        sigma_hhat2 = params.snr / _probing_sigma_y2(params, mode)
        results.append(
            _check(
                f"{mode.value}_expected_log_chisq",
                est,
                expected_log_chisq(sigma_hhat2),
                se,
                3.0,
                "two-sided",
            )
        )
        results.extend(
            _prefixed(
                bound_direction_checks(params, mode, n, SeededStream(seed, stream_id + 2)), mode
            )
        )
    return results


def _prefixed(checks: list[CheckResult], mode: Mode) -> list[CheckResult]:
    return [
        CheckResult(f"{mode.value}_{c.name}", c.estimate, c.target, c.se, c.n_se, c.kind, c.passed)
        for c in checks
    ]
