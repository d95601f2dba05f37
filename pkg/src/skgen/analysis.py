"""Higher-level studies: probing trade-off, feasibility regions, high SNR.

The probing fraction ``beta`` trades shared randomness against public
reconciliation capacity; the secret-key rate is strictly concave in it,
so a golden-section search finds the optimum.  The strong-eavesdropper
specialization induces feasibility regions over the correlation tuples
(Eve's conditional covariance must stay positive definite in both
modes), and in the high-SNR limit two closed-form conditions decide
whether FD beats HD.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AssumptionViolated, NoPositiveRate
from .gains import mode_gains
from .keyrate import key_rate_raw
from .model import Mode, SystemParams, validate
from .rates import EULER_GAMMA
from .tsv import SweepTable

__all__ = [
    "BetaStarResult",
    "RegionMesh",
    "HighSnrResult",
    "secret_key_rate_vs_beta",
    "beta_star",
    "concavity_check",
    "feasible_hd",
    "feasible_fd",
    "region_mesh",
    "high_snr_check",
    "improvement_surface",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
BETA_SEARCH_EDGE = 1e-6
BETA_BRACKET_TOL = 1e-8
REGION_BOUNDARY_MARGIN = 1e-9

_SURFACE_AXES = ("rho_ae", "rho_be", "rho_e", "xi", "xi_db")


@dataclass(frozen=True)
class BetaStarResult:
    """Optimal probing fraction and the rate it achieves."""

    beta_star: float
    r_sk_star: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class HighSnrResult:
    """Outcome of the high-SNR sufficiency test."""

    cond1: bool
    cond2: bool
    fd_wins: bool


@dataclass(frozen=True, eq=False)
class RegionMesh:
    """Cell-wise feasibility flags over a correlation grid.

    ``in_both`` is the intersection and is contained in each of
    ``in_hd`` and ``in_fd`` cell-wise by construction.
    """

    axes: dict[str, np.ndarray]
    in_hd: np.ndarray
    in_fd: np.ndarray
    in_both: np.ndarray

    @property
    def shape(self) -> tuple[int, ...]:
        return self.in_both.shape


def _per_block_rate(params: SystemParams, mode: Mode) -> float:
    """Reconciliation rate per remaining block; independent of beta."""
    s = params.snr
    if Mode(mode) is Mode.HD:
        return 0.25 * math.log2(1.0 + s)
    a2 = params.alpha**2
    den = 1.0 + 2.0 * s + a2 * s * (1.0 + s)
    return 0.5 * math.log2(1.0 + 0.5 * math.exp(-EULER_GAMMA) * s * s / den)


def secret_key_rate_vs_beta(params: SystemParams, mode: Mode, beta) -> np.ndarray:
    """The mode's bounded secret-key rate as a function of ``beta``.

    The gains do not depend on ``beta`` and the reconciliation-rate
    bounds scale as ``(1 - beta)``, so this is the one-dimensional
    objective of the probing trade-off.  Accepts scalars or arrays.
    """
    g = mode_gains(params, mode)
    r_tilde = _per_block_rate(params, mode)
    beta = np.asarray(beta, dtype=float)
    return key_rate_raw(g.b_x2, g.e_x2, (1.0 - beta) * r_tilde, beta)


def beta_star(params: SystemParams, mode: Mode) -> BetaStarResult:
    """Maximize the secret-key rate over the probing fraction.

    Golden-section search on ``(1e-6, 1 - 1e-6)``; converged once the
    bracket is below 1e-8.  Concavity of the objective makes the
    search exact up to that bracket.

    Raises
    ------
    NoPositiveRate
        When the mode's gains give Eve at least Bob's advantage
        (``b_x2 <= e_x2``), so the objective is nowhere positive.
    """
    validate(params)
    g = mode_gains(params, mode)
    if g.b_x2 <= g.e_x2:
        raise NoPositiveRate(
            f"b_x2 = {g.b_x2:.6g} <= e_x2 = {g.e_x2:.6g}; no positive key rate"
        )
    r_tilde = _per_block_rate(params, mode)

    def f(beta: float) -> float:
        return float(key_rate_raw(g.b_x2, g.e_x2, (1.0 - beta) * r_tilde, beta))

    lo, hi = BETA_SEARCH_EDGE, 1.0 - BETA_SEARCH_EDGE
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    iterations = 0
    max_iterations = 200
    while hi - lo > BETA_BRACKET_TOL and iterations < max_iterations:
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = f(d)
        iterations += 1
    best = 0.5 * (lo + hi)
    return BetaStarResult(
        beta_star=best,
        r_sk_star=f(best),
        iterations=iterations,
        converged=hi - lo <= BETA_BRACKET_TOL,
    )


def concavity_check(params: SystemParams, mode: Mode, beta_grid) -> bool:
    """Numerically confirm concavity of the rate in ``beta``.

    Central second differences must stay at or below +1e-9 at every
    interior grid point.  Vacuously true (with a warning) when the
    positive-rate precondition fails.
    """
    g = mode_gains(params, mode)
    if g.b_x2 <= g.e_x2:
        warnings.warn("b_x2 <= e_x2: concavity precondition fails, check skipped")
        return True
    values = secret_key_rate_vs_beta(params, mode, np.asarray(beta_grid, dtype=float))
    second = values[2:] - 2.0 * values[1:-1] + values[:-2]
    return bool(np.all(second <= 1e-9))


def _hd_margin(snr, rho_ae, rho_be, rho_e):
    quad = rho_ae**2 + rho_be**2 - 2.0 * rho_ae * rho_be * rho_e
    return 1.0 - rho_e**2 - snr / (1.0 + snr) * quad


def _fd_margin(snr, alpha, xi, rho_ae, rho_be, rho_e):
    quad = (rho_ae + xi * rho_be) ** 2
    return 1.0 + xi**2 + 2.0 * xi * rho_e - snr / (1.0 + snr * (1.0 + alpha**2)) * quad


def feasible_hd(params: SystemParams, margin: float = 0.0) -> bool:
    """Strong-eavesdropper feasibility of the HD correlation tuple."""
    return bool(_hd_margin(params.snr, params.rho_ae, params.rho_be, params.rho_e) > margin)


def feasible_fd(params: SystemParams, margin: float = 0.0) -> bool:
    """Strong-eavesdropper feasibility of the FD correlation tuple."""
    return bool(
        _fd_margin(params.snr, params.alpha, params.xi, params.rho_ae, params.rho_be, params.rho_e)
        > margin
    )


def _grid_fields(params: SystemParams, axes: dict[str, np.ndarray]):
    """Meshgrid of the swept axes merged with the template's fixed values."""
    for name in axes:
        if name not in _SURFACE_AXES:
            raise ValueError(f"unsupported grid axis {name!r}; use one of {_SURFACE_AXES}")
    if "xi" in axes and "xi_db" in axes:
        raise ValueError("give the xi axis either linearly or in dB, not both")
    arrays = [np.asarray(v, dtype=float) for v in axes.values()]
    mesh = np.meshgrid(*arrays, indexing="ij") if arrays else []
    fields = dict(zip(axes.keys(), mesh))
    if "xi_db" in fields:
        fields["xi"] = 10.0 ** (fields.pop("xi_db") / 20.0)
    out = {
        "rho_ae": fields.get("rho_ae", params.rho_ae),
        "rho_be": fields.get("rho_be", params.rho_be),
        "rho_e": fields.get("rho_e", params.rho_e),
        "xi": fields.get("xi", params.xi),
    }
    shape = mesh[0].shape if mesh else ()
    return out, shape


def region_mesh(
    params_template: SystemParams,
    grid_spec: dict[str, np.ndarray],
    margin: float = REGION_BOUNDARY_MARGIN,
) -> RegionMesh:
    """Evaluate both feasibility conditions on a correlation grid.

    Cells within ``margin`` of a boundary count as infeasible, matching
    the strict inequalities of the region definitions.
    """
    validate(params_template)
    fields, shape = _grid_fields(params_template, grid_spec)
    s, alpha = params_template.snr, params_template.alpha
    m_hd = np.broadcast_to(
        _hd_margin(s, fields["rho_ae"], fields["rho_be"], fields["rho_e"]), shape
    )
    m_fd = np.broadcast_to(
        _fd_margin(s, alpha, fields["xi"], fields["rho_ae"], fields["rho_be"], fields["rho_e"]),
        shape,
    )
    in_hd = m_hd > margin
    in_fd = m_fd > margin
    return RegionMesh(
        axes={k: np.asarray(v, dtype=float) for k, v in grid_spec.items()},
        in_hd=in_hd,
        in_fd=in_fd,
        in_both=in_hd & in_fd,
    )


def high_snr_check(params: SystemParams) -> HighSnrResult:
    """Sufficient conditions for FD beating HD as SNR grows without bound.

    Requires the symmetric-eavesdropper setting ``rho_ae == rho_be``
    with perfect self-interference cancellation ``alpha == 0``; raises
    ``AssumptionViolated`` otherwise.  ``cond1`` compares the
    reciprocity advantage against Eve's high-SNR gain,
    ``delta^2 rho_ba^2 > 2 rho_ae^2 / (1 + rho_e - 2 rho_ae^2)``;
    ``cond2`` is ``rho_e < 1``.  Both are meaningful inside the
    feasible region (``1 + rho_e - 2 rho_ae^2 > 0``).
    """
    validate(params)
    if params.rho_ae != params.rho_be:
        raise AssumptionViolated(
            f"symmetric eavesdropper required: rho_ae={params.rho_ae!r} != rho_be={params.rho_be!r}"
        )
    if params.alpha != 0.0:
        raise AssumptionViolated(f"alpha must be 0, got {params.alpha!r}")
    with np.errstate(divide="ignore", invalid="ignore"):
        threshold = np.float64(2.0 * params.rho_ae**2) / np.float64(
            1.0 + params.rho_e - 2.0 * params.rho_ae**2
        )
        cond1 = bool((params.delta * params.rho_ba) ** 2 > threshold)
    cond2 = params.rho_e < 1.0
    return HighSnrResult(cond1=cond1, cond2=cond2, fd_wins=cond1 and cond2)


def improvement_surface(
    params_template: SystemParams, axes: dict[str, np.ndarray]
) -> SweepTable:
    """Strong-eavesdropper FD-minus-HD rate difference over a grid.

    Per cell: the FD lower secret-key bound minus the HD upper bound,
    both computed with noise-free-Eve gains and clamped below at zero
    (a negative bound certifies no key, so it contributes none to the
    comparison).  Cells outside the intersection of the two feasibility
    regions carry an empty difference.  Rows enumerate the grid in
    row-major order of the given axes.
    """
    template = params_template.with_(strong_eve=True)
    validate(template)
    fields, shape = _grid_fields(template, axes)
    s, alpha, beta = template.snr, template.alpha, template.beta

    m_hd = np.broadcast_to(
        _hd_margin(s, fields["rho_ae"], fields["rho_be"], fields["rho_e"]), shape
    ).astype(float)
    m_fd = np.broadcast_to(
        _fd_margin(s, alpha, fields["xi"], fields["rho_ae"], fields["rho_be"], fields["rho_e"]),
        shape,
    ).astype(float)
    in_hd = m_hd > REGION_BOUNDARY_MARGIN
    in_fd = m_fd > REGION_BOUNDARY_MARGIN
    valid = in_hd & in_fd

    # Gains: Bob's are cell-independent; Eve's denominators are the
    # feasibility margins rescaled, so the masks above guard them.
    b_hd = mode_gains(template.with_(strong_eve=False), Mode.HD).b_x2
    b_fd = mode_gains(template.with_(strong_eve=False), Mode.FD).b_x2
    quad_hd = (
        fields["rho_ae"] ** 2
        + fields["rho_be"] ** 2
        - 2.0 * fields["rho_e"] * fields["rho_ae"] * fields["rho_be"]
    )
    sx2_fd = 1.0 + s * (1.0 + alpha**2)
    with np.errstate(divide="ignore", invalid="ignore"):
        e_hd = np.where(valid, s * quad_hd / ((1.0 + s) * m_hd), np.nan)
        e_fd = np.where(
            valid,
            s * (fields["rho_ae"] + fields["xi"] * fields["rho_be"]) ** 2 / (sx2_fd * m_fd),
            np.nan,
        )
        r_r_hd = (1.0 - beta) / 4.0 * np.log2(1.0 + s)
        a2 = alpha**2
        r_r_fd = (1.0 - beta) / 2.0 * np.log2(
            1.0 + 0.5 * np.exp(-EULER_GAMMA) * s * s / (1.0 + 2.0 * s + a2 * s * (1.0 + s))
        )
        r_sk_hd = np.maximum(key_rate_raw(b_hd, e_hd, r_r_hd, beta), 0.0)
        r_sk_fd = np.maximum(key_rate_raw(b_fd, e_fd, r_r_fd, beta), 0.0)
        diff = r_sk_fd - r_sk_hd

    table = SweepTable(list(axes.keys()) + ["in_hd", "in_fd", "in_both", "rate_diff"])
    axis_values = [np.asarray(v, dtype=float) for v in axes.values()]
    for idx in itertools.product(*(range(len(v)) for v in axis_values)):
        coords = tuple(float(axis_values[k][i]) for k, i in enumerate(idx))
        ok = bool(valid[idx])
        table.append(
            coords
            + (
                bool(in_hd[idx]),
                bool(in_fd[idx]),
                ok,
                float(diff[idx]) if ok else None,
            )
        )
    return table
