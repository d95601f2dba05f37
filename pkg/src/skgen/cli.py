"""Command-line front end: named studies with TSV output.

Subcommands
-----------
rates     secret-key rate bounds of both modes and their ratio
beta-opt  optimal probing fraction per mode
region    feasibility flags and rate differences over a correlation grid
highsnr   high-SNR sufficiency conditions
validate  Monte Carlo oracle suite against the closed forms

Parameters are taken from built-in defaults, then an optional
``key = value`` config file, then per-parameter flags, in that order.
SNR-like quantities enter in dB and are converted once at this
boundary: power quantities as ``10^(dB/10)``, amplitude-like ones
(``alpha``, ``xi``) as ``10^(dB/20)``.  The library itself is
linear-only.  Pass ``-inf`` to ``--alpha-db`` for perfect cancellation.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .analysis import beta_star, high_snr_check, improvement_surface
from .errors import (
    AssumptionViolated,
    DegenerateStatistics,
    InvalidCorrelationMatrix,
    NoPositiveRate,
    OutOfRange,
    OutsideFeasibleRegion,
)
from .gains import mode_gains
from .keyrate import improvement_ratio, key_reconciliation, mode_rate_bound
from .mcoracle import validation_report
from .model import Mode, SystemParams
from .tsv import SweepTable, format_field, write_tsv

__all__ = ["main", "build_parser"]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_DOMAIN_ERROR = 3

# Defaults reproduce the headline comparison scenario: symmetric 0.4
# correlations toward Eve, near-perfect reciprocity, an even resource
# split, Eve at the legitimate SNR, and -20 dB residual SI.
DEFAULTS = {
    "snr_db": 15.0,
    "alpha_db": -20.0,
    "beta": 0.5,
    "rho_ae": 0.4,
    "rho_be": 0.4,
    "rho_e": 0.4,
    "rho_ba": 1.0,
    "delta": 0.97,
    "xi_db": 0.0,
    "strong_eve": False,
    "seed": 42,
    "samples": 1_000_000,
}

_FLOAT_KEYS = ("snr_db", "alpha_db", "beta", "rho_ae", "rho_be", "rho_e", "rho_ba", "delta", "xi_db")
_INT_KEYS = ("seed", "samples")
_STUDY_KEYS = ("sweep", "grid", "out", "rr", "inject_bias")
SWEEPABLE = _FLOAT_KEYS
GRID_AXES = ("rho_ae", "rho_be", "rho_e", "xi_db")


class ConfigError(Exception):
    pass


def params_from_config(cfg: dict) -> SystemParams:
    """Convert a dB-domain configuration into linear SystemParams.

    Eve's SNRs derive from the legitimate one: ``snr_ae = snr`` and
    ``snr_be = xi^2 snr_ae``, so ``xi_db = 0`` gives the symmetric
    eavesdropper.
    """
    snr = 10.0 ** (cfg["snr_db"] / 10.0)
    alpha = 10.0 ** (cfg["alpha_db"] / 20.0)
    xi = 10.0 ** (cfg["xi_db"] / 20.0)
    return SystemParams(
        snr=snr,
        snr_ae=snr,
        snr_be=xi**2 * snr,
        rho_e=cfg["rho_e"],
        rho_ae=cfg["rho_ae"],
        rho_be=cfg["rho_be"],
        rho_ba=cfg["rho_ba"],
        delta=cfg["delta"],
        alpha=alpha,
        beta=cfg["beta"],
        strong_eve=bool(cfg["strong_eve"]),
    )


def _convert(key: str, raw: str):
    if key in _FLOAT_KEYS or key in ("rr", "inject_bias"):
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: not a number: {raw!r}") from exc
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"{key}: not an integer: {raw!r}") from exc
    if key == "strong_eve":
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"strong_eve: not a boolean: {raw!r}")
    return raw.strip()


def load_config_file(path: str) -> dict:
    """Parse a plain ``key = value`` file with ``#`` comments."""
    cfg: dict = {}
    try:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {text!r}")
        key, raw = (part.strip() for part in text.split("=", 1))
        if key == "grid":
            cfg.setdefault("grid", []).append(raw)
            continue
        if key not in DEFAULTS and key not in _STUDY_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        cfg[key] = _convert(key, raw)
    return cfg


def parse_range(text: str) -> tuple[str, np.ndarray]:
    """Parse ``name=start:stop:count`` into an inclusive linspace."""
    if "=" not in text:
        raise ConfigError(f"expected name=start:stop:count, got {text!r}")
    name, spec = (part.strip() for part in text.split("=", 1))
    pieces = spec.split(":")
    if len(pieces) != 3:
        raise ConfigError(f"expected start:stop:count in {text!r}")
    try:
        start, stop, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
    except ValueError as exc:
        raise ConfigError(f"bad range {spec!r}") from exc
    if count < 1:
        raise ConfigError(f"count must be >= 1 in {text!r}")
    return name, np.linspace(start, stop, count)


def _merge_config(args: argparse.Namespace, command_defaults: dict | None = None) -> dict:
    cfg = dict(DEFAULTS)
    if command_defaults:
        cfg.update(command_defaults)
    cfg["out"] = None
    cfg["sweep"] = None
    cfg["grid"] = []
    cfg["rr"] = None
    cfg["inject_bias"] = 0.0
    if getattr(args, "config", None):
        cfg.update(load_config_file(args.config))
    for key in (*DEFAULTS, "out", "sweep", "rr", "inject_bias"):
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    if getattr(args, "grid", None):
        cfg["grid"] = list(args.grid)
    return cfg


def _emit(table: SweepTable, out: str | None) -> None:
    if out:
        write_tsv(table, out)
    else:
        write_tsv(table, sys.stdout)


def _rate_row(cfg: dict) -> tuple:
    params = params_from_config(cfg)
    beta = params.beta
    if cfg["rr"] is not None:
        r_r_hd = r_r_fd = float(cfg["rr"])
        r_sk_hd = key_reconciliation(mode_gains(params, Mode.HD), r_r_hd, beta)
        r_sk_fd = key_reconciliation(mode_gains(params, Mode.FD), r_r_fd, beta)
    else:
        hd = mode_rate_bound(params, Mode.HD)
        fd = mode_rate_bound(params, Mode.FD)
        r_r_hd, r_sk_hd = hd.r_r, hd.r_sk
        r_r_fd, r_sk_fd = fd.r_r, fd.r_sk
    try:
        eta = improvement_ratio(r_sk_fd, r_sk_hd)
    except ZeroDivisionError:
        eta = float("nan")
    return (r_r_hd, r_sk_hd, r_r_fd, r_sk_fd, eta)


def cmd_rates(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    if cfg["sweep"] is None:
        row = _rate_row(cfg)
        names = ("r_r_hd", "r_sk_hd", "r_r_fd", "r_sk_fd", "eta_lower")
        print("\t".join(f"{n}={format_field(v)}" for n, v in zip(names, row)))
        if cfg["out"]:
            table = SweepTable(list(names), [row])
            write_tsv(table, cfg["out"])
        return EXIT_OK
    name, values = parse_range(cfg["sweep"])
    if name not in SWEEPABLE:
        raise ConfigError(f"cannot sweep {name!r}; choose one of {SWEEPABLE}")
    table = SweepTable([name, "r_r_hd", "r_sk_hd", "r_r_fd", "r_sk_fd", "eta_lower"])
    for value in values:
        point = dict(cfg)
        point[name] = float(value)
        table.append((float(value),) + _rate_row(point))
    _emit(table, cfg["out"])
    return EXIT_OK


def cmd_beta_opt(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    if cfg["sweep"] is None:
        name, values = "snr_db", np.array([cfg["snr_db"]])
    else:
        name, values = parse_range(cfg["sweep"])
        if name not in SWEEPABLE:
            raise ConfigError(f"cannot sweep {name!r}; choose one of {SWEEPABLE}")
    table = SweepTable([name, "beta_star_hd", "beta_star_fd"])
    for value in values:
        point = dict(cfg)
        point[name] = float(value)
        params = params_from_config(point)
        stars = []
        for mode in (Mode.HD, Mode.FD):
            try:
                stars.append(beta_star(params, mode).beta_star)
            except NoPositiveRate as exc:
                print(f"warning: {name}={value:g} {mode.value}: {exc}", file=sys.stderr)
                stars.append(float("nan"))
        table.append((float(value), stars[0], stars[1]))
    _emit(table, cfg["out"])
    return EXIT_OK


def cmd_region(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    specs = cfg["grid"] or ["rho_ae=-0.95:0.95:20", "rho_be=-0.95:0.95:20", "rho_e=-0.95:0.95:20"]
    axes: dict[str, np.ndarray] = {}
    for spec in specs:
        name, values = parse_range(spec)
        if name not in GRID_AXES:
            raise ConfigError(f"cannot grid over {name!r}; choose one of {GRID_AXES}")
        if name in axes:
            raise ConfigError(f"duplicate grid axis {name!r}")
        axes[name] = values
    params = params_from_config(cfg)
    table = improvement_surface(params, axes)
    _emit(table, cfg["out"])
    return EXIT_OK


def cmd_highsnr(args: argparse.Namespace) -> int:
    # The sufficiency test is defined under perfect SI cancellation.
    cfg = _merge_config(args, command_defaults={"alpha_db": float("-inf")})
    result = high_snr_check(params_from_config(cfg))
    print(f"cond1={int(result.cond1)}\tcond2={int(result.cond2)}\tfd_wins={int(result.fd_wins)}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    n = int(cfg["samples"])
    if n < 10_000:
        print(
            f"warning: n={n} gives low statistical power;3-5 SE bounds still applied",
            file=sys.stderr,
        )
    checks = validation_report(
        params_from_config(cfg), n, int(cfg["seed"]), inject_bias=float(cfg["inject_bias"])
    )
    failed = 0
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        print(
            f"{status}\t{c.name}\testimate={format_field(c.estimate)}"
            f"\ttarget={format_field(c.target)}\tse={format_field(c.se)}"
            f"\tslack={c.n_se:g}se\t{c.kind}"
        )
        failed += 0 if c.passed else 1
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value config file")
    group = common.add_argument_group("scenario parameters (defaults in parentheses)")
    group.add_argument("--snr-db", dest="snr_db", type=float, metavar="DB",
                       help=f"legitimate-link SNR in dB ({DEFAULTS['snr_db']:g})")
    group.add_argument("--alpha-db", dest="alpha_db", type=float, metavar="DB",
                       help=f"residual SI amplitude in dB, -inf for none ({DEFAULTS['alpha_db']:g})")
    group.add_argument("--beta", type=float, help=f"probing fraction in (0,1) ({DEFAULTS['beta']:g})")
    group.add_argument("--rho-ae", dest="rho_ae", type=float, metavar="R",
                       help=f"corr(h_ae, h_ba) ({DEFAULTS['rho_ae']:g})")
    group.add_argument("--rho-be", dest="rho_be", type=float, metavar="R",
                       help=f"corr(h_be, h_ba) ({DEFAULTS['rho_be']:g})")
    group.add_argument("--rho-e", dest="rho_e", type=float, metavar="R",
                       help=f"corr(h_ae, h_be) ({DEFAULTS['rho_e']:g})")
    group.add_argument("--rho-ba", dest="rho_ba", type=float, metavar="R",
                       help=f"reciprocity correlation ({DEFAULTS['rho_ba']:g})")
    group.add_argument("--delta", type=float,
                       help=f"HD delay penalty in (0,1] ({DEFAULTS['delta']:g})")
    group.add_argument("--xi-db", dest="xi_db", type=float, metavar="DB",
                       help=f"Bob-to-Eve vs Alice-to-Eve strength ratio in dB ({DEFAULTS['xi_db']:g})")
    group.add_argument("--strong-eve", dest="strong_eve", action=argparse.BooleanOptionalAction,
                       default=None, help="drop Eve's receiver noise (off)")
    common.add_argument("--seed", type=int, help=f"random seed ({DEFAULTS['seed']})")
    common.add_argument("--samples", type=int, metavar="N",
                        help=f"Monte Carlo sample count ({DEFAULTS['samples']})")
    common.add_argument("--out", metavar="PATH", help="write TSV here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="skgen",
        description="Secret-key generation rates for half- vs full-duplex channel probing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rates", parents=[common],
                       help="secret-key rate bounds and FD-over-HD ratio")
    p.add_argument("--sweep", metavar="NAME=A:B:N", help="sweep a parameter over N points")
    p.add_argument("--rr", type=float, metavar="RATE",
                   help="force the reconciliation rate instead of the mode bounds")
    p.set_defaults(func=cmd_rates)

    p = sub.add_parser("beta-opt", parents=[common], help="optimal probing fraction per mode")
    p.add_argument("--sweep", metavar="NAME=A:B:N", help="sweep a parameter over N points")
    p.set_defaults(func=cmd_beta_opt)

    p = sub.add_parser("region", parents=[common],
                       help="feasibility and rate-difference mesh (strong eavesdropper)")
    p.add_argument("--grid", action="append", metavar="NAME=A:B:N",
                   help="grid axis, repeatable (default: 20^3 over the correlations)")
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("highsnr", parents=[common], help="high-SNR sufficiency conditions")
    p.set_defaults(func=cmd_highsnr)

    p = sub.add_parser("validate", parents=[common], help="Monte Carlo oracle suite")
    p.add_argument("--inject-bias", dest="inject_bias", type=float, metavar="FRAC",
                   help="corrupt the FD error-variance target (negative control)")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OutOfRange, InvalidCorrelationMatrix) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (DegenerateStatistics, OutsideFeasibleRegion, NoPositiveRate, AssumptionViolated) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
