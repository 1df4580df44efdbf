"""Command-line front end.

Four subcommands:

    report       QFIM report for one configuration, as JSON
    sweep-alpha  control-benefit landscape over the effectiveness angle, as CSV
    curves       precision-versus-time curves for the magnetometry example, as CSV
    verify       randomized oracle cross-check suites, pass/fail summary

Configuration comes from a single flat JSON document (``--config``) with
per-field flag overrides; ``--config``, ``--out``, ``--seed`` and
``--samples`` are the only global flags.  Exit codes: 0 success, 1
verification failure, 2 invalid input.  All CSV numbers carry 17 significant
digits; non-finite values are serialized as the literals inf/-inf/nan.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass, fields

import numpy as np

from . import __version__
from .errors import Su2QfiError
from .magnetometry import (
    PARAMETER_NAMES,
    FieldPoint,
    magnetometry_scheme,
    precision_curves,
)
from .qfi import ENTANGLED_WITH_ANCILLA, PURE_QUBIT, build_report
from .scheme import MERGED, PRODUCT, SchemeConfig, gap_profile
from .verify import run_all, summarize


class ConfigError(Exception):
    """Invalid run configuration; ``code`` names the offending field."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    """One flat, losslessly round-trippable run description."""

    scenario: str = "magnetometry"
    # magnetometry dynamics
    B: float = 3.0
    theta: float = math.pi / 6
    phi: float = 0.0
    # generic dynamics: affine coefficient map X(x) = x0 + sum_l x_l * gradients[l]
    x0: tuple = (0.0, 0.0, 0.0)
    gradients: tuple = ()
    x: tuple = ()
    # scheme
    t: float = 1.0
    N: int = 5
    mode: str = MERGED
    # probe
    probe: str = "entangled"
    r: tuple = (0.0, 0.0, 1.0)
    # control
    control: str = "optimal"
    x_tilde: tuple = ()
    control_vector: tuple = (0.0, 0.0, 0.0)
    # sweep-alpha grid
    n_values: tuple = (3, 5, 10)
    alpha_count: int = 65
    x_norm: float = 2.0
    dx_norm: float = 1.0
    # curves
    n_max: int = 30
    controlled: bool = True

    def validate(self) -> "RunConfig":
        if self.scenario not in ("magnetometry", "generic"):
            raise ConfigError("unknown-scenario", f"unknown scenario {self.scenario!r}")
        if self.t <= 0:
            raise ConfigError("nonpositive-segment-time", f"t must be positive, got {self.t}")
        if self.N < 1:
            raise ConfigError("invalid-segment-count", f"N must be at least 1, got {self.N}")
        if self.n_max < 1:
            raise ConfigError("invalid-segment-count", f"n_max must be at least 1, got {self.n_max}")
        if any(n < 1 for n in self.n_values):
            raise ConfigError("invalid-segment-count", "every entry of n_values must be >= 1")
        if self.alpha_count < 1:
            raise ConfigError("empty-grid", "alpha_count must be at least 1")
        if self.probe not in ("pure", "entangled"):
            raise ConfigError("unknown-probe", f"unknown probe {self.probe!r}")
        if self.control not in ("none", "optimal", "custom"):
            raise ConfigError("unknown-control", f"unknown control {self.control!r}")
        if self.mode not in (MERGED, PRODUCT):
            raise ConfigError("unknown-mode", f"unknown composition mode {self.mode!r}")
        if len(self.r) != 3:
            raise ConfigError("bloch-norm", "r must be a 3-vector")
        if float(np.linalg.norm(self.r)) > 1.0 + 1e-12:
            raise ConfigError("bloch-norm", f"|r| = {np.linalg.norm(self.r):.6g} exceeds 1")
        if self.scenario == "generic":
            if len(self.gradients) == 0:
                raise ConfigError("missing-gradients", "generic scenario needs gradients")
            if len(self.gradients) > 3:
                raise ConfigError(
                    "too-many-parameters",
                    f"{len(self.gradients)} parameters; an su(2) process encodes at most 3",
                )
            for g in self.gradients:
                if len(g) != 3:
                    raise ConfigError("missing-gradients", "each gradient must be a 3-vector")
            if len(self.x) != len(self.gradients):
                raise ConfigError(
                    "parameter-point", "x must have one entry per gradient row"
                )
        return self

    def to_dict(self) -> dict:
        out = asdict(self)
        out["x0"] = list(out["x0"])
        out["gradients"] = [list(g) for g in out["gradients"]]
        out["x"] = list(out["x"])
        out["r"] = list(out["r"])
        out["x_tilde"] = list(out["x_tilde"])
        out["control_vector"] = list(out["control_vector"])
        out["n_values"] = list(out["n_values"])
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError("unknown-field", f"unknown config fields: {sorted(unknown)}")
        coerced = dict(data)
        for key in ("x0", "x", "r", "x_tilde", "control_vector", "n_values"):
            if key in coerced:
                coerced[key] = tuple(coerced[key])
        if "gradients" in coerced:
            coerced["gradients"] = tuple(tuple(g) for g in coerced["gradients"])
        return cls(**coerced).validate()


def _build_scheme(cfg: RunConfig) -> tuple[SchemeConfig, np.ndarray, tuple]:
    """Scheme, evaluation point and parameter names from a validated config."""
    if cfg.scenario == "magnetometry":
        point = FieldPoint(cfg.B, cfg.theta, cfg.phi)
        x = point.as_array()
        if cfg.control == "custom":
            control = np.asarray(cfg.control_vector, dtype=float)
        elif cfg.control == "optimal":
            control = "optimal"
        else:
            control = "none"
        x_tilde = np.asarray(cfg.x_tilde, dtype=float) if cfg.x_tilde else None
        scheme = magnetometry_scheme(
            point, cfg.t, cfg.N, control=control, x_tilde=x_tilde, mode=cfg.mode
        )
        return scheme, x, PARAMETER_NAMES
    # generic affine map
    x0 = np.asarray(cfg.x0, dtype=float)
    grads = np.asarray(cfg.gradients, dtype=float)
    x = np.asarray(cfg.x, dtype=float)
    d = grads.shape[0]

    def coefficients(xp):
        return x0 + grads.T @ xp

    def partials(xp):
        return grads

    if cfg.control == "custom":
        control_vec = np.asarray(cfg.control_vector, dtype=float)
    elif cfg.control == "optimal":
        x_tilde = np.asarray(cfg.x_tilde, dtype=float) if cfg.x_tilde else x
        control_vec = -coefficients(x_tilde)
    else:
        control_vec = np.zeros(3)
    scheme = SchemeConfig(
        coefficients=coefficients,
        partials=partials,
        n_params=d,
        control=control_vec,
        segment_time=cfg.t,
        segment_count=cfg.N,
        mode=cfg.mode,
        validation_points=(x,),
    )
    names = tuple(f"x{i + 1}" for i in range(d))
    return scheme, x, names


def _fmt(value) -> str:
    """17-significant-digit, round-trip-exact serialization of one cell."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _write_text(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_safe(obj):
    """Replace non-finite floats with the string literals inf/-inf/nan."""
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        if math.isinf(val):
            return "inf" if val > 0 else "-inf"
        if math.isnan(val):
            return "nan"
        return val
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def cmd_report(cfg: RunConfig, out_path: str | None) -> int:
    scheme, x, names = _build_scheme(cfg)
    probe_kind = ENTANGLED_WITH_ANCILLA if cfg.probe == "entangled" else PURE_QUBIT
    r = np.asarray(cfg.r, dtype=float) if cfg.probe == "pure" else None
    report = build_report(scheme, x, probe_kind, r=r, parameter_names=names)
    document = {"version": __version__, "config": cfg.to_dict()}
    document.update(report.to_dict())
    _write_text(json.dumps(_json_safe(document), indent=2) + "\n", out_path)
    return 0

def cmd_sweep_alpha(cfg: RunConfig, out_path: str | None) -> int:
    alphas = np.linspace(0.0, np.pi, cfg.alpha_count)
    rows = gap_profile(cfg.n_values, alphas, cfg.t, cfg.x_norm, cfg.dx_norm)
    table = [
        [row.n_segments, row.alpha, row.uncontrolled_max, row.controlled_limit, row.gap]
        for row in rows
    ]
    _write_text(
        _csv(["N", "alpha", "uncontrolled_max", "controlled_limit", "gap"], table), out_path
    )
    return 0


def cmd_curves(cfg: RunConfig, out_path: str | None) -> int:
    point = FieldPoint(cfg.B, cfg.theta, cfg.phi)
    rows = precision_curves(point, cfg.t, cfg.n_max, cfg.controlled, cfg.probe)
    table = [
        [row.n_segments, row.total_time, row.delta_b, row.delta_theta, row.delta_phi]
        for row in rows
    ]
    _write_text(_csv(["N", "T", "dB", "dtheta", "dphi"], table), out_path)
    return 0


def cmd_verify(seed: int, samples: int, tolerance_scale: float, out_path: str | None) -> int:
    results = run_all(seed, samples, tolerance_scale)
    text = summarize(results, seed)
    _write_text(text, out_path)
    if out_path is not None:
        sys.stdout.write(text)
    return 0 if all(r.passed for r in results) else 1


def _add_override_flags(parser: argparse.ArgumentParser, names: list[str]):
    flag_kinds = {
        "scenario": dict(type=str),
        "B": dict(type=float),
        "theta": dict(type=float),
        "phi": dict(type=float),
        "t": dict(type=float),
        "N": dict(type=int),
        "mode": dict(type=str),
        "probe": dict(type=str),
        "r": dict(type=float, nargs=3),
        "control": dict(type=str),
        "x-tilde": dict(type=float, nargs="+"),
        "control-vector": dict(type=float, nargs=3),
        "n-values": dict(type=int, nargs="+"),
        "alpha-count": dict(type=int),
        "x-norm": dict(type=float),
        "dx-norm": dict(type=float),
        "n-max": dict(type=int),
        "controlled": dict(type=str, choices=["true", "false"]),
    }
    for name in names:
        parser.add_argument(f"--{name}", default=None, **flag_kinds[name])


def _collect_overrides(args: argparse.Namespace) -> dict:
    mapping = {
        "scenario": "scenario",
        "B": "B",
        "theta": "theta",
        "phi": "phi",
        "t": "t",
        "N": "N",
        "mode": "mode",
        "probe": "probe",
        "r": "r",
        "control": "control",
        "x_tilde": "x_tilde",
        "control_vector": "control_vector",
        "n_values": "n_values",
        "alpha_count": "alpha_count",
        "x_norm": "x_norm",
        "dx_norm": "dx_norm",
        "n_max": "n_max",
        "controlled": "controlled",
    }
    overrides = {}
    for attr, key in mapping.items():
        value = getattr(args, attr, None)
        if value is None:
            continue
        if key == "controlled":
            value = value == "true"
        if isinstance(value, list):
            value = tuple(value)
        overrides[key] = value
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="su2qfi",
        description="Quantum Fisher information for su(2) parametrization processes",
    )
    parser.add_argument("--config", default=None, help="flat JSON config file")
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--seed", type=int, default=20220, help="seed for randomized suites")
    parser.add_argument("--samples", type=int, default=200, help="samples per randomized suite")
    sub = parser.add_subparsers(dest="command", required=True)

    p_report = sub.add_parser("report", help="QFIM report as JSON")
    _add_override_flags(
        p_report,
        ["scenario", "B", "theta", "phi", "t", "N", "mode", "probe", "r", "control",
         "x-tilde", "control-vector"],
    )

    p_sweep = sub.add_parser("sweep-alpha", help="control-benefit landscape as CSV")
    _add_override_flags(p_sweep, ["n-values", "alpha-count", "t", "x-norm", "dx-norm"])

    p_curves = sub.add_parser("curves", help="precision-versus-time curves as CSV")
    _add_override_flags(p_curves, ["B", "theta", "phi", "t", "n-max", "controlled", "probe"])

    p_verify = sub.add_parser("verify", help="run oracle cross-check suites")
    p_verify.add_argument(
        "--tolerance-scale",
        type=float,
        default=1.0,
        help="multiply every suite tolerance (0 makes any deviation fail)",
    )
    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if args.config is not None:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    data.update(_collect_overrides(args))
    return RunConfig.from_dict(data)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            if args.samples < 1:
                raise ConfigError("invalid-sample-count", "--samples must be at least 1")
            return cmd_verify(args.seed, args.samples, args.tolerance_scale, args.out)
        cfg = _load_config(args)
        if args.command == "report":
            return cmd_report(cfg, args.out)
        if args.command == "sweep-alpha":
            return cmd_sweep_alpha(cfg, args.out)
        if args.command == "curves":
            return cmd_curves(cfg, args.out)
        raise ConfigError("unknown-command", f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except Su2QfiError as exc:
        print(f"error[{type(exc).__name__}]: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error[io]: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
