"""Command-line front end.

Every subcommand evaluates one engine over a sweep of points and writes a
CSV (or JSON) table.  With ``--out`` a metadata sidecar ``<out>.meta.json``
records the resolved configuration, constants and library versions; it can
be fed back through ``--config`` to repeat the run.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (a failed
point or a failed acceptance check).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__, constants
from .cavity1d import Cavity1D, force_1d, free_energy_1d
from .constants import E_CHARGE, GOLD_GAMMA_RATIO, GOLD_OMEGA_P, HBAR
from .errors import CasimirError, ConfigError
from .lifshitz import PlanePlaneProblem, evaluate, ideal_energy, ideal_pressure, thermal_ratio
from .media import EpsilonTable, MirrorModel, omega_p_from_wavelength, plasma_wavelength
from .pfa import PlaneSphereGeometry, pfa_force, pfa_gradient
from .results import SummationPolicy

COMMANDS = ("plane-plane", "eta", "thermal-ratio", "plane-sphere-pfa", "plane-sphere-mie", "cavity-1d", "check")
SWEEP_VARIABLES = ("L", "T", "R", "x")

COLUMNS = {
    "plane-plane": ["L_m", "T_K", "model1", "model2", "free_energy_J", "pressure_Pa", "eta_F", "err_rel", "status"],
    "eta": ["L_m", "L_over_lambda_P", "model", "eta_F", "eta_E", "err_rel", "status"],
    "thermal-ratio": ["L_m", "T_K", "L_over_lambda_T", "ratio", "status"],
    "plane-sphere-pfa": ["R_m", "L_m", "x", "T_K", "model", "force_N", "gradient_N_per_m", "pfa_advisory",
                         "err_rel", "status"],
    "plane-sphere-mie": ["x", "L", "R", "T", "ell_max", "F", "G", "rho_G", "valid_flag", "status"],
    "cavity-1d": ["L_m", "T_K", "r1", "r2", "free_energy_J", "force_N", "err_rel", "status"],
}

_LENGTH = {"m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "micron": 1e-6, "nm": 1e-9}
_NUMBER = r"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)"


def _split_unit(value, key):
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value), ""
    if not isinstance(value, str):
        raise ConfigError(key, f"expected a number or a string with unit, got {value!r}")
    m = re.fullmatch(_NUMBER + r"\s*([A-Za-zµ/]*)", value.strip())
    if not m:
        raise ConfigError(key, f"cannot parse {value!r}")
    return float(m.group(1)), m.group(2)


def parse_length(value, key="L"):
    """Metres from ``1e-6``, ``"1um"``, ``"136 nm"``."""
    number, unit = _split_unit(value, key)
    if unit not in _LENGTH and unit != "":
        raise ConfigError(key, f"unknown length unit {unit!r}; use m, mm, um or nm")
    return number * _LENGTH.get(unit, 1.0)


def parse_temperature(value, key="T"):
    number, unit = _split_unit(value, key)
    if unit not in ("", "K"):
        raise ConfigError(key, f"temperature must be in K, got unit {unit!r}")
    return number


def parse_frequency(value, key="omega_p"):
    """rad/s from a number, ``"1.3e16 rad/s"`` or ``"9 eV"`` (via hbar)."""
    number, unit = _split_unit(value, key)
    if unit in ("", "rad/s"):
        return number
    if unit == "eV":
        return number * E_CHARGE / HBAR
    raise ConfigError(key, f"unknown frequency unit {unit!r}; use rad/s or eV")


def _positive(value, key, allow_zero=False):
    ok = value >= 0 if allow_zero else value > 0
    if not (ok and math.isfinite(value)):
        raise ConfigError(key, f"must be {'>= 0' if allow_zero else '> 0'}, got {value}")
    return value


@dataclass
class MirrorSpec:
    kind: str = "perfect"
    omega_p: float = GOLD_OMEGA_P
    gamma: float = GOLD_OMEGA_P * GOLD_GAMMA_RATIO
    table: str = ""

    def build(self):
        if self.kind == "perfect":
            return MirrorModel.perfect()
        if self.kind == "plasma":
            return MirrorModel.plasma(self.omega_p)
        if self.kind == "drude":
            return MirrorModel.drude(self.omega_p, self.gamma)
        return MirrorModel.tabulated(EpsilonTable.from_csv(self.table),
                                     self.omega_p if self.omega_p else None, self.gamma)

    def label(self):
        return self.kind


def parse_mirror(block, key="mirror"):
    """Mirror from ``"plasma"`` or ``{"kind": ..., "omega_p"|"lambda_p": ..., "gamma": ...}``."""
    if isinstance(block, str):
        block = {"kind": block}
    if not isinstance(block, dict):
        raise ConfigError(key, "expected a model name or an object")
    kind = str(block.get("kind", "perfect")).lower()
    if kind not in ("perfect", "plasma", "drude", "tabulated"):
        raise ConfigError(f"{key}.kind", f"must be one of perfect, plasma, drude, tabulated; got {kind!r}")
    spec = MirrorSpec(kind)
    if "lambda_p" in block:
        spec.omega_p = omega_p_from_wavelength(_positive(parse_length(block["lambda_p"], f"{key}.lambda_p"),
                                                         f"{key}.lambda_p"))
    if "omega_p" in block:
        spec.omega_p = _positive(parse_frequency(block["omega_p"], f"{key}.omega_p"), f"{key}.omega_p")
    spec.gamma = spec.omega_p * GOLD_GAMMA_RATIO
    if "gamma" in block:
        spec.gamma = _positive(parse_frequency(block["gamma"], f"{key}.gamma"), f"{key}.gamma", allow_zero=True)
    if kind == "tabulated":
        path = block.get("table")
        if not path or not Path(path).is_file():
            raise ConfigError(f"{key}.table", f"tabulated mirror needs an existing table file, got {path!r}")
        try:
            EpsilonTable.from_csv(path)
        except (CasimirError, ValueError) as exc:
            raise ConfigError(f"{key}.table", f"table does not parse: {exc}") from exc
        spec.table = str(path)
        spec.omega_p = float(block["omega_p"]) if "omega_p" in block else 0.0
    return spec


@dataclass
class SweepSpec:
    variable: str = "L"
    start: float = 1e-6
    stop: float = 1e-6
    points: int = 1
    scale: str = "log"

    def values(self):
        if self.points == 1:
            return [self.start]
        if self.scale == "log":
            return list(np.geomspace(self.start, self.stop, self.points))
        return list(np.linspace(self.start, self.stop, self.points))


@dataclass
class RunConfig:
    """Validated run description; every default is explicit so it can be echoed."""

    command: str
    L: float = 1e-6
    R: float = 1e-6
    T: float = 0.0
    area: float = 1.0
    mirror1: MirrorSpec = field(default_factory=MirrorSpec)
    mirror2: MirrorSpec = field(default_factory=MirrorSpec)
    r1: float = 1.0
    r2: float = 1.0
    sweep: SweepSpec = field(default_factory=SweepSpec)
    rel_tol: float = 1e-8
    quad_rel_tol: float = 1e-9
    ell_max: int = 0
    ell_cap: int = 100
    target_rel: float = 1e-4
    threads: int = 1
    out: str = ""
    format: str = "csv"
    quick: bool = False

    def policy(self):
        return SummationPolicy(rel_tol=self.rel_tol, quad_rel_tol=self.quad_rel_tol)

    def to_dict(self):
        return asdict(self)


def _sweep(block, cfg):
    if not isinstance(block, dict):
        raise ConfigError("sweep", "expected an object with variable, start, stop, points, scale")
    var = block.get("variable", "L")
    if var not in SWEEP_VARIABLES:
        raise ConfigError("sweep.variable", f"must be one of {', '.join(SWEEP_VARIABLES)}; got {var!r}")
    parse = {"L": parse_length, "R": parse_length, "T": parse_temperature,
             "x": lambda v, k: _split_unit(v, k)[0]}[var]
    start = parse(block.get("start", getattr(cfg, var, 1.0)), "sweep.start")
    stop = parse(block.get("stop", start), "sweep.stop")
    points = block.get("points", 1)
    scale = block.get("scale", "log")
    if not isinstance(points, int) or points < 1:
        raise ConfigError("sweep.points", f"must be an integer >= 1, got {points!r}")
    if scale not in ("log", "linear"):
        raise ConfigError("sweep.scale", f"must be 'log' or 'linear', got {scale!r}")
    allow_zero = var == "T" and scale == "linear"
    _positive(start, "sweep.start", allow_zero)
    _positive(stop, "sweep.stop", allow_zero)
    if stop < start:
        raise ConfigError("sweep.stop", f"must be >= sweep.start ({start}), got {stop}")
    return SweepSpec(var, start, stop, points, scale)


def parse_config(source, overrides=None):
    """Build a :class:`RunConfig` from JSON text (or a dict) plus flag overrides.

    A metadata sidecar is accepted too: its ``config`` entry is used.

    Raises
    ------
    ConfigError
        Naming the offending key and the accepted range.
    """
    if isinstance(source, str):
        try:
            data = json.loads(source) if source.strip() else {}
        except json.JSONDecodeError as exc:
            raise ConfigError("config", f"invalid JSON: {exc}") from exc
    else:
        data = dict(source or {})
    if "config" in data and isinstance(data["config"], dict):
        data = dict(data["config"])
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    command = data.get("command")
    if command not in COMMANDS:
        raise ConfigError("command", f"must be one of {', '.join(COMMANDS)}; got {command!r}")
    cfg = RunConfig(command)
    if "L" in data:
        cfg.L = _positive(parse_length(data["L"], "L"), "L")
    if "R" in data:
        cfg.R = _positive(parse_length(data["R"], "R"), "R")
    if "T" in data:
        cfg.T = _positive(parse_temperature(data["T"], "T"), "T", allow_zero=True)
    if "area" in data:
        number, unit = _split_unit(data["area"], "area")
        cfg.area = _positive(number * {"": 1.0, "m2": 1.0, "um2": 1e-12, "mm2": 1e-6}.get(unit, float("nan")),
                             "area")
    mirrors = data.get("mirrors")
    if mirrors is not None:
        cfg.mirror1 = parse_mirror(mirrors, "mirrors")
        cfg.mirror2 = parse_mirror(mirrors, "mirrors")
    if "mirror1" in data:
        cfg.mirror1 = parse_mirror(data["mirror1"], "mirror1")
    if "mirror2" in data:
        cfg.mirror2 = parse_mirror(data["mirror2"], "mirror2")
    elif "mirror1" in data and mirrors is None:
        cfg.mirror2 = cfg.mirror1
    if isinstance(cfg.mirror1, dict):
        cfg.mirror1 = MirrorSpec(**cfg.mirror1)
    for key in ("r1", "r2"):
        if key in data:
            value = float(data[key])
            if not -1.0 <= value <= 1.0:
                raise ConfigError(key, f"must lie in [-1, 1], got {value}")
            setattr(cfg, key, value)
    policy = data.get("policy", {})
    if not isinstance(policy, dict):
        raise ConfigError("policy", "expected an object")
    for key, target in (("rel_tol", "rel_tol"), ("quad_rel_tol", "quad_rel_tol"), ("target_rel", "target_rel")):
        if key in policy:
            value = float(policy[key])
            if not 0 < value < 1:
                raise ConfigError(f"policy.{key}", f"must lie in (0, 1), got {value}")
            setattr(cfg, target, value)
    for key in ("ell_max", "ell_cap"):
        if key in policy:
            value = policy[key]
            if not isinstance(value, int) or value < (0 if key == "ell_max" else 1):
                raise ConfigError(f"policy.{key}", f"must be a positive integer, got {value!r}")
            setattr(cfg, key, value)
    if "tol" in data:
        tol = float(data["tol"])
        if not 0 < tol < 1:
            raise ConfigError("tol", f"must lie in (0, 1), got {tol}")
        cfg.rel_tol = tol
        cfg.quad_rel_tol = tol / 10.0
    if "threads" in data:
        threads = data["threads"]
        if not isinstance(threads, int) or threads < 1:
            raise ConfigError("threads", f"must be an integer >= 1, got {threads!r}")
        cfg.threads = threads
    output = data.get("output", {})
    cfg.out = str(data.get("out", output.get("path", "")) or "")
    cfg.format = data.get("format", output.get("format", "csv"))
    if cfg.format not in ("csv", "json"):
        raise ConfigError("format", f"must be csv or json, got {cfg.format!r}")
    cfg.quick = bool(data.get("quick", False))
    if "sweep" in data and data["sweep"] is not None:
        cfg.sweep = _sweep(data["sweep"], cfg)
    else:
        default_var = "x" if command == "plane-sphere-mie" and "x" in data else "L"
        base = (float(data["x"]) if default_var == "x" else cfg.L)
        cfg.sweep = SweepSpec(default_var, base, base, 1, "log")
    if command == "eta" and cfg.T != 0:
        raise ConfigError("T", "the eta command compares to the T = 0 ideal result; T must be 0")
    if command == "thermal-ratio" and cfg.T <= 0 and cfg.sweep.variable != "T":
        raise ConfigError("T", "thermal-ratio needs T > 0")
    return cfg


def _point_config(cfg, value):
    var = cfg.sweep.variable
    point = dict(L=cfg.L, R=cfg.R, T=cfg.T)
    if var == "x":
        point["L"] = value * cfg.R
    else:
        point[var] = value
    return point


def _fmt(value):
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def _evaluate_point(cfg, point):
    cmd = cfg.command
    pol = cfg.policy()
    L, R, T = point["L"], point["R"], point["T"]
    if cmd == "plane-plane":
        m1, m2 = cfg.mirror1.build(), cfg.mirror2.build()
        res = evaluate(PlanePlaneProblem(m1, m2, L, cfg.area, T), pol)
        e, p = res.free_energy, res.pressure
        return {"L_m": L, "T_K": T, "model1": cfg.mirror1.label(), "model2": cfg.mirror2.label(),
                "free_energy_J": e.value, "pressure_Pa": p.value, "eta_F": p.value / ideal_pressure(L),
                "err_rel": max(e.rel_err, p.rel_err), "_flags": e.diagnostics}
    if cmd == "eta":
        m = cfg.mirror1.build()
        res = evaluate(PlanePlaneProblem(m, m, L, 1.0, 0.0), pol)
        lam = plasma_wavelength(cfg.mirror1.omega_p) if cfg.mirror1.kind != "perfect" else float("nan")
        return {"L_m": L, "L_over_lambda_P": L / lam, "model": cfg.mirror1.label(),
                "eta_F": res.pressure.value / ideal_pressure(L),
                "eta_E": res.free_energy.value / ideal_energy(L),
                "err_rel": max(res.free_energy.rel_err, res.pressure.rel_err)}
    if cmd == "thermal-ratio":
        from .media import thermal_wavelength
        ratio = thermal_ratio(L, T, cfg.mirror1.omega_p, cfg.mirror1.gamma, pol)
        return {"L_m": L, "T_K": T, "L_over_lambda_T": L / thermal_wavelength(T), "ratio": ratio}
    if cmd == "plane-sphere-pfa":
        geom = PlaneSphereGeometry(R, L)
        mirrors = (cfg.mirror1.build(), cfg.mirror2.build())
        f = pfa_force(geom, mirrors, T, pol)
        g = pfa_gradient(geom, mirrors, T, pol)
        return {"R_m": R, "L_m": L, "x": geom.x, "T_K": T, "model": cfg.mirror1.label(), "force_N": f.value,
                "gradient_N_per_m": g.value, "pfa_advisory": geom.pfa_advisory,
                "err_rel": max(f.rel_err, g.rel_err)}
    if cmd == "plane-sphere-mie":
        from .planesphere import DEFAULT_PS_POLICY, TruncationSpec, evaluate_planesphere
        from .pfa import pfa_gradient as pfa_g
        geom = PlaneSphereGeometry(R, L)
        mirrors = (cfg.mirror1.build(), cfg.mirror2.build())
        trunc = TruncationSpec(ell_max=cfg.ell_max or None, auto=not cfg.ell_max, target_rel=cfg.target_rel,
                               cap=cfg.ell_cap)
        res = evaluate_planesphere(geom, mirrors, T, trunc, DEFAULT_PS_POLICY)
        gp = pfa_g(geom, mirrors, T, pol).value
        return {"x": geom.x, "L": L, "R": R, "T": T, "ell_max": res.ell_max, "F": res.energy.value,
                "G": res.gradient.value, "rho_G": res.gradient.value / gp, "valid_flag": res.valid,
                "_flags": {"converged": res.converged, "err_F": res.energy.err_estimate,
                           "err_G": res.gradient.err_estimate}}
    if cmd == "cavity-1d":
        cav = Cavity1D(cfg.r1, cfg.r2, L, T)
        e, f = free_energy_1d(cav, pol), force_1d(cav, pol)
        return {"L_m": L, "T_K": T, "r1": cfg.r1, "r2": cfg.r2, "free_energy_J": e.value, "force_N": f.value,
                "err_rel": max(e.rel_err, f.rel_err if f.value else 0.0)}
    raise ConfigError("command", f"unsupported command {cmd!r}")


def _safe_point(cfg, value):
    point = _point_config(cfg, value)
    try:
        row = _evaluate_point(cfg, point)
        row["status"] = "ok"
    except (CasimirError, ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        row = {"L_m": point["L"], "T_K": point["T"], "L": point["L"], "R": point["R"], "T": point["T"],
               "status": f"error: {type(exc).__name__}: {exc}".replace(",", ";")}
    return row


def run_sweep(config):
    """Evaluate every sweep point (concurrently if ``threads > 1``) in sweep order.

    Returns
    -------
    rows : list of dict
        One row per point with the command's columns; failed points carry an
        ``error: ...`` status instead of values.
    """
    values = config.sweep.values()
    if config.threads > 1 and len(values) > 1:
        with ThreadPoolExecutor(config.threads) as pool:
            return list(pool.map(lambda v: _safe_point(config, v), values))
    return [_safe_point(config, v) for v in values]


def format_csv(rows, columns):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) if c in row else "" for c in columns])
    return buf.getvalue()


def metadata(config, rows):
    return {
        "config": _config_for_rerun(config),
        "resolved": config.to_dict(),
        "constants": constants.as_dict(),
        "versions": {"casimir": __version__, "python": platform.python_version(), "numpy": np.__version__,
                     "scipy": scipy.__version__},
        "points": [{"status": r.get("status"), "err_rel": r.get("err_rel"),
                    **{k: v for k, v in r.get("_flags", {}).items() if not k.startswith("_")}} for r in rows],
    }


def _mirror_block(spec):
    block = {"kind": spec.kind, "omega_p": spec.omega_p, "gamma": spec.gamma}
    if spec.table:
        block["table"] = spec.table
    return block


def _config_for_rerun(cfg):
    return {"command": cfg.command, "L": cfg.L, "R": cfg.R, "T": cfg.T, "area": cfg.area,
            "mirror1": _mirror_block(cfg.mirror1), "mirror2": _mirror_block(cfg.mirror2), "r1": cfg.r1,
            "r2": cfg.r2, "sweep": asdict(cfg.sweep), "threads": cfg.threads, "format": cfg.format,
            "policy": {"rel_tol": cfg.rel_tol, "quad_rel_tol": cfg.quad_rel_tol, "ell_max": cfg.ell_max,
                       "ell_cap": cfg.ell_cap, "target_rel": cfg.target_rel}}


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return str(obj)


def write_output(config, rows, columns, stream):
    if config.format == "json":
        clean = [{c: row.get(c) for c in columns} for row in rows]
        text = json.dumps(clean, indent=1, default=_json_default) + "\n"
    else:
        text = format_csv(rows, columns)
    if config.out:
        Path(config.out).write_text(text)
        meta = Path(str(config.out) + ".meta.json")
        meta.write_text(json.dumps(metadata(config, rows), indent=1, sort_keys=True, default=_json_default) + "\n")
    else:
        stream.write(text)


def _sweep_flag(text):
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ConfigError("sweep", "expected VAR:START:STOP:POINTS[:log|linear]")
    try:
        points = int(parts[3])
    except ValueError as exc:
        raise ConfigError("sweep.points", f"must be an integer, got {parts[3]!r}") from exc
    return {"variable": parts[0], "start": parts[1], "stop": parts[2], "points": points,
            "scale": parts[4] if len(parts) == 5 else "log"}


def build_parser():
    parser = argparse.ArgumentParser(prog="casimir", description="Casimir energies and forces between mirrors.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (flags override it)")
    common.add_argument("--out", help="output file; also writes <out>.meta.json")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--threads", type=int)
    common.add_argument("--tol", type=float, help="relative tolerance of the Matsubara sum")
    common.add_argument("--L", help="separation, e.g. 1um")
    common.add_argument("--R", help="sphere radius, e.g. 150um")
    common.add_argument("--T", help="temperature in K")
    common.add_argument("--x", type=float, help="aspect ratio L/R (plane-sphere-mie)")
    common.add_argument("--area", help="plate area in m^2")
    common.add_argument("--model", help="mirror model for both mirrors: perfect, plasma, drude")
    common.add_argument("--model1")
    common.add_argument("--model2")
    common.add_argument("--omega-p", help="plasma frequency, rad/s or eV")
    common.add_argument("--lambda-p", help="plasma wavelength, e.g. 136nm")
    common.add_argument("--gamma", help="relaxation rate, rad/s or eV")
    common.add_argument("--r1", type=float, help="1-D mirror amplitude")
    common.add_argument("--r2", type=float)
    common.add_argument("--ell-max", type=int, help="fixed multipole cutoff (default: automatic)")
    common.add_argument("--ell-cap", type=int, help="largest automatic multipole cutoff")
    common.add_argument("--sweep", help="VAR:START:STOP:POINTS[:log|linear], e.g. L:10nm:10um:50:log")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "check":
            p.add_argument("--quick", action="store_true", help="skip the plane-sphere criteria")
    return parser


def _overrides(args):
    ov = {"command": args.command, "out": args.out, "format": args.format, "threads": args.threads,
          "tol": args.tol, "L": args.L, "R": args.R, "T": args.T, "x": args.x, "area": args.area,
          "r1": args.r1, "r2": args.r2}
    mirror = {}
    for flag, key in (("omega_p", "omega_p"), ("lambda_p", "lambda_p"), ("gamma", "gamma")):
        if getattr(args, flag) is not None:
            mirror[key] = getattr(args, flag)
    for name, val in (("mirrors", args.model), ("mirror1", args.model1), ("mirror2", args.model2)):
        if val is not None or (name == "mirrors" and mirror and not args.model1):
            ov[name] = dict(mirror, kind=val or "plasma")
    policy = {}
    if args.ell_max is not None:
        policy["ell_max"] = args.ell_max
    if args.ell_cap is not None:
        policy["ell_cap"] = args.ell_cap
    if policy:
        ov["policy"] = policy
    if args.sweep:
        ov["sweep"] = _sweep_flag(args.sweep)
    if getattr(args, "quick", False):
        ov["quick"] = True
    return ov


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        source = Path(args.config).read_text() if args.config else "{}"
        overrides = _overrides(args)
        if args.config:
            base = json.loads(source)
            base = base.get("config", base)
            # flags override the file; mirror flags replace whole mirror blocks
            if "policy" in overrides and isinstance(base.get("policy"), dict):
                overrides["policy"] = dict(base["policy"], **overrides["policy"])
            source = json.dumps(base)
        config = parse_config(source, overrides)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: config: {exc}", file=sys.stderr)
        return 2
    if config.command == "check":
        from .acceptance import run_check
        return run_check(config, stdout)
    rows = run_sweep(config)
    write_output(config, rows, COLUMNS[config.command], stdout)
    return 0 if all(r["status"] == "ok" for r in rows) else 3


if __name__ == "__main__":
    sys.exit(main())
