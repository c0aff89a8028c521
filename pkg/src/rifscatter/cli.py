"""
Command-line front end.

Every subcommand writes one data file into the output directory (flag
``--output-dir``, else ``$RIFSCATTER_OUTPUT_DIR``, else the working
directory) and prints its path.  CSV files start with ``# `` lines holding
JSON metadata (config hash, units, mode legend); JSON files carry the same
metadata under the ``"metadata"`` key.  Numeric fields are written with a
fixed format and no run-dependent content, so identical configs give
byte-identical data.

Options may also come from a plain-text config file (``--config``) with one
``key = value`` per line; ``#`` starts a comment and keys use the long option
names with either dashes or underscores.  Command-line flags win.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.constants import c, e, hbar

from . import __version__
from .errors import ComputeError, ConfigError, RifError
from .medium import FUSED_SILICA, StepConfig, parse_velocity, velocity_from_center_wavelength
from .modes import SLOT_LABELS, horizon_intervals, optical_branch_extrema, solve_modes
from .observables import (
    OUT_MODES,
    lab_correlation_map,
    lab_spectrum,
    moving_frame_spectrum,
    refined_grid,
    table1_row,
)
from .scattering import scatter

ENV_OUTPUT = "RIFSCATTER_OUTPUT_DIR"
DELTA_N_LADDER = (1e-6, 2e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1)
# Velocities of the four rows of the horizon table.  A length unit marks a
# centre wavelength whose lab group velocity sets u.
TABLE1_VELOCITIES = ("396.34nm", "800nm", "2.05/3c", "1990nm")

LEGEND = {
    "u, uo, mo, lo, l": "positive-norm slots by descending lab frequency",
    "nl, no, nu": "negative-norm slots",
    "c": "member of an evanescent pair",
    "L / R": "side of the front (L: behind, higher index)",
}
UNITS = {
    "omega": "rad/s (comoving)",
    "k": "rad/m (comoving)",
    "Omega": "rad/s (lab)",
    "K": "rad/m (lab)",
    "v_g": "m/s",
    "wavelength": "m",
    "phi": "photons per unit comoving time and angular frequency (hbar = 1)",
    "Phi_lambda": "lab photons per unit time and wavelength, same convention (1/m)",
}

DEFAULTS = {
    "delta_n": None,
    "u": "2/3c",
    "center_wavelength": None,
    "reference_wavelength": 800e-9,
    "mu_method": "linear",
    "omega_min": 1e12,
    "omega_max": 1e15,
    "n_omega": 400,
    "n_interval": 200,
    "omega": None,
    "lambda_min": 200e-9,
    "lambda_max": 4000e-9,
    "n_lambda": 2000,
    "velocities": ",".join(TABLE1_VELOCITIES),
    "n_points": 201,
    "n_configs": 100,
    "seed": 0,
    "workers": 1,
    "output_dir": None,
}


# -- parsing helpers ----------------------------------------------------------


_LENGTH_UNITS = {"nm": 1e-9, "um": 1e-6, "mm": 1e-3, "m": 1.0}


def parse_length(text) -> float:
    s = str(text).strip().replace(" ", "")
    for unit in ("nm", "um", "mm", "m"):
        if s.endswith(unit):
            try:
                return float(s[: -len(unit)]) * _LENGTH_UNITS[unit]
            except ValueError:
                break
    try:
        return float(s)
    except ValueError as exc:
        raise ConfigError(f"cannot parse length {text!r}") from exc


def parse_velocity_spec(text, medium=FUSED_SILICA) -> tuple:
    """Return (u, centre wavelength or None) from '2/3c', '0.66c', m/s or '800nm'."""
    s = str(text).strip().replace(" ", "")
    if s.endswith(("nm", "um", "mm")):
        lam = parse_length(s)
        return velocity_from_center_wavelength(medium, lam), lam
    u = parse_velocity(s)
    if not 0 < u < c:
        raise ConfigError(f"velocity must lie in (0, c), got {text!r}")
    return u, None


def parse_float_list(text, name) -> list:
    if isinstance(text, (list, tuple)):
        vals = list(text)
    else:
        parts = [p for p in str(text).replace(";", ",").split(",") if p.strip()]
        try:
            vals = [float(p) for p in parts]
        except ValueError as exc:
            raise ConfigError(f"cannot parse {name} list {text!r}") from exc
    if not vals:
        raise ConfigError(f"empty {name} sweep")
    return vals


def read_config_file(path) -> dict:
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{n}: unknown key {key!r}")
        out[key] = value
    return out


# -- run configuration --------------------------------------------------------


@dataclass
class RunConfig:
    """Resolved settings for one invocation."""

    command: str
    options: dict
    steps: list = field(default_factory=list)
    output_dir: Path = Path(".")
    workers: int = 1

    def config_hash(self) -> str:
        blob = json.dumps({"command": self.command, **self.options}, sort_keys=True, default=str)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def metadata(self, **extra) -> dict:
        md = {
            "program": "rifscatter",
            "version": __version__,
            "command": self.command,
            "config_hash": self.config_hash(),
            "config": self.options,
            "units": UNITS,
            "legend": LEGEND,
        }
        md.update(extra)
        return md


def _num(opts, key, cast=float):
    try:
        return cast(opts[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid value for {key}: {opts[key]!r}") from exc


def resolve(args: argparse.Namespace) -> RunConfig:
    opts = dict(DEFAULTS)
    if getattr(args, "config", None):
        opts.update(read_config_file(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    if opts["center_wavelength"] is not None:
        u = velocity_from_center_wavelength(FUSED_SILICA, parse_length(opts["center_wavelength"]))
    else:
        u, _ = parse_velocity_spec(opts["u"])
    ladder = opts["delta_n"]
    if ladder is None:
        ladder = list(DELTA_N_LADDER) if args.command in ("spectrum", "labspectrum") else [2e-6]
    dns = parse_float_list(ladder, "delta-n")
    if any(d < 0 for d in dns):
        raise ConfigError("delta-n values must be non-negative")
    ref = parse_length(opts["reference_wavelength"])
    steps = [StepConfig(FUSED_SILICA, d, u, ref, str(opts["mu_method"])) for d in dns]
    out = opts["output_dir"] or os.environ.get(ENV_OUTPUT) or "."
    workers = _num(opts, "workers", int)
    if workers < 1:
        raise ConfigError("workers must be at least 1")
    # Only options that change the numbers enter the hash.
    hashed = {k: v for k, v in opts.items() if k not in ("output_dir", "workers")}
    hashed["u_resolved"] = f"{u:.12e}"
    hashed["delta_n"] = [f"{d:.6e}" for d in dns]
    return RunConfig(args.command, hashed, steps, Path(out), workers)


# -- output -------------------------------------------------------------------


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    x = float(x)
    if not np.isfinite(x):
        return "nan"
    return f"{x:.12e}"


def write_csv(path: Path, metadata: dict, header: list, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        for key in sorted(metadata):
            fh.write(f"# {json.dumps({key: metadata[key]}, sort_keys=True)}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(fmt(obj)) if np.isfinite(obj) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(path: Path, metadata: dict, data) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump(_jsonable({"metadata": metadata, "data": data}), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _tag(step: StepConfig) -> str:
    return f"dn{step.delta_n:.0e}_u{step.u / c:.5f}c".replace("+", "")


# -- subcommands --------------------------------------------------------------


def cmd_dispersion(cfg: RunConfig):
    o = cfg.options
    grid = np.geomspace(_num(o, "omega_min"), _num(o, "omega_max"), _num(o, "n_omega", int))
    paths = []
    for step in cfg.steps:
        rows = []
        for w in grid:
            for side in "LR":
                try:
                    modes = solve_modes(step.medium(side), step.u, float(w), side)
                except ComputeError:
                    continue
                for m in modes:
                    rows.append([w, side, m.k.real, m.k.imag, m.Omega.real, m.K.real,
                                 m.group_velocity_mf, m.name, str(m.norm_sign)])
        header = ["omega", "side", "k_re", "k_im", "Omega_re", "K_re", "v_g_mf", "label", "norm_sign"]
        paths.append(write_csv(cfg.output_dir / f"dispersion_{_tag(step)}.csv", cfg.metadata(), header, rows))
    return paths


def scenario_data(step: StepConfig) -> dict:
    to_ueV = hbar / (1e-6 * e)
    data = {"delta_n": step.delta_n, "u_over_c": step.u / c, "mu": step.mu, "n_R": step.n_R}
    for side in "LR":
        try:
            data[f"extrema_{side}"] = optical_branch_extrema(step.medium(side), step.u)
        except RifError as exc:
            data[f"extrema_{side}"] = {"error": type(exc).__name__}
    try:
        hi = horizon_intervals(step)
        data.update(
            whi=list(hi.whi), bhi=list(hi.bhi), sbli_L=list(hi.sbli_L), sbli_R=list(hi.sbli_R),
            whi_width_ueV=hi.whi_width * to_ueV, bhi_width_ueV=hi.bhi_width * to_ueV,
        )
    except RifError as exc:
        data["horizon_error"] = type(exc).__name__
    return data


def cmd_scenario(cfg: RunConfig):
    data = [scenario_data(s) for s in cfg.steps]
    return [write_json(cfg.output_dir / "scenario.json", cfg.metadata(), data)]


def cmd_smatrix(cfg: RunConfig):
    o = cfg.options
    if o["omega"] is None:
        raise ConfigError("smatrix needs --omega")
    w = _num(o, "omega")
    data = []
    for step in cfg.steps:
        res = scatter(step, w)
        data.append({
            "delta_n": step.delta_n,
            "omega": w,
            "scenario": res.scenario.case,
            "out_order": res.out_order,
            "in_order": res.in_order,
            "g": np.diag(res.g).tolist(),
            "S_re": res.S.real.tolist(),
            "S_im": res.S.imag.tolist(),
            "quasi_unitarity_residual": res.quasi_unitarity_residual,
            "lr_consistency": res.lr_consistency,
            "match_cond": res.match.cond_number,
        })
    return [write_json(cfg.output_dir / "smatrix.json", cfg.metadata(), data)]


def cmd_spectrum(cfg: RunConfig):
    o = cfg.options
    paths = []
    for step in cfg.steps:
        grid = refined_grid(step, _num(o, "omega_min"), _num(o, "omega_max"),
                            _num(o, "n_omega", int), _num(o, "n_interval", int))
        pts = moving_frame_spectrum(step, grid, cfg.workers)
        header = ["omega", "scenario"] + [f"phi_{n}" for n in OUT_MODES]
        rows = [[p.omega, p.scenario.case if p.scenario else p.error] + [p.flux_per_mode[n] for n in OUT_MODES]
                for p in pts]
        md = cfg.metadata(delta_n=step.delta_n, horizons=scenario_data(step))
        paths.append(write_csv(cfg.output_dir / f"spectrum_{_tag(step)}.csv", md, header, rows))
    return paths


def _lambda_grid(o):
    return np.geomspace(parse_length(o["lambda_min"]), parse_length(o["lambda_max"]), _num(o, "n_lambda", int))


def cmd_labspectrum(cfg: RunConfig):
    paths = []
    for step in cfg.steps:
        pts = lab_spectrum(step, _lambda_grid(cfg.options), cfg.workers)
        rows = []
        for p in pts:
            contrib = ";".join(f"{cb.label}:{fmt(v)}" for cb, v in zip(p.contributions, _per_contribution(p)))
            rows.append([p.wavelength, p.Phi_lambda, contrib])
        md = cfg.metadata(delta_n=step.delta_n)
        paths.append(write_csv(cfg.output_dir / f"labspectrum_{_tag(step)}.csv", md,
                               ["wavelength", "Phi_lambda", "contributions"], rows))
    return paths


def _per_contribution(p):
    return [2 * np.pi * c / p.wavelength**2 * cb.Phi for cb in p.contributions]


def cmd_corrmap(cfg: RunConfig):
    paths = []
    grid = _lambda_grid(cfg.options)
    for step in cfg.steps:
        C = lab_correlation_map(step, grid, grid)
        md = cfg.metadata(delta_n=step.delta_n, wavelengths=[float(fmt(x)) for x in grid])
        tag = _tag(step)
        rows = [[lam] + list(row) for lam, row in zip(grid, C)]
        header = ["wavelength"] + [f"C_{i}" for i in range(len(grid))]
        paths.append(write_csv(cfg.output_dir / f"corrmap_{tag}.csv", md, header, rows))
        paths.append(write_json(cfg.output_dir / f"corrmap_{tag}.json", md, {"shape": list(C.shape)}))
    return paths


def cmd_table1(cfg: RunConfig):
    o = cfg.options
    specs = [s for s in str(o["velocities"]).split(",") if s.strip()]
    if not specs:
        raise ConfigError("empty velocity list")
    n = _num(o, "n_points", int)
    data = []
    for dn_step in cfg.steps:
        for spec in specs:
            u, lam = parse_velocity_spec(spec)
            step = StepConfig(dn_step.right_medium, dn_step.delta_n, u, dn_step.reference_wavelength, dn_step.mu_method)
            row = {"velocity_spec": spec.strip(), "center_wavelength": lam}
            try:
                row.update(table1_row(step, n))
            except RifError as exc:
                row.update(u_over_c=u / c, delta_n=step.delta_n, error=f"{type(exc).__name__}: {exc}")
            data.append(row)
    md = cfg.metadata(flux_convention="Phi_lambda per unit wavelength with phi = n / (2 pi); multiply by 2 pi for phi = n")
    return [write_json(cfg.output_dir / "table1.json", md, data)]


def cmd_verify(cfg: RunConfig):
    from .verification import run_all

    o = cfg.options
    reports = run_all(_num(o, "n_configs", int), _num(o, "seed", int))
    paths = [write_json(cfg.output_dir / "verify.json", cfg.metadata(), [r.as_dict() for r in reports])]
    if not all(r.passed for r in reports):
        raise ComputeError("oracle disagreement", failed=[r.name for r in reports if not r.passed])
    return paths


COMMANDS = {
    "dispersion": (cmd_dispersion, "mode table (omega, k, Omega, K, v_g, label) as CSV"),
    "scenario": (cmd_scenario, "horizon intervals and branch extrema as JSON"),
    "smatrix": (cmd_smatrix, "scattering matrix at one comoving frequency as JSON"),
    "spectrum": (cmd_spectrum, "moving-frame flux per out mode as CSV"),
    "labspectrum": (cmd_labspectrum, "lab spectral density per wavelength as CSV"),
    "corrmap": (cmd_corrmap, "lab wavelength-wavelength Pearson map as CSV + JSON"),
    "table1": (cmd_table1, "horizon emission summary for a list of front speeds as JSON"),
    "verify": (cmd_verify, "run the oracle suite and write the reports as JSON"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("step")
    g.add_argument("--config", help="key = value config file")
    g.add_argument("--delta-n", dest="delta_n", help="index step, or comma-separated list")
    g.add_argument("--u", help="front speed: '2/3c', '0.6667c', m/s, or a centre wavelength such as '800nm'")
    g.add_argument("--center-wavelength", dest="center_wavelength", help="set u from the lab group velocity here")
    g.add_argument("--reference-wavelength", dest="reference_wavelength", help="wavelength where delta-n is measured")
    g.add_argument("--mu-method", dest="mu_method", choices=["linear", "exact"])
    g.add_argument("--output-dir", dest="output_dir")
    g.add_argument("--workers", type=int)
    grid = common.add_argument_group("grids")
    grid.add_argument("--omega-min", dest="omega_min", type=float)
    grid.add_argument("--omega-max", dest="omega_max", type=float)
    grid.add_argument("--n-omega", dest="n_omega", type=int)
    grid.add_argument("--n-interval", dest="n_interval", type=int, help="extra points per horizon interval")
    grid.add_argument("--omega", type=float)
    grid.add_argument("--lambda-min", dest="lambda_min")
    grid.add_argument("--lambda-max", dest="lambda_max")
    grid.add_argument("--n-lambda", dest="n_lambda", type=int)
    grid.add_argument("--velocities", help="table1: comma-separated velocity list")
    grid.add_argument("--n-points", dest="n_points", type=int, help="table1: points per horizon interval")
    grid.add_argument("--n-configs", dest="n_configs", type=int, help="verify: randomized configurations")
    grid.add_argument("--seed", type=int)

    parser = argparse.ArgumentParser(prog="rifscatter", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_text)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        paths = COMMANDS[args.command][0](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RifError as exc:
        print(f"compute error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    for p in paths:
        print(p)
    return 0


if __name__ == "__main__":
    sys.exit(main())
