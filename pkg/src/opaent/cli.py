"""Command-line front end: JSON config in, CSV + JSON manifest out.

Usage::

    opaent sweep-theta --config run.json --out theta.csv
    opaent gain-vs-temperature --model exact

Exit codes: 0 success, 1 invalid configuration, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import OptoError
from .experiments import (
    evaluate_point,
    gain_monotonicity,
    optimal_gain,
    optimal_gain_vs_temperature,
    sweep_gain,
    sweep_ratios,
    sweep_theta,
)
from .model import AmplitudeModel, DetuningMode, PhysicalParams, derive_constants

__all__ = ["ConfigError", "RunConfig", "parse_config", "run_subcommand", "main"]

SUBCOMMANDS = ("point", "sweep-theta", "sweep-gain", "sweep-ratios", "optimal-gain",
               "gain-vs-temperature")

SWEEP_COLUMNS = ("sweep_value", "stable", "E_N", "nu_minus_tilde", "ratio_mode1",
                 "ratio_mode2", "spectral_abscissa")
OPTIMUM_COLUMNS = ("temperature", "G_opt", "G_opt_in_kappa", "E_N_opt", "G_lo", "G_hi",
                   "baseline_E_N", "enhancement_percent", "boundary_maximum")

# key -> default; None means "derived from another key"
DEFAULTS = {
    "mass": 5e-12,
    "omega_m_hz": 10e6,
    "gamma_m_hz": 100.0,
    "cavity_length": 5e-3,
    "finesse": 1e5,
    "wavelength_1": 1064e-9,
    "wavelength_2": 1064e-9,
    "power_1": 0.100,
    "power_2": 0.080,
    "detuning_1_hz": None,
    "detuning_2_hz": None,
    "opa_gain_hz": None,
    "opa_gain_in_kappa": None,
    "opa_phase": math.pi / 2,
    "temperature": 10e-3,
    "amplitude_model": "paper",
    "detuning_mode": "effective",
    "theta_min": 0.0,
    "theta_max": math.pi,
    "theta_points": 201,
    "gain_min_in_kappa": 0.0,
    "gain_max_in_kappa": 7.0,
    "gain_points": 141,
    "temperature_min": 5e-3,
    "temperature_max": 2.0,
    "temperature_points": 25,
    "workers": 1,
    "output": None,
}

_INT_KEYS = {"theta_points", "gain_points", "temperature_points", "workers"}
_STR_KEYS = {"amplitude_model", "detuning_mode", "output"}
_HZ_HINT = {"omega_m", "gamma_m", "detuning_1", "detuning_2", "opa_gain",
            "omega_m_rad", "gamma_m_rad"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: PhysicalParams
    amplitude_model: AmplitudeModel
    theta_grid: tuple
    gain_grid_in_kappa: tuple
    temperature_grid: tuple
    workers: int
    output: str | None
    resolved: dict


def _key_line(text, key):
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _where(text, key):
    line = _key_line(text, key)
    return f"line {line}, field '{key}'" if line else f"field '{key}'"


def _reject_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ConfigError(f"duplicate key '{k}'")
        out[k] = v
    return out


def parse_config(text: str, overrides: dict | None = None) -> RunConfig:
    """Validate a flat JSON config. Empty text (or ``{}``) gives the reference parameters.

    ``overrides`` (e.g. from command-line flags) replace keys after parsing.
    """
    if text.strip():
        try:
            raw = json.loads(text, object_pairs_hook=_reject_duplicates)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    else:
        raw = {}
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    raw.update(overrides or {})

    for key in raw:
        if key not in DEFAULTS:
            if key in _HZ_HINT:
                raise ConfigError(
                    f"{_where(text, key)}: unknown key; rates are given as ordinary "
                    f"frequencies in Hz, use '{key}_hz'"
                    + (" or 'opa_gain_in_kappa'" if key == "opa_gain" else "")
                )
            raise ConfigError(f"{_where(text, key)}: unknown key")

    cfg = dict(DEFAULTS)
    for key, value in raw.items():
        if value is None and DEFAULTS[key] is not None:
            raise ConfigError(f"{_where(text, key)}: must not be null")
        if key in _STR_KEYS:
            if value is not None and not isinstance(value, str):
                raise ConfigError(f"{_where(text, key)}: expected a string, got {value!r}")
        elif key in _INT_KEYS:
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"{_where(text, key)}: expected an integer, got {value!r}")
        elif value is not None and (isinstance(value, bool) or not isinstance(value, (int, float))):
            raise ConfigError(f"{_where(text, key)}: expected a number, got {value!r}")
        cfg[key] = value

    if raw.get("opa_gain_hz") is not None and raw.get("opa_gain_in_kappa") is not None:
        raise ConfigError(
            f"{_where(text, 'opa_gain_in_kappa')}: 'opa_gain_hz' and 'opa_gain_in_kappa' "
            "are mutually exclusive"
        )
    try:
        model = AmplitudeModel(cfg["amplitude_model"])
    except ValueError:
        raise ConfigError(f"{_where(text, 'amplitude_model')}: must be 'paper' or 'exact'") from None
    try:
        detuning_mode = DetuningMode(cfg["detuning_mode"])
    except ValueError:
        raise ConfigError(f"{_where(text, 'detuning_mode')}: must be 'bare' or 'effective'") from None

    two_pi = 2 * math.pi
    omega_m_hz = cfg["omega_m_hz"]
    d1 = omega_m_hz if cfg["detuning_1_hz"] is None else cfg["detuning_1_hz"]
    d2 = -omega_m_hz if cfg["detuning_2_hz"] is None else cfg["detuning_2_hz"]
    phys = dict(
        mass=cfg["mass"],
        omega_m=two_pi * omega_m_hz,
        gamma_m=two_pi * cfg["gamma_m_hz"],
        cavity_length=cfg["cavity_length"],
        finesse=cfg["finesse"],
        wavelength_1=cfg["wavelength_1"],
        wavelength_2=cfg["wavelength_2"],
        power_1=cfg["power_1"],
        power_2=cfg["power_2"],
        detuning_1=two_pi * d1,
        detuning_2=two_pi * d2,
        detuning_mode=detuning_mode,
        opa_gain=0.0,
        opa_phase=cfg["opa_phase"],
        temperature=cfg["temperature"],
    )
    source = {"omega_m": "omega_m_hz", "gamma_m": "gamma_m_hz", "detuning_1": "detuning_1_hz",
              "detuning_2": "detuning_2_hz"}
    try:
        params = PhysicalParams(**phys)
        if cfg["opa_gain_in_kappa"] is not None:
            params = params.with_gain_in_kappa(cfg["opa_gain_in_kappa"])
        elif cfg["opa_gain_hz"] is not None:
            params = params.replace(opa_gain=two_pi * cfg["opa_gain_hz"])
    except ValueError as exc:
        # messages start with the PhysicalParams field name
        name = str(exc).split()[0]
        key = source.get(name, name)
        if name == "opa_gain":
            key = "opa_gain_in_kappa" if cfg["opa_gain_in_kappa"] is not None else "opa_gain_hz"
        raise ConfigError(f"{_where(text, key)}: {exc}") from None

    for stem in ("theta", "gain", "temperature"):
        if cfg[f"{stem}_points"] < 1:
            raise ConfigError(f"{_where(text, stem + '_points')}: must be at least 1")
    if cfg["workers"] < 1:
        raise ConfigError(f"{_where(text, 'workers')}: must be at least 1")
    if not cfg["theta_min"] < cfg["theta_max"] and cfg["theta_points"] > 1:
        raise ConfigError(f"{_where(text, 'theta_max')}: must exceed theta_min")
    if cfg["gain_min_in_kappa"] < 0 or cfg["gain_max_in_kappa"] <= cfg["gain_min_in_kappa"]:
        raise ConfigError(f"{_where(text, 'gain_max_in_kappa')}: need 0 <= gain_min < gain_max")
    if cfg["temperature_min"] <= 0 or cfg["temperature_max"] < cfg["temperature_min"]:
        raise ConfigError(f"{_where(text, 'temperature_min')}: need 0 < temperature_min <= temperature_max")

    theta = np.linspace(cfg["theta_min"], cfg["theta_max"], cfg["theta_points"])
    gain = np.linspace(cfg["gain_min_in_kappa"], cfg["gain_max_in_kappa"], cfg["gain_points"])
    temps = np.geomspace(cfg["temperature_min"], cfg["temperature_max"], cfg["temperature_points"])
    return RunConfig(
        params=params,
        amplitude_model=model,
        theta_grid=tuple(float(x) for x in theta),
        gain_grid_in_kappa=tuple(float(x) for x in gain),
        temperature_grid=tuple(float(x) for x in temps),
        workers=cfg["workers"],
        output=cfg["output"],
        resolved=cfg,
    )


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    value = float(value)
    if math.isnan(value):
        return ""
    return repr(value)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _sweep_rows(records, scale=1.0):
    for r in records:
        value = r.sweep_value / scale if r.sweep_value is not None else None
        yield (value, r.stable, r.E_N, r.nu_minus_tilde, r.ratio_mode1, r.ratio_mode2,
               r.spectral_abscissa)


def _optimum_rows(results):
    for r in results:
        yield (r.temperature, r.G_opt, r.G_opt_in_kappa, r.E_N_opt, r.bracket[0], r.bracket[1],
               r.baseline_E_N, r.enhancement_percent, r.boundary_maximum)


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def manifest_path(out: Path) -> Path:
    return out.with_name(out.stem + ".manifest.json")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (DetuningMode, AmplitudeModel)):
        return obj.value
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def run_subcommand(name: str, config: RunConfig, out: Path | str | None = None) -> int:
    """Run one subcommand and write its CSV and manifest. Returns the exit status."""
    if name not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {name!r}")
    out = Path(out or config.output or f"{name}.csv")
    params, model, workers = config.params, config.amplitude_model, config.workers
    kappa = params.kappa
    extra = {}

    if name == "point":
        rec = evaluate_point(params, model)
        if rec.error:
            raise OptoError(rec.error)
        text = _csv_text(SWEEP_COLUMNS, _sweep_rows([rec]))
    elif name == "sweep-theta":
        recs = sweep_theta(params, config.theta_grid, model, workers)
        text = _csv_text(SWEEP_COLUMNS, _sweep_rows(recs))
        extra["sweep_variable"] = "opa_phase [rad]"
    elif name in ("sweep-gain", "sweep-ratios"):
        grid = np.asarray(config.gain_grid_in_kappa) * kappa
        fn = sweep_gain if name == "sweep-gain" else sweep_ratios
        recs = fn(params, grid, model, workers)
        text = _csv_text(SWEEP_COLUMNS, _sweep_rows(recs, scale=kappa))
        extra["sweep_variable"] = "opa_gain [kappa]"
    else:
        bounds = (config.gain_grid_in_kappa[0] * kappa, config.gain_grid_in_kappa[-1] * kappa)
        if name == "optimal-gain":
            results = [optimal_gain(params, bounds, model)]
        else:
            results = optimal_gain_vs_temperature(params, config.temperature_grid, bounds,
                                                  model, workers)
            extra["monotonicity"] = gain_monotonicity(results)
        text = _csv_text(OPTIMUM_COLUMNS, _optimum_rows(results))

    manifest = {
        "package": "opaent",
        "version": __version__,
        "subcommand": name,
        "amplitude_model": model.value,
        "detuning_mode": params.detuning_mode.value,
        "config": config.resolved,
        "params": asdict(params),
        "derived": asdict(derive_constants(params)),
        "csv": out.name,
        **extra,
    }
    _atomic_write(out, text)
    _atomic_write(manifest_path(out),
                  json.dumps(_jsonable(manifest), indent=2, sort_keys=True) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opaent",
        description="Steady-state two-mode optical entanglement in an optomechanical cavity with an OPA.",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", type=Path, help="flat JSON config (default: reference parameters)")
    parser.add_argument("--out", type=Path, help="CSV output path (default: <subcommand>.csv)")
    parser.add_argument("--model", choices=[m.value for m in AmplitudeModel],
                        help="steady-state amplitude model (default: paper)")
    parser.add_argument("--detunings", choices=[m.value for m in DetuningMode],
                        help="interpret detunings as bare or effective (default: effective)")
    parser.add_argument("--workers", type=int, help="process-pool size for sweeps")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = args.config.read_text(encoding="utf-8") if args.config else ""
        overrides = {}
        if args.model:
            overrides["amplitude_model"] = args.model
        if args.detunings:
            overrides["detuning_mode"] = args.detunings
        if args.workers is not None:
            overrides["workers"] = args.workers
        config = parse_config(text, overrides)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"opaent: configuration error: {exc}", file=sys.stderr)
        return 1
    try:
        return run_subcommand(args.subcommand, config, args.out)
    except OptoError as exc:
        print(f"opaent: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"opaent: configuration error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
