"""Load and validate a run configuration (JSON or YAML) into a typed RunConfig."""
import copy
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml
from cerberus import Validator

from config_schemas import TOLERANCE_DEFAULTS, RunConfigSchema
from errors import ConfigError, HankelLabError
from measure import CarlesonMeasure

log = logging.getLogger(__name__)

# Fields each command needs beyond the schema defaults.
_REQUIRED_FIELDS: dict[str, tuple[str, ...]] = {
    "integrals": (),
    "pick": ("measure",),
    "symbol": ("symbol",),
    "verify-symbol": ("measure", "symbol"),
    "gram": (),
    "positivity": ("measure",),
    "classify": ("symbol", "projection"),
    "example-t": ("t",),
    "simulate": ("symbol",),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int = 0
    measure: CarlesonMeasure | None = None
    symbol: dict | None = None
    projection: np.ndarray | None = field(default=None, compare=False)
    coupling: np.ndarray | None = field(default=None, compare=False)
    t: float | None = None
    alpha: float = 1.0
    grids: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=lambda: dict(TOLERANCE_DEFAULTS))

    def tol(self, key: str) -> float:
        return float(self.tolerances[key])

    def echo(self) -> dict:
        """Plain-data echo of the configuration for reports."""
        return {
            "command": self.command,
            "seed": self.seed,
            "measure": None if self.measure is None else self.measure.to_dict(),
            "symbol": self.symbol,
            "projection": None if self.projection is None else np.real(self.projection).tolist(),
            "C": None if self.coupling is None else np.real(self.coupling).tolist(),
            "t": self.t,
            "alpha": self.alpha,
            "grids": self.grids,
            "tolerances": dict(sorted(self.tolerances.items())),
        }


def _deep_merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = value
    return out


def _flatten_errors(errors, prefix: str = "") -> list[tuple[str, str]]:
    """Cerberus nests errors as {field: [msg | {sub: [...]}]}; flatten to (dotted.path, message)."""
    out = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            path = f"{prefix}.{key}" if prefix else str(key)
            out += _flatten_errors(value, path)
    elif isinstance(errors, list):
        for item in errors:
            out += _flatten_errors(item, prefix)
    else:
        out.append((prefix, str(errors)))
    return out


def read_config_file(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError("", f"cannot read config file {path}: {e}") from e
    try:
        data = json.loads(text) if path.suffix.lower() == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError("", f"cannot parse config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("", "config file must contain a mapping at the top level")
    return data


def parse_overrides(items: list[str] | None) -> dict[str, float]:
    """--tol-override key=value pairs."""
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep:
            raise ConfigError(f"tolerances.{key}", "override must look like key=value")
        if key not in TOLERANCE_DEFAULTS:
            raise ConfigError(f"tolerances.{key}", "unknown tolerance")
        try:
            out[key] = float(value)
        except ValueError as e:
            raise ConfigError(f"tolerances.{key}", f"'{value}' is not a number") from e
    return out


def _matrix(data, path: str, dim: int | None = None) -> np.ndarray | None:
    if data is None:
        return None
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ConfigError(path, f"expected a square matrix, got shape {arr.shape}")
    if dim is not None and arr.shape[0] != dim:
        raise ConfigError(path, f"expected a {dim}x{dim} matrix")
    return arr.astype(complex)


def _check_symbol_inputs(data: dict):
    symbol = data.get("symbol")
    if symbol is None:
        return
    name = symbol["name"]
    if name in {"beta", "i_imag"} and data.get("measure") is None:
        raise ConfigError("measure", f"symbol '{name}' is built from a measure")
    if name == "beta" and data.get("projection") is None:
        raise ConfigError("projection", "symbol 'beta' needs a projection")


def build_run_config(raw: dict, seed: int | None = None, tol_overrides: dict[str, float] | None = None,
                     base_tolerances: dict[str, float] | None = None) -> RunConfig:
    """Validate, merge defaults and apply CLI overrides.

    Tolerances resolve as built-in defaults < base_tolerances (application
    config) < the run file < --tol-override.
    """
    schemas = RunConfigSchema()
    validator = Validator(schemas.validation)
    if not validator.validate(raw):
        path, message = sorted(_flatten_errors(validator.errors))[0]
        raise ConfigError(path, message)

    data = _deep_merge(schemas.default, raw)
    if seed is not None:
        if not 0 <= int(seed) < 2**64:
            raise ConfigError("seed", "seed must be an unsigned 64-bit integer")
        data["seed"] = int(seed)

    tolerances = dict(TOLERANCE_DEFAULTS)
    tolerances.update(base_tolerances or {})
    tolerances.update(data.get("tolerances") or {})
    tolerances.update(tol_overrides or {})
    for key, value in tolerances.items():
        if not value > 0:
            raise ConfigError(f"tolerances.{key}", "tolerances must be strictly positive")

    command = data["command"]
    for key in _REQUIRED_FIELDS[command]:
        if data.get(key) is None:
            raise ConfigError(key, f"required by command '{command}'")
    if command == "gram" and data.get("measure") is None and data.get("symbol") is None:
        raise ConfigError("measure", "command 'gram' needs a measure or a symbol")
    _check_symbol_inputs(data)

    for name in ("x_grid", "positivity_grid"):
        rng = data["grids"][name]
        if not 0 < rng["lo"] < rng["hi"]:
            raise ConfigError(f"grids.{name}", "need 0 < lo < hi")

    measure = None
    if data.get("measure") is not None:
        try:
            measure = CarlesonMeasure.from_dict(data["measure"])
        except HankelLabError as e:
            raise ConfigError("measure", str(e)) from e

    projection = _matrix(data.get("projection"), "projection")
    coupling = _matrix(data.get("C"), "C", None if projection is None else projection.shape[0])

    cfg = RunConfig(
        command=command,
        seed=int(data["seed"]),
        measure=measure,
        symbol=data.get("symbol"),
        projection=projection,
        coupling=coupling,
        t=None if data.get("t") is None else float(data["t"]),
        alpha=float(data["alpha"]),
        grids=data["grids"],
        tolerances=tolerances,
    )
    log.debug("run config for '%s' validated (seed %d)", cfg.command, cfg.seed)
    return cfg


def load_run_config(path: str | Path, seed: int | None = None, tol_overrides: dict[str, float] | None = None,
                    base_tolerances: dict[str, float] | None = None) -> RunConfig:
    return build_run_config(read_config_file(path), seed, tol_overrides, base_tolerances)
