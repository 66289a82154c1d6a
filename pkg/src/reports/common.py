"""Shared helpers used by every report builder: checks, JSON encoding and the report envelope."""
import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

SCHEMA = "hankel-symbol-lab/1"
VERSION = "1.0.0"


@dataclass(frozen=True)
class Check:
    """One pass/fail line of a report."""

    name: str
    value: float | None
    threshold: float | None
    passed: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "value": self.value, "threshold": self.threshold, "passed": self.passed}


def encode_float(x: float) -> float | str:
    """JSON has no inf/nan; write them as strings."""
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def encode_complex(z: complex) -> dict:
    z = complex(z)
    return {"re": encode_float(z.real), "im": encode_float(z.imag)}


def encode_matrix(m) -> dict:
    """Complex matrix as {"re": [[...]], "im": [[...]]}."""
    m = np.asarray(m, dtype=complex)
    return {"re": sanitize(m.real.tolist()), "im": sanitize(m.imag.tolist())}


def sanitize(obj):
    """Turn numpy scalars/arrays, complex numbers, enums and non-finite floats into plain JSON data."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, Check):
        return sanitize(obj.to_dict())
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return encode_matrix(obj) if obj.ndim == 2 else [sanitize(v) for v in obj]
        return sanitize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return encode_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return encode_complex(obj)
    return obj


def dumps(report: dict) -> str:
    """Deterministic JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(sanitize(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def build_envelope(command: str, seed: int, checks: list[Check], results: dict, config_echo: dict,
                   verdicts: dict | None = None, errors: list[dict] | None = None,
                   wall_time: float | None = None) -> dict:
    report = {
        "schema": SCHEMA,
        "version": VERSION,
        "command": command,
        "seed": seed,
        "config": config_echo,
        "checks": [c.to_dict() for c in checks],
        "all_passed": all(c.passed for c in checks),
        "verdicts": verdicts or {},
        "errors": errors or [],
        "results": results,
    }
    if wall_time is not None:
        report["wall_time"] = round(wall_time, 6)
    return report
