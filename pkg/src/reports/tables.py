"""CSV tables for plotting: a header row followed by data rows."""
from collections.abc import Sequence

import numpy as np

Table = tuple[list[str], list[list[float]]]


def _entry_names(prefix: str, dim: int) -> list[str]:
    return [f"{prefix}_{j}{k}_{part}" for j in range(dim) for k in range(dim) for part in ("re", "im")]


def _flatten(m) -> list[float]:
    m = np.asarray(m, dtype=complex)
    return [float(v) for z in m.ravel() for v in (z.real, z.imag)]


def pick_table(samples: Sequence[tuple[float, np.ndarray, np.ndarray]], dim: int) -> Table:
    """Rows x, entries of 𝓡(x), entries of 𝓘(x)."""
    header = ["x", *_entry_names("r", dim), *_entry_names("i", dim)]
    return header, [[float(x), *_flatten(r), *_flatten(i)] for x, r, i in samples]


def symbol_table(xs: Sequence[float], values: np.ndarray) -> Table:
    dim = values.shape[-1]
    header = ["x", *_entry_names("h", dim)]
    return header, [[float(x), *_flatten(v)] for x, v in zip(xs, values, strict=True)]


def decay_table(ts: Sequence[float], curve: Sequence[float]) -> Table:
    return ["t", "outgoing_norm"], [[float(t), float(c)] for t, c in zip(ts, curve, strict=True)]
