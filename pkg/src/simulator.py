"""Discrete momentum-space model of (L²(ℝ,ℂᵈ)^♯, H²^♯, S_t, θ_h).

Fields live on a symmetric half-offset grid, so the reflection x ↦ −x is the
exact index map k ↦ n−1−k and no node sits at x = 0.
"""
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from errors import BadGridSize, DimensionMismatch
from symbol import Symbol, check_flat, check_sharp, check_unitary

log = logging.getLogger(__name__)

SHARP_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    n: int
    x_max: float

    def __post_init__(self):
        if self.n < 2 or self.n % 2:
            raise BadGridSize(f"grid size must be an even number >= 2, got {self.n}")
        if not self.x_max > 0:
            raise BadGridSize("x_max must be positive")

    @property
    def spacing(self) -> float:
        return 2.0 * self.x_max / self.n

    @property
    def nodes(self) -> NDArray:
        k = np.arange(self.n)
        return (k + 0.5 - self.n / 2) * self.spacing

    def inner(self, f: "GridField", g: "GridField") -> complex:
        return complex(self.spacing * np.sum(np.conj(f.values) * g.values))

    def norm(self, f: "GridField") -> float:
        return float(np.sqrt(self.spacing * np.sum(np.abs(f.values) ** 2)))


def is_sharp(values: NDArray, tol: float = SHARP_TOL) -> bool:
    """values[n−1−k] = conj(values[k]) up to tol relative to the largest entry."""
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    return float(np.max(np.abs(values[::-1] - np.conj(values)), initial=0.0)) <= tol * scale


@dataclass(frozen=True)
class GridField:
    grid: Grid
    values: NDArray = field(compare=False)
    sharp: bool = False

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @classmethod
    def make(cls, grid: Grid, values) -> "GridField":
        values = np.asarray(values, dtype=complex)
        if values.ndim == 1:
            values = values[:, None]
        if values.shape[0] != grid.n:
            raise DimensionMismatch(f"field has {values.shape[0]} samples, grid has {grid.n}")
        return cls(grid, values, is_sharp(values))

    def sample(self, fn) -> "GridField":
        return GridField.make(self.grid, fn(self.grid.nodes))

    def __add__(self, other: "GridField") -> "GridField":
        return GridField.make(self.grid, self.values + other.values)

    def __sub__(self, other: "GridField") -> "GridField":
        return GridField.make(self.grid, self.values - other.values)

    def scaled(self, c: complex) -> "GridField":
        return GridField.make(self.grid, c * self.values)


def sample_field(grid: Grid, fn, v) -> GridField:
    """x ↦ fn(x)·v on the grid nodes."""
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    return GridField.make(grid, np.asarray(fn(grid.nodes))[:, None] * v[None, :])


# ── Operators ─────────────────────────────────────────────────────────────────

def apply_S(t: float, f: GridField) -> GridField:
    """(S_t f)(x) = e^{itx} f(x)."""
    phase = np.exp(1j * t * f.grid.nodes)
    return GridField.make(f.grid, phase[:, None] * f.values)


def symbol_on_grid(h: Symbol, grid: Grid) -> NDArray:
    return h.values(grid.nodes)


def apply_theta(h: Symbol, f: GridField, h_values: NDArray | None = None) -> GridField:
    """(θ_h f)(x_k) = h(x_k)·f(x_{n−1−k})."""
    if h.dim != f.dim:
        raise DimensionMismatch(f"symbol dim {h.dim} does not match field dim {f.dim}")
    hv = symbol_on_grid(h, f.grid) if h_values is None else h_values
    return GridField.make(f.grid, np.einsum("kij,kj->ki", hv, f.values[::-1]))


def apply_Pplus(f: GridField) -> GridField:
    """Keep the non-negative frequencies of the DFT, drop the rest (Nyquist included)."""
    n = f.grid.n
    if n & (n - 1):
        raise BadGridSize(f"Hardy projection needs a power-of-two grid, got n={n}")
    spectrum = np.fft.fft(f.values, axis=0)
    keep = np.fft.fftfreq(n) >= 0
    return GridField.make(f.grid, np.fft.ifft(spectrum * keep[:, None], axis=0))


# ── Trial fields ──────────────────────────────────────────────────────────────

def wave_packet(grid: Grid, s0: float, width: float, v) -> GridField:
    """√(2π)·w·e^{i s0 x}·e^{−w²x²/2}·v; ♯-symmetric for real v, spectrum centred at s0."""
    return sample_field(grid, lambda x: np.sqrt(2 * np.pi) * width * np.exp(1j * s0 * x - 0.5 * (width * x) ** 2),
                        np.asarray(v, dtype=float))


def trial_fields(grid: Grid, dim: int, trials: int, seed: int, packets: int = 2,
                 width: float = 0.5, s_range: tuple[float, float] = (3.0, 4.5)) -> list[GridField]:
    """Seeded real combinations of Gaussian wave packets, P₊-projected and normalised."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(trials):
        total = np.zeros((grid.n, dim), dtype=complex)
        for _ in range(packets):
            v = rng.normal(size=dim)
            total += rng.normal() * wave_packet(grid, rng.uniform(*s_range), width, v).values
        f = apply_Pplus(GridField.make(grid, total))
        out.append(f.scaled(1.0 / grid.norm(f)))
    return out


# ── Checks ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class QuadrupleReport:
    n: int
    x_max: float
    trials: int
    symbol_checks: dict
    group_law: float
    isometry: float
    commutation: float
    involution: float
    min_rayleigh: float
    monotonicity: float
    decay_t: tuple[float, ...]
    decay_curve: tuple[float, ...]
    decay_increase: float
    sharp_stability: float


def _max_dev(f: GridField, g: GridField) -> float:
    return float(np.max(np.abs(f.values - g.values), initial=0.0))


def _sharp_defect(f: GridField) -> float:
    return float(np.max(np.abs(f.values[::-1] - np.conj(f.values)), initial=0.0))


def quadruple_checks(h: Symbol, t_list: Sequence[float], grid: Grid, trials: int, seed: int = 0,
                     symbol_tol: float = 1e-10) -> QuadrupleReport:
    """Residuals of the defining relations over seeded Hardy-projected ♯-fields."""
    xs = grid.nodes
    symbol_checks = {
        "unitary": check_unitary(h, xs, symbol_tol).passed,
        "sharp_fixed": check_sharp(h, xs, symbol_tol).passed,
        "flat_fixed": check_flat(h, xs, symbol_tol).passed,
    }
    hv = symbol_on_grid(h, grid)
    fields = trial_fields(grid, h.dim, trials, seed)
    t_pos = sorted(abs(float(t)) for t in t_list)

    group = iso = comm = invol = mono = stab = 0.0
    rayleigh = float("inf")
    curves = np.zeros((len(fields), len(t_pos)))
    for j, f in enumerate(fields):
        norm = grid.norm(f)
        theta_f = apply_theta(h, f, hv)
        invol = max(invol, _max_dev(apply_theta(h, theta_f, hv), f))
        rayleigh = min(rayleigh, grid.inner(f, theta_f).real / norm**2)
        stab = max(stab, _sharp_defect(theta_f), _sharp_defect(apply_Pplus(f)))
        for k, t in enumerate(t_pos):
            st_f = apply_S(t, f)
            group = max(group, _max_dev(apply_S(-t, st_f), f))
            iso = max(iso, abs(grid.norm(st_f) - norm))
            comm = max(comm, _max_dev(apply_theta(h, st_f, hv), apply_S(-t, theta_f)))
            mono = max(mono, grid.norm(st_f - apply_Pplus(st_f)) / norm)
            curves[j, k] = grid.norm(apply_Pplus(apply_S(-t, f))) / norm

    curve = curves.mean(axis=0) if len(fields) else np.zeros(len(t_pos))
    increase = float(np.max(np.diff(curves, axis=1), initial=0.0)) if len(t_pos) > 1 and len(fields) else 0.0
    log.debug("quadruple checks on n=%d: min Rayleigh %.4g, commutation %.2e", grid.n, rayleigh, comm)
    return QuadrupleReport(
        grid.n, grid.x_max, trials, symbol_checks, group, iso, comm, invol, rayleigh, mono,
        tuple(t_pos), tuple(float(c) for c in curve), increase, stab,
    )


@dataclass(frozen=True)
class ConvergenceReport:
    grids: tuple[tuple[int, float], ...]
    hardy_residuals: tuple[float, ...]
    anti_hardy_residuals: tuple[float, ...]
    kernel_residuals: tuple[float, ...]

    @property
    def halving(self) -> bool:
        """Every refinement at least halves both second-order residuals."""
        pairs = list(zip(self.hardy_residuals[:-1], self.hardy_residuals[1:], strict=True))
        pairs += list(zip(self.anti_hardy_residuals[:-1], self.anti_hardy_residuals[1:], strict=True))
        return all(b <= 0.5 * a for a, b in pairs)


def convergence_sweep(grids: Sequence[tuple[int, float]], dim: int = 1) -> ConvergenceReport:
    """Truncation residuals of P₊ on (i/(x+i))²·v and its conjugate, plus the Q_i residual.

    The second-order kernel decays like |x|⁻², so its residual shrinks like
    x_max^(−3/2). The Q_i residual only shrinks like x_max^(−1/2) and is
    reported without a rate claim.
    """
    v = np.ones(dim) / np.sqrt(dim)
    hardy, anti, kernel = [], [], []
    for n, x_max in grids:
        grid = Grid(int(n), float(x_max))
        f = sample_field(grid, lambda x: (1j / (x + 1j)) ** 2, v)
        fbar = sample_field(grid, lambda x: np.conj((1j / (x + 1j)) ** 2), v)
        q = sample_field(grid, lambda x: (1.0 / (2 * np.pi)) * 1j / (x + 1j), v)
        hardy.append(grid.norm(apply_Pplus(f) - f) / grid.norm(f))
        anti.append(grid.norm(apply_Pplus(fbar)) / grid.norm(fbar))
        kernel.append(grid.norm(apply_Pplus(q) - q) / grid.norm(q))
    return ConvergenceReport(tuple((int(n), float(x)) for n, x in grids), tuple(hardy), tuple(anti), tuple(kernel))
