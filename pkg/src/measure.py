"""Operator-valued Carleson measures on ℝ₊: an absolutely continuous density plus finitely many atoms."""
import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from errors import BadParams, DimensionMismatch, UnknownDensity
from numerics import (
    QuadratureSpec,
    as_matrix,
    hermitian_spectrum,
    integrate_halfline,
    integrate_interval,
    integrate_tail,
    spectral_norm,
)

log = logging.getLogger(__name__)

PSD_TOL = 1e-12

DensityFn = Callable[[NDArray], NDArray]


@dataclass(frozen=True)
class DensityEntry:
    """A named density λ ↦ ρ(λ), vectorised to shape (n, d, d)."""

    name: str
    params: tuple[float, ...]
    dim: int
    evaluator: DensityFn = field(repr=False, compare=False)
    breakpoints: tuple[float, ...] = ()

    def __call__(self, lam) -> NDArray:
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        return self.evaluator(lam)


@dataclass(frozen=True)
class Atom:
    location: float
    weight: NDArray = field(compare=False)


@dataclass(frozen=True)
class CarlesonMeasure:
    dim: int
    density: DensityEntry | None = None
    atoms: tuple[Atom, ...] = ()

    def __post_init__(self):
        if self.dim < 1:
            raise BadParams("measure dimension must be positive")
        if self.density is not None and self.density.dim != self.dim:
            raise DimensionMismatch(f"density '{self.density.name}' has dim {self.density.dim}, measure has {self.dim}")
        seen: set[float] = set()
        for atom in self.atoms:
            if not atom.location > 0:
                raise BadParams(f"atom location {atom.location} is not positive")
            if atom.location in seen:
                raise BadParams(f"duplicate atom location {atom.location}")
            seen.add(atom.location)
            w = as_matrix(atom.weight)
            if w.shape != (self.dim, self.dim):
                raise DimensionMismatch(f"atom weight at {atom.location} has shape {w.shape}")
            if hermitian_spectrum(w, PSD_TOL)[0] < -PSD_TOL:
                raise BadParams(f"atom weight at {atom.location} is not positive semidefinite")

    @property
    def is_pure_point(self) -> bool:
        return self.density is None

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return self.density.breakpoints if self.density is not None else ()

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "density": None if self.density is None else {"name": self.density.name, "params": list(self.density.params)},
            "atoms": [
                {
                    "lambda": a.location,
                    "weight_re": np.real(a.weight).tolist(),
                    "weight_im": np.imag(a.weight).tolist(),
                }
                for a in self.atoms
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CarlesonMeasure":
        dim = int(data["dim"])
        density = None
        if data.get("density"):
            density = make_density(data["density"]["name"], data["density"].get("params", []), dim)
        atoms = []
        for entry in data.get("atoms") or []:
            re = np.asarray(entry["weight_re"], dtype=float)
            im = np.asarray(entry.get("weight_im", np.zeros_like(re)), dtype=float)
            atoms.append(Atom(float(entry["lambda"]), re + 1j * im))
        return cls(dim, density, tuple(atoms))


# ── Density registry ──────────────────────────────────────────────────────────

_REGISTRY: dict[str, Callable[[tuple[float, ...], int], DensityEntry]] = {}


def _register(name: str):
    def wrap(factory):
        _REGISTRY[name] = factory
        return factory
    return wrap


def density_names() -> list[str]:
    return sorted(_REGISTRY)


def make_density(name: str, params: Sequence[float], dim: int) -> DensityEntry:
    factory = _REGISTRY.get(name)
    if factory is None:
        raise UnknownDensity(f"unknown density '{name}' (known: {', '.join(density_names())})")
    return factory(tuple(float(p) for p in params), int(dim))


@_register("lebesgue2")
def _lebesgue2(params: tuple[float, ...], dim: int) -> DensityEntry:
    if params:
        raise BadParams("lebesgue2 takes no parameters")
    eye = 2.0 * np.eye(dim)
    return DensityEntry("lebesgue2", params, dim, lambda lam: np.broadcast_to(eye, (len(lam), dim, dim)).astype(complex))


def example_blocks(t: float, lam: NDArray) -> tuple[NDArray, NDArray]:
    """Scalar factor of the diagonal block and the 2×2 off-diagonal block of the example density."""
    lam = np.asarray(lam, dtype=float)
    diag = 2.0 * (t + lam**2) / (1.0 + lam**2)
    s = np.sqrt((1.0 - t) * lam) * (lam - 1.0)
    q = np.sqrt(1.0 - t * t) * lam
    scale = 2.0 / (1.0 + lam**2)
    off = np.empty(lam.shape + (2, 2))
    off[..., 0, 0] = scale * s
    off[..., 0, 1] = -scale * q
    off[..., 1, 0] = scale * q
    off[..., 1, 1] = scale * s
    return diag, off


@_register("example_t")
def _example_t(params: tuple[float, ...], dim: int) -> DensityEntry:
    if dim != 4:
        raise BadParams(f"example_t is 4-dimensional, got dim={dim}")
    if len(params) != 1:
        raise BadParams("example_t takes exactly one parameter t")
    t = params[0]
    if not 0.0 <= t <= 1.0:
        raise BadParams(f"example_t requires t in [0, 1], got {t}")
    # λ² + (t−1)λ + t² has positive roots below 1/3, where ρ_t stops being positive
    if t < 1.0 / 3.0:
        raise BadParams(f"example_t density is not positive semidefinite for t={t} < 1/3")

    def rho(lam: NDArray) -> NDArray:
        diag, off = example_blocks(t, lam)
        out = np.zeros((len(lam), 4, 4), dtype=complex)
        out[:, 0, 0] = out[:, 1, 1] = out[:, 2, 2] = out[:, 3, 3] = diag
        out[:, 2:, :2] = off
        out[:, :2, 2:] = np.swapaxes(off, -1, -2)
        return out

    return DensityEntry("example_t", params, dim, rho)


@_register("rank_one_fail")
def _rank_one_fail(params: tuple[float, ...], dim: int) -> DensityEntry:
    if dim != 2 or params:
        raise BadParams("rank_one_fail is 2-dimensional and takes no parameters")

    def rho(lam: NDArray) -> NDArray:
        w = np.stack([np.ones_like(lam), -1.0 / (1.0 + lam)], axis=-1)
        return (w[:, :, None] * w[:, None, :]).astype(complex)

    return DensityEntry("rank_one_fail", params, dim, rho)


@_register("block_chi")
def _block_chi(params: tuple[float, ...], dim: int) -> DensityEntry:
    if dim != 2 or params:
        raise BadParams("block_chi is 2-dimensional and takes no parameters")

    def rho(lam: NDArray) -> NDArray:
        out = np.zeros((len(lam), 2, 2), dtype=complex)
        low = lam < 1.0
        out[low, 0, 0] = 1.0
        out[~low, 1, 1] = 1.0
        return out

    return DensityEntry("block_chi", params, dim, rho, breakpoints=(1.0,))


BUILTIN_MEASURES = ("lebesgue2", "example_t", "rank_one_fail", "block_chi", "atoms")


def builtin_measure(name: str, params: Sequence[float] = (), dim: int = 1) -> CarlesonMeasure:
    """Built-in measures; ``atoms`` places identity weights at the given locations."""
    if name == "atoms":
        if not params:
            raise BadParams("atoms needs at least one location")
        return CarlesonMeasure(dim, None, tuple(Atom(float(p), np.eye(dim, dtype=complex)) for p in params))
    return CarlesonMeasure(dim, make_density(name, params, dim))


# ── Integration against μ ─────────────────────────────────────────────────────

def density_integral(mu: CarlesonMeasure, integrand: Callable[[NDArray, NDArray], NDArray], spec: QuadratureSpec,
                     points: Iterable[float] = ()) -> NDArray:
    """∫ integrand(λ, ρ(λ)) dλ over ℝ₊; zero when μ has no density."""
    if mu.density is None:
        return np.zeros_like(integrand(np.ones(1), np.zeros((1, mu.dim, mu.dim), dtype=complex))[0])
    density = mu.density
    res = integrate_halfline(lambda lam: integrand(lam, density(lam)), spec, (*mu.breakpoints, *points))
    return res.value


def atom_sum(mu: CarlesonMeasure, term: Callable[[float, NDArray], NDArray], shape: tuple[int, ...]) -> NDArray:
    total = np.zeros(shape, dtype=complex)
    for atom in mu.atoms:
        total = total + term(atom.location, as_matrix(atom.weight))
    return total


def moment(mu: CarlesonMeasure, g: Callable[[NDArray], NDArray], spec: QuadratureSpec,
           points: Iterable[float] = ()) -> NDArray:
    """∫ g(λ) dμ(λ) for a scalar, vectorised g."""
    ac = density_integral(mu, lambda lam, rho: np.asarray(g(lam))[:, None, None] * rho, spec, points)
    pp = atom_sum(mu, lambda loc, w: complex(np.asarray(g(np.array([loc])))[0]) * w, (mu.dim, mu.dim))
    return ac + pp


def density_min_eigenvalues(mu: CarlesonMeasure, lam_grid) -> NDArray:
    """Smallest eigenvalue of ρ(λ) at each grid point."""
    if mu.density is None:
        return np.zeros(0)
    rho = mu.density(np.asarray(lam_grid, dtype=float))
    herm = 0.5 * (rho + np.conj(np.swapaxes(rho, -1, -2)))
    return np.linalg.eigvalsh(herm)[:, 0]


# ── Carleson evidence ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CarlesonRatios:
    x_grid: tuple[float, ...]
    ratios_low: tuple[float, ...]
    ratios_high: tuple[float, ...]

    @property
    def max_ratio_low(self) -> float:
        return max(self.ratios_low, default=0.0)

    @property
    def max_ratio_high(self) -> float:
        return max(self.ratios_high, default=0.0)


def carleson_ratio_check(mu: CarlesonMeasure, x_grid: Sequence[float], spec: QuadratureSpec) -> CarlesonRatios:
    """(1/x)‖∫_0^x dμ/(1+λ²)‖ and (1/x)‖∫_{1/x}^∞ dμ/(1+λ²)‖ along the grid.

    Finite values are evidence for the Carleson property, not a certificate.
    """
    lows, highs = [], []
    d = mu.dim

    def weighted(lam: NDArray) -> NDArray:
        return mu.density(lam) / (1.0 + lam**2)[:, None, None]

    for x in x_grid:
        if not x > 0:
            raise BadParams(f"Carleson grid point {x} is not positive")
        low = np.zeros((d, d), dtype=complex)
        high = np.zeros((d, d), dtype=complex)
        if mu.density is not None:
            low = integrate_interval(weighted, 0.0, x, spec, mu.breakpoints).value
            high = integrate_tail(weighted, 1.0 / x, spec, mu.breakpoints).value
        for atom in mu.atoms:
            w = as_matrix(atom.weight) / (1.0 + atom.location**2)
            if atom.location <= x:
                low = low + w
            if atom.location >= 1.0 / x:
                high = high + w
        lows.append(spectral_norm(low) / x)
        highs.append(spectral_norm(high) / x)
    log.debug("Carleson ratios over %d points: low %.4g high %.4g", len(lows), max(lows, default=0), max(highs, default=0))
    return CarlesonRatios(tuple(float(v) for v in x_grid), tuple(lows), tuple(highs))
