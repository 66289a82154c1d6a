"""Pick-type transform 𝒩_μ of a Carleson measure and its boundary parts 𝓡_μ, 𝓘_μ."""
import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from errors import DomainError
from measure import CarlesonMeasure, atom_sum, density_integral
from numerics import QuadratureSpec, as_matrix, hermitian_spectrum, spectral_norm

log = logging.getLogger(__name__)

RAY_GUARD = 1e-3


@dataclass(frozen=True)
class PickEvaluation:
    z: complex
    n_value: NDArray
    r_value: NDArray
    i_value: NDArray


def _hermitize(m: NDArray) -> NDArray:
    return 0.5 * (m + m.conj().T)


def on_excluded_ray(z: complex) -> bool:
    z = complex(z)
    return z.real == 0.0 and z.imag <= 0.0


def _check_z(z: complex) -> complex:
    z = complex(z)
    if on_excluded_ray(z):
        raise DomainError(f"z={z} lies on the excluded ray i(-inf, 0]")
    return z


def pick_n(mu: CarlesonMeasure, z: complex, spec: QuadratureSpec) -> NDArray:
    """𝒩_μ(z) = (1/π)∫ (1/(λ−iz) − λ/(1+λ²)) dμ(λ)."""
    z = _check_z(z)

    def kernel(lam):
        # same kernel with the two fractions combined to avoid cancellation at large λ
        return (1.0 + 1j * lam * z) / ((lam - 1j * z) * (1.0 + lam**2))

    ac = density_integral(mu, lambda lam, rho: kernel(lam)[:, None, None] * rho, spec, (abs(z),))
    pp = atom_sum(mu, lambda loc, w: complex(kernel(np.float64(loc))) * w, (mu.dim, mu.dim))
    return (ac + pp) / np.pi


def pick_boundary(mu: CarlesonMeasure, x: float, spec: QuadratureSpec) -> tuple[NDArray, NDArray]:
    """Boundary values (𝓡_μ(x), 𝓘_μ(x)) at real x ≠ 0, integrated directly."""
    x = float(x)
    if x == 0.0:
        raise DomainError("boundary values are undefined at x = 0")

    def kernels(lam):
        den = lam**2 + x * x
        return np.stack([lam * (1.0 - x * x) / (den * (1.0 + lam**2)), x / den], axis=-1)

    ac = density_integral(mu, lambda lam, rho: kernels(lam)[:, :, None, None] * rho[:, None, :, :], spec, (abs(x),))
    pp = atom_sum(mu, lambda loc, w: kernels(np.float64(loc))[:, None, None] * w, (2, mu.dim, mu.dim))
    both = (ac + pp) / np.pi
    return _hermitize(both[0]), _hermitize(both[1])


def pick_evaluation(mu: CarlesonMeasure, z: complex, spec: QuadratureSpec) -> PickEvaluation:
    n = pick_n(mu, z, spec)
    return PickEvaluation(complex(z), n, _hermitize(n), (n - n.conj().T) / 2j)


def lebesgue2_pick(z: complex, dim: int = 1) -> NDArray:
    """Closed form −(2/π)·log(−iz)·1 of 𝒩 for dμ = 2dλ·1."""
    z = _check_z(z)
    return -(2.0 / np.pi) * np.log(-1j * z) * np.eye(dim, dtype=complex)


# ── Growth bounds and symmetry ────────────────────────────────────────────────

@dataclass(frozen=True)
class KappaReport:
    alpha: float
    max_ratio_i: float
    max_ratio_r: float
    points: int
    passed: bool


def _ratio(norm: float, bound: float) -> float:
    if bound > 0:
        return norm / bound
    return 0.0 if norm <= 1e-15 else float("inf")


def kappa_bound_check(mu: CarlesonMeasure, alpha: float, z_grid: Sequence[complex], spec: QuadratureSpec,
                      slack: float = 1e-8) -> KappaReport:
    """‖𝓘(z)‖ ≤ 2α and ‖𝓡(z)‖ ≤ (8/π)α|log|z|| + α over the grid.

    alpha must be an upper bound for the Hankel operator norm.
    """
    if alpha < 0:
        raise DomainError("alpha must be non-negative")
    worst_i = worst_r = 0.0
    for z in z_grid:
        z = complex(z)
        if z == 0 or z.imag < 0:
            raise DomainError(f"growth bounds are stated on the closed upper half-plane without 0, got z={z}")
        if z.imag == 0:
            r, i = pick_boundary(mu, z.real, spec)
        else:
            ev = pick_evaluation(mu, z, spec)
            r, i = ev.r_value, ev.i_value
        worst_i = max(worst_i, _ratio(spectral_norm(i), 2.0 * alpha))
        worst_r = max(worst_r, _ratio(spectral_norm(r), (8.0 / np.pi) * alpha * abs(np.log(abs(z))) + alpha))
    passed = worst_i <= 1.0 + slack and worst_r <= 1.0 + slack
    log.debug("kappa bounds alpha=%g: I %.4g R %.4g", alpha, worst_i, worst_r)
    return KappaReport(alpha, worst_i, worst_r, len(z_grid), passed)


@dataclass(frozen=True)
class SymmetryReport:
    max_even_defect: float
    max_odd_defect: float
    min_signed_eigenvalue: float


def kappa_symmetry_report(mu: CarlesonMeasure, xs: Sequence[float], spec: QuadratureSpec) -> SymmetryReport:
    """𝓡 even, 𝓘 odd and sgn(x)·𝓘(x) ≥ 0 on the positive points of xs."""
    even = odd = 0.0
    min_eig = float("inf")
    for x in xs:
        x = abs(float(x))
        r_pos, i_pos = pick_boundary(mu, x, spec)
        r_neg, i_neg = pick_boundary(mu, -x, spec)
        even = max(even, spectral_norm(r_neg - r_pos))
        odd = max(odd, spectral_norm(i_neg + i_pos))
        min_eig = min(min_eig, hermitian_spectrum(i_pos)[0], hermitian_spectrum(-i_neg)[0])
    return SymmetryReport(even, odd, min_eig)


def z_grid(radii: Sequence[float], n_angles: int, lower: float = 0.0, upper: float = np.pi) -> list[complex]:
    """Polar grid r·e^{iφ}; angles within RAY_GUARD of −π/2 are dropped."""
    out = []
    for phi in np.linspace(lower, upper, n_angles):
        if abs(phi + np.pi / 2) < RAY_GUARD:
            continue
        for r in radii:
            z = complex(r * np.cos(phi), r * np.sin(phi))
            if abs(z.imag) < 1e-15:
                z = complex(z.real, 0.0)
            out.append(z)
    return out


def pick_consistency(mu: CarlesonMeasure, x: float, spec: QuadratureSpec) -> float:
    """‖𝒩_μ(x) − (𝓡_μ(x) + i𝓘_μ(x))‖ through the two integral routes."""
    r, i = pick_boundary(mu, x, spec)
    return spectral_norm(as_matrix(pick_n(mu, x, spec)) - (r + 1j * i))
