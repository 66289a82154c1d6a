"""Szegő kernels and Hankel quadratic forms from the measure side and the symbol side.

Also hosts the finite compressions used as positivity evidence (Gram matrices,
norm lower bounds) and the strict-positivity ledger with its witnesses.
"""
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

from errors import DimensionMismatch, DomainError, SingularGram
from measure import CarlesonMeasure, atom_sum, builtin_measure, density_integral, density_min_eigenvalues
from numerics import QuadratureSpec, hermitian_spectrum, integrate_realline
from symbol import Symbol

log = logging.getLogger(__name__)

KERNEL_COND_LIMIT = 1e12

VectorFn = Callable[[NDArray], NDArray]


def szego_eval(xi, z):
    """Q_ξ(z) = (1/2π)·i/(z − conj ξ); broadcasts over arrays."""
    return (1.0 / (2.0 * np.pi)) * 1j / (np.asarray(z) - np.conj(xi))


@dataclass(frozen=True)
class KernelVector:
    """The Hardy function z ↦ Q_ξ(z)·v."""

    xi: complex
    v: NDArray = field(compare=False)

    def __post_init__(self):
        if not complex(self.xi).imag > 0:
            raise DomainError(f"kernel point {self.xi} is not in the upper half-plane")
        v = np.atleast_1d(np.asarray(self.v, dtype=complex))
        if v.ndim != 1 or not np.linalg.norm(v) > 0:
            raise DomainError("kernel vector must be a nonzero 1-D vector")
        object.__setattr__(self, "xi", complex(self.xi))
        object.__setattr__(self, "v", v)

    @property
    def dim(self) -> int:
        return len(self.v)


@dataclass(frozen=True)
class HardySample:
    """Values of an H² function on the imaginary axis (f(iλ)) and optionally on ℝ (f(x))."""

    dim: int
    axis_eval: VectorFn = field(compare=False)
    boundary_eval: VectorFn | None = field(default=None, compare=False)

    @classmethod
    def from_kernel(cls, kv: KernelVector) -> "HardySample":
        return cls(
            kv.dim,
            lambda lam: szego_eval(kv.xi, 1j * lam)[:, None] * kv.v,
            lambda x: szego_eval(kv.xi, x)[:, None] * kv.v,
        )

    def multiplied(self, factor: Callable[[NDArray], NDArray]) -> "HardySample":
        """Pointwise product with a bounded analytic scalar function, given as z ↦ factor(z)."""
        boundary = None
        if self.boundary_eval is not None:
            base = self.boundary_eval
            boundary = lambda x: factor(np.asarray(x, dtype=complex))[:, None] * base(x)  # noqa: E731
        axis = self.axis_eval
        return HardySample(self.dim, lambda lam: factor(1j * lam)[:, None] * axis(lam), boundary)

    def damped(self, t: float) -> "HardySample":
        """The compressed shift S̃_t, which multiplies axis values by e^{−tλ}."""
        if t < 0:
            raise DomainError("damping parameter must be non-negative")
        return self.multiplied(lambda z: np.exp(1j * t * z))


def rank_one_witness() -> HardySample:
    """f(z) = ((i/(i+z))², i/(i+z)), annihilated pointwise by the rank_one_fail density."""
    def at(z):
        u = 1j / (1j + z)
        return np.stack([u**2, u], axis=-1)

    return HardySample(2, lambda lam: at(1j * lam), lambda x: at(np.asarray(x, dtype=complex)))


# ── Hankel forms ──────────────────────────────────────────────────────────────

def hankel_form_measure(mu: CarlesonMeasure, f: HardySample, g: HardySample, spec: QuadratureSpec) -> complex:
    """∫ ⟨f(iλ), ρ(λ) g(iλ)⟩ dλ + Σⱼ ⟨f(iλⱼ), Aⱼ g(iλⱼ)⟩."""
    if not f.dim == g.dim == mu.dim:
        raise DimensionMismatch(f"form dims f={f.dim} g={g.dim} measure={mu.dim}")

    def integrand(lam, rho):
        return np.einsum("ni,nij,nj->n", np.conj(f.axis_eval(lam)), rho, g.axis_eval(lam))

    ac = density_integral(mu, integrand, spec)

    def term(loc, w):
        lam = np.array([loc])
        return np.conj(f.axis_eval(lam)[0]) @ w @ g.axis_eval(lam)[0]

    pp = atom_sum(mu, term, ())
    return complex(ac + pp)


def hankel_form_symbol(h: Symbol, f: KernelVector, g: KernelVector, spec: QuadratureSpec) -> complex:
    """⟨Q_z v, M_h R Q_ξ w⟩ = ∫ conj(Q_z(x))·⟨v, h(x)w⟩·Q_ξ(−x) dx."""
    if not f.dim == g.dim == h.dim:
        raise DimensionMismatch(f"form dims f={f.dim} g={g.dim} symbol={h.dim}")

    def integrand(x):
        pairing = np.einsum("i,nij,j->n", np.conj(f.v), h.values(x), g.v)
        return np.conj(szego_eval(f.xi, x)) * pairing * szego_eval(g.xi, -x)

    return complex(integrate_realline(integrand, spec, (0.0,)).value)


def hankel_form(source: CarlesonMeasure | Symbol, f: KernelVector, g: KernelVector, spec: QuadratureSpec) -> complex:
    if isinstance(source, Symbol):
        return hankel_form_symbol(source, f, g, spec)
    return hankel_form_measure(source, HardySample.from_kernel(f), HardySample.from_kernel(g), spec)


def default_sample_pairs(dim: int, n: int = 12, seed: int = 0) -> list[tuple[KernelVector, KernelVector]]:
    """Seeded kernel pairs, half on the imaginary axis and half at generic points of ℂ₊."""
    rng = np.random.default_rng(seed)

    def point(k: int) -> complex:
        if k % 2 == 0:
            return complex(0.0, float(np.exp(rng.uniform(np.log(0.2), np.log(5.0)))))
        return complex(rng.uniform(-3.0, 3.0), rng.uniform(0.3, 3.0))

    def vector() -> NDArray:
        v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
        return v / np.linalg.norm(v)

    return [(KernelVector(point(k), vector()), KernelVector(point(k + 1), vector())) for k in range(n)]


def verify_symbol(mu: CarlesonMeasure, h: Symbol, samples: Sequence[tuple[KernelVector, KernelVector]],
                  spec: QuadratureSpec) -> float:
    """max over sample pairs of |symbol-side form − measure-side form|."""
    if not samples:
        raise ValueError("verify_symbol needs at least one sample pair")
    worst = 0.0
    for f, g in samples:
        gap = abs(hankel_form_symbol(h, f, g, spec) - hankel_form(mu, f, g, spec))
        worst = max(worst, gap)
    log.debug("verify %s: max form gap %.3e over %d pairs", h.name, worst, len(samples))
    return worst


# ── Gram compressions ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class GramReport:
    matrix: NDArray = field(compare=False)
    min_eig: float
    max_eig: float
    points: tuple[KernelVector, ...]


def as_kernel_points(xis: Sequence[complex], dim: int) -> list[KernelVector]:
    """Each point paired with every standard basis vector, point-major."""
    eye = np.eye(dim)
    return [KernelVector(complex(xi), eye[k]) for xi in xis for k in range(dim)]


def default_gram_points(dim: int, n_axis: int = 4, generic: bool = True) -> list[KernelVector]:
    """iλ with λ log-spaced in [0.1, 10], then 1+i and −2+0.5i, each paired with every basis vector."""
    xis = [1j * lam for lam in np.geomspace(0.1, 10.0, n_axis)]
    if generic:
        xis += [1 + 1j, -2 + 0.5j]
    return as_kernel_points(xis, dim)


def _stack(points: Sequence[KernelVector]) -> tuple[NDArray, NDArray]:
    xis = np.array([p.xi for p in points])
    vs = np.stack([p.v for p in points], axis=1)  # (d, m)
    return xis, vs


def _measure_gram(mu: CarlesonMeasure, points: Sequence[KernelVector], spec: QuadratureSpec) -> NDArray:
    xis, vs = _stack(points)
    vh = np.conj(vs).T

    def block(lam, rho):
        q = szego_eval(xis[None, :], 1j * lam[:, None])  # (n, m)
        inner = np.einsum("ai,nij,jb->nab", vh, rho, vs)
        return np.conj(q)[:, :, None] * q[:, None, :] * inner

    ac = density_integral(mu, block, spec)

    def term(loc, w):
        q = szego_eval(xis, 1j * loc)
        return np.conj(q)[:, None] * q[None, :] * (vh @ w @ vs)

    return ac + atom_sum(mu, term, (len(points), len(points)))


def _symbol_gram(h: Symbol, points: Sequence[KernelVector], spec: QuadratureSpec) -> NDArray:
    xis, vs = _stack(points)
    vh = np.conj(vs).T

    def block(x):
        left = np.conj(szego_eval(xis[None, :], x[:, None]))
        right = szego_eval(xis[None, :], -x[:, None])
        inner = np.einsum("ai,nij,jb->nab", vh, h.values(x), vs)
        return left[:, :, None] * right[:, None, :] * inner

    return integrate_realline(block, spec, (0.0,)).value


def gram_matrix(source: CarlesonMeasure | Symbol, points: Sequence[KernelVector], spec: QuadratureSpec) -> GramReport:
    """G_jk = form(points[j], points[k]), Hermitised, with its spectrum."""
    if not points:
        raise ValueError("gram_matrix needs at least one point")
    g = _symbol_gram(source, points, spec) if isinstance(source, Symbol) else _measure_gram(source, points, spec)
    g = 0.5 * (g + g.conj().T)
    eig = hermitian_spectrum(g)
    return GramReport(g, float(eig[0]), float(eig[-1]), tuple(points))


def kernel_gram(points: Sequence[KernelVector]) -> NDArray:
    """Reproducing-kernel Gram K_jk = Q_{ξ_k}(ξ_j)·⟨v_j, v_k⟩."""
    xis, vs = _stack(points)
    k = szego_eval(xis[None, :], xis[:, None]) * (np.conj(vs).T @ vs)
    return 0.5 * (k + k.conj().T)


def norm_lower_bound(mu: CarlesonMeasure, points: Sequence[KernelVector], spec: QuadratureSpec) -> float:
    """Largest θ with G c = θ K c; a lower bound for the Hankel operator norm."""
    k = kernel_gram(points)
    cond = np.linalg.cond(k)
    if not np.isfinite(cond) or cond > KERNEL_COND_LIMIT:
        raise SingularGram(f"kernel Gram condition number {cond:.3e} exceeds {KERNEL_COND_LIMIT:.0e}")
    g = gram_matrix(mu, points, spec).matrix
    theta = scipy.linalg.eigh(g, k, eigvals_only=True)
    return float(max(theta[-1], 0.0))


# ── Strict positivity ─────────────────────────────────────────────────────────

class PositivityVerdict(StrEnum):
    CERTIFIED_POSITIVE = "certified_positive_at_resolution"
    CERTIFIED_NOT_STRICT = "certified_not_strict"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class PositivityReport:
    verdict: PositivityVerdict
    evidence: dict


def blaschke_witness(nodes: Sequence[float], z):
    """B(z) = Π_{λ≤1} (z−iλ)/(z+iλ) · Π_{λ>1} −(z−iλ)/(z+iλ)."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for lam in nodes:
        if not lam > 0:
            raise DomainError(f"Blaschke node {lam} is not positive")
        factor = (z - 1j * lam) / (z + 1j * lam)
        out = out * (factor if lam <= 1.0 else -factor)
    return out


def blaschke_sample(mu: CarlesonMeasure) -> HardySample:
    """B·Q_i·e₁ with zeros at every atom of μ."""
    nodes = [a.location for a in mu.atoms]
    base = HardySample.from_kernel(KernelVector(1j, np.eye(mu.dim)[0]))
    return base.multiplied(lambda z: blaschke_witness(nodes, z))


def known_witness(mu: CarlesonMeasure) -> HardySample | None:
    """A nonzero H² function on which the form of μ is known to vanish, when one is registered."""
    if mu.is_pure_point and mu.atoms:
        return blaschke_sample(mu)
    if mu.density is not None and mu.density.name == "rank_one_fail" and not mu.atoms:
        return rank_one_witness()
    return None


def condition_fails_witness(spec: QuadratureSpec) -> float:
    """Form value of the rank_one_fail measure on its registered witness."""
    w = rank_one_witness()
    return abs(hankel_form_measure(builtin_measure("rank_one_fail", (), 2), w, w, spec))


def _positive_run(mins: NDArray, tol: float) -> tuple[int, int] | None:
    """Longest run of consecutive grid points whose min eigenvalue exceeds tol."""
    best, start = None, None
    for k, ok in enumerate(np.append(mins > tol, False)):
        if ok and start is None:
            start = k
        elif not ok and start is not None:
            if k - start >= 2 and (best is None or k - start > best[1] - best[0]):
                best = (start, k)
            start = None
    return best


def strict_positivity_report(mu: CarlesonMeasure, grid: Sequence[float], spec: QuadratureSpec,
                             tol: float = 1e-8, witness_tol: float = 1e-9) -> PositivityReport:
    """Strictness verdict at grid resolution.

    A strictly positive density on a grid sub-interval certifies H_μ > 0. A
    finitely supported measure is never strict. The divergent-sum criterion
    cannot fire for finitely many atoms, so it is never used.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0):
        raise DomainError("positivity grid must lie in (0, inf)")
    evidence: dict = {}

    if mu.density is not None:
        mins = density_min_eigenvalues(mu, grid)
        evidence["density_min_eig"] = float(mins.min())
        evidence["density_max_min_eig"] = float(mins.max())
        run = _positive_run(mins, tol)
        if run is not None:
            evidence["positive_interval"] = [float(grid[run[0]]), float(grid[run[1] - 1])]
            return PositivityReport(PositivityVerdict.CERTIFIED_POSITIVE, evidence)

    if mu.is_pure_point:
        evidence["atom_sum"] = float(sum(a.location / (a.location + 1.0) ** 2 for a in mu.atoms))
        if mu.atoms:
            w = blaschke_sample(mu)
            evidence["witness_form"] = abs(hankel_form_measure(mu, w, w, spec))
        return PositivityReport(PositivityVerdict.CERTIFIED_NOT_STRICT, evidence)

    evidence["gram_min_eig"] = gram_matrix(mu, default_gram_points(mu.dim), spec).min_eig
    witness = known_witness(mu)
    if witness is not None:
        value = abs(hankel_form_measure(mu, witness, witness, spec))
        evidence["witness_form"] = value
        evidence["witness_vanishes"] = bool(value <= witness_tol)
    return PositivityReport(PositivityVerdict.INCONCLUSIVE, evidence)

