"""Dense Hermitian linear algebra and adaptive Gauss-Legendre quadrature on ℝ₊ and ℝ.

Integrands are vectorised: ``f(lam)`` receives a 1-D array of nodes and returns an
array of shape ``(len(lam), *value_shape)``. All nodes of one refinement pass are
evaluated in a single call.
"""
import logging
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from numpy.polynomial.legendre import leggauss
from numpy.typing import NDArray

from errors import DimensionMismatch, NonConvergence, NotHermitian

log = logging.getLogger(__name__)

Integrand = Callable[[NDArray], NDArray]


class HalflineMap(StrEnum):
    SPLIT_INVERSE = "split_inverse"
    RATIONAL = "rational"


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and chart choice for the adaptive integrators."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_refinements: int = 4000
    halfline_map: HalflineMap = HalflineMap.SPLIT_INVERSE
    order: int = 32

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be strictly positive")
        if self.max_refinements < 1:
            raise ValueError("max_refinements must be at least 1")
        if self.order < 2:
            raise ValueError("Gauss-Legendre order must be at least 2")
        object.__setattr__(self, "halfline_map", HalflineMap(self.halfline_map))


@dataclass(frozen=True)
class QuadratureResult:
    value: NDArray
    error: float
    panels: int
    evaluations: int


# ── Charts ────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class _Chart:
    """Change of variables u ↦ λ(u) with Jacobian dλ/du."""

    kind: str  # identity | inverse | rational
    scale: float = 1.0

    def to_lambda(self, u: NDArray) -> tuple[NDArray, NDArray]:
        if self.kind == "identity":
            return u, np.ones_like(u)
        if self.kind == "inverse":
            return self.scale / u, self.scale / u**2
        return (1.0 + u) / (1.0 - u), 2.0 / (1.0 - u) ** 2

    def from_lambda(self, lam: float) -> float:
        if self.kind == "identity":
            return lam
        if self.kind == "inverse":
            return self.scale / lam
        return (lam - 1.0) / (lam + 1.0)


def _split_segment(chart: _Chart, a: float, b: float, points: Iterable[float]) -> list[tuple[_Chart, float, float]]:
    cuts = sorted({u for u in (chart.from_lambda(p) for p in points) if a < u < b})
    edges = [a, *cuts, b]
    return [(chart, lo, hi) for lo, hi in zip(edges[:-1], edges[1:], strict=True)]


def _halfline_segments(spec: QuadratureSpec, points: Iterable[float]) -> list[tuple[_Chart, float, float]]:
    pts = [float(p) for p in points if p > 0 and np.isfinite(p)]
    if spec.halfline_map == HalflineMap.RATIONAL:
        return _split_segment(_Chart("rational"), -1.0, 1.0, pts)
    return _split_segment(_Chart("identity"), 0.0, 1.0, pts) + _split_segment(_Chart("inverse"), 0.0, 1.0, pts)


# ── Adaptive engine ───────────────────────────────────────────────────────────

@dataclass(eq=False)
class _Panel:
    chart: _Chart
    a: float
    b: float
    whole: NDArray
    estimate: NDArray | None = None
    left: NDArray | None = None
    right: NDArray | None = None
    error: float = np.inf


def _evaluate(f: Integrand, jobs: list[tuple[_Chart, float, float]], nodes: NDArray, weights: NDArray) -> list[NDArray]:
    """Gauss-Legendre values of f on every (chart, a, b) job with one integrand call."""
    lams, jacs = [], []
    for chart, a, b in jobs:
        u = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        lam, jac = chart.to_lambda(u)
        lams.append(lam)
        jacs.append(jac * 0.5 * (b - a))
    values = np.asarray(f(np.concatenate(lams)), dtype=complex)
    order = len(nodes)
    out = []
    for j, jac in enumerate(jacs):
        block = values[j * order:(j + 1) * order]
        w = (weights * jac).reshape((order,) + (1,) * (block.ndim - 1))
        out.append(np.sum(w * block, axis=0))
    return out


def _adaptive(f: Integrand, segments: list[tuple[_Chart, float, float]], spec: QuadratureSpec) -> QuadratureResult:
    nodes, weights = leggauss(spec.order)
    evaluations = 0

    wholes = _evaluate(f, segments, nodes, weights)
    evaluations += len(segments) * spec.order
    panels = [_Panel(c, a, b, w) for (c, a, b), w in zip(segments, wholes, strict=True)]
    refinements = 0

    while True:
        pending = [p for p in panels if p.estimate is None]
        if pending:
            jobs = []
            for p in pending:
                mid = 0.5 * (p.a + p.b)
                jobs += [(p.chart, p.a, mid), (p.chart, mid, p.b)]
            halves = _evaluate(f, jobs, nodes, weights)
            evaluations += len(jobs) * spec.order
            for k, p in enumerate(pending):
                left, right = halves[2 * k], halves[2 * k + 1]
                p.estimate = left + right
                p.error = float(np.max(np.abs(p.whole - p.estimate), initial=0.0))
                p.left, p.right = left, right

        panels.sort(key=lambda p: (p.chart.kind, p.a))
        total = np.sum(np.stack([p.estimate for p in panels]), axis=0)
        gap = float(sum(p.error for p in panels))
        tol = max(spec.abs_tol, spec.rel_tol * float(np.max(np.abs(total), initial=0.0)))
        if gap <= tol:
            log.debug("quadrature converged: %d panels, %d evaluations, gap %.2e", len(panels), evaluations, gap)
            return QuadratureResult(total, gap, len(panels), evaluations)

        threshold = tol / len(panels)
        worst = max(panels, key=lambda p: p.error)
        targets = [p for p in panels if p.error > threshold and _splittable(p)]
        if not targets:
            if not _splittable(worst):
                raise NonConvergence(total, gap, refinements)
            targets = [worst]
        if refinements + len(targets) > spec.max_refinements:
            raise NonConvergence(total, gap, refinements)

        keep = [p for p in panels if p not in targets]
        for p in targets:
            mid = 0.5 * (p.a + p.b)
            keep.append(_Panel(p.chart, p.a, mid, p.left))
            keep.append(_Panel(p.chart, mid, p.b, p.right))
        refinements += len(targets)
        panels = keep


def _splittable(p: _Panel) -> bool:
    mid = 0.5 * (p.a + p.b)
    return p.a < mid < p.b


# ── Public integrators ────────────────────────────────────────────────────────

def integrate_halfline(f: Integrand, spec: QuadratureSpec, points: Iterable[float] = ()) -> QuadratureResult:
    """∫_0^∞ f(λ) dλ. ``points`` are declared breakpoints (never evaluated)."""
    return _adaptive(f, _halfline_segments(spec, points), spec)


def integrate_realline(f: Integrand, spec: QuadratureSpec, points: Iterable[float] = (0.0,)) -> QuadratureResult:
    """∫_ℝ f(x) dx, folded onto ℝ₊ as ∫_0^∞ f(λ) + f(−λ) dλ.

    The fold places a breakpoint at |p| for every declared point p, so odd
    integrands cancel node by node.
    """
    def folded(lam: NDArray) -> NDArray:
        return np.asarray(f(lam), dtype=complex) + np.asarray(f(-lam), dtype=complex)

    return integrate_halfline(folded, spec, [abs(float(p)) for p in points])


def integrate_interval(f: Integrand, a: float, b: float, spec: QuadratureSpec, points: Iterable[float] = ()) -> QuadratureResult:
    if not a < b:
        raise ValueError(f"empty interval [{a}, {b}]")
    return _adaptive(f, _split_segment(_Chart("identity"), a, b, points), spec)


def integrate_tail(f: Integrand, a: float, spec: QuadratureSpec, points: Iterable[float] = ()) -> QuadratureResult:
    """∫_a^∞ f(λ) dλ through λ = a/u on u ∈ (0, 1]."""
    if a <= 0:
        raise ValueError("tail start must be positive")
    return _adaptive(f, _split_segment(_Chart("inverse", a), 0.0, 1.0, [p for p in points if p > a]), spec)


# ── Matrices ──────────────────────────────────────────────────────────────────

def as_matrix(m) -> NDArray:
    arr = np.atleast_2d(np.asarray(m, dtype=complex))
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    return arr


def _scale(m: NDArray) -> float:
    return max(1.0, float(np.max(np.abs(m), initial=0.0)))


def is_hermitian(m, tol: float = 1e-10) -> bool:
    m = as_matrix(m)
    return float(np.max(np.abs(m - m.conj().T), initial=0.0)) <= tol * _scale(m)


def hermitian_spectrum(m, tol: float = 1e-10) -> NDArray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    m = as_matrix(m)
    if not is_hermitian(m, tol):
        raise NotHermitian(f"matrix fails the Hermitian check at tolerance {tol:g}")
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def spectral_norm(m) -> float:
    """Operator norm, the square root of the top eigenvalue of M*M."""
    m = as_matrix(m)
    top = hermitian_spectrum(m.conj().T @ m)[-1]
    return float(np.sqrt(max(top, 0.0)))


def is_unitary(m, tol: float = 1e-10) -> bool:
    m = as_matrix(m)
    return spectral_norm(m @ m.conj().T - np.eye(m.shape[0])) <= tol


def is_projection(m, tol: float = 1e-12) -> bool:
    m = as_matrix(m)
    return is_hermitian(m, tol) and spectral_norm(m @ m - m) <= tol * _scale(m)


def conj_matrix(m) -> NDArray:
    """Complexification conjugation in the standard basis."""
    return np.conj(as_matrix(m))


# ── Grids ─────────────────────────────────────────────────────────────────────

def log_grid(lo: float, hi: float, n: int) -> NDArray:
    return np.geomspace(lo, hi, n)


def symmetric_log_grid(lo: float, hi: float, n: int) -> NDArray:
    """n positive log-spaced points and their mirrors, ascending, never 0."""
    pos = np.geomspace(lo, hi, n)
    return np.concatenate([-pos[::-1], pos])
