"""Matrix-valued symbols on ℝ∖{0}: the β(μ, p, C) family, the ♯/♭ involutions and closed-form built-ins."""
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np
from numpy.typing import NDArray

from errors import BadParams, DimensionMismatch, DomainError, NotProjection, UnknownSymbol
from measure import CarlesonMeasure
from numerics import QuadratureSpec, as_matrix, is_projection, spectral_norm
from pick import pick_boundary

log = logging.getLogger(__name__)

SymbolFn = Callable[[NDArray], NDArray]


class FlagState(StrEnum):
    UNKNOWN = "unknown"
    PASS = "pass"
    FAIL = "fail"


@dataclass(frozen=True)
class FlagRecord:
    """Outcome of one symbol check together with the grid and tolerance that produced it."""

    state: FlagState = FlagState.UNKNOWN
    defect: float | None = None
    tol: float | None = None
    grid_size: int = 0

    @property
    def passed(self) -> bool:
        return self.state == FlagState.PASS


@dataclass
class SymbolFlags:
    unitary_checked: FlagRecord = field(default_factory=FlagRecord)
    sharp_fixed: FlagRecord = field(default_factory=FlagRecord)
    flat_fixed: FlagRecord = field(default_factory=FlagRecord)
    projection_symmetric: FlagRecord = field(default_factory=FlagRecord)


@dataclass(frozen=True)
class Symbol:
    """A bounded d×d matrix function on ℝ∖{0}.

    ``evaluator`` is vectorised: it maps an array of n nonzero reals to an
    (n, d, d) complex array.
    """

    name: str
    dim: int
    evaluator: SymbolFn = field(repr=False, compare=False)
    params: tuple[float, ...] = ()
    flags: SymbolFlags = field(default_factory=SymbolFlags, compare=False)

    def values(self, xs) -> NDArray:
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        if np.any(xs == 0.0):
            raise DomainError(f"symbol '{self.name}' is not evaluated at x = 0")
        return np.asarray(self.evaluator(xs), dtype=complex)

    def __call__(self, x: float) -> NDArray:
        return self.values([x])[0]

    def negated(self) -> "Symbol":
        return Symbol(f"-{self.name}", self.dim, lambda xs: -self.evaluator(xs), self.params)

    def shifted(self, m) -> "Symbol":
        """x ↦ h(x) + M for a constant matrix M."""
        m = as_matrix(m)
        if m.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"shift has shape {m.shape}, symbol dim is {self.dim}")
        return Symbol(f"{self.name}+M", self.dim, lambda xs: self.evaluator(xs) + m, self.params)


def _batch_norm(ms: NDArray) -> NDArray:
    """Spectral norms of a stack of matrices."""
    gram = np.conj(np.swapaxes(ms, -1, -2)) @ ms
    top = np.linalg.eigvalsh(0.5 * (gram + np.conj(np.swapaxes(gram, -1, -2))))[..., -1]
    return np.sqrt(np.clip(top, 0.0, None))


def _max_norm(ms: NDArray) -> float:
    return float(np.max(_batch_norm(ms), initial=0.0))


def _dagger(ms: NDArray) -> NDArray:
    return np.conj(np.swapaxes(ms, -1, -2))


# ── Projections ───────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ProjectionSpec:
    """Orthogonal projection p and coupling C : (1−p)ℂᵈ → pℂᵈ stored as a d×d matrix."""

    p: NDArray = field(compare=False)
    c: NDArray = field(compare=False)

    def __post_init__(self):
        p = as_matrix(self.p)
        c = as_matrix(self.c)
        if p.shape != c.shape:
            raise DimensionMismatch(f"projection {p.shape} and coupling {c.shape} differ in shape")
        if not is_projection(p, 1e-12):
            raise NotProjection("p is not an orthogonal projection")
        q = np.eye(p.shape[0]) - p
        if float(np.max(np.abs(c - p @ c @ q), initial=0.0)) > 1e-12:
            raise BadParams("coupling C must satisfy C = pC(1-p)")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "c", c)

    @property
    def dim(self) -> int:
        return self.p.shape[0]

    @property
    def complement(self) -> NDArray:
        return np.eye(self.dim) - self.p


def block_projection(dim: int, rank: int) -> NDArray:
    """diag(1,…,1,0,…,0) with ``rank`` leading ones."""
    return np.diag([1.0] * rank + [0.0] * (dim - rank)).astype(complex)


def example_coupling(t: float) -> NDArray:
    """Coupling of the explicit example family, supported on the upper-right 2×2 block."""
    if not 0.0 <= t <= 1.0:
        raise BadParams(f"t must lie in [0, 1], got {t}")
    c = np.sqrt((1.0 - t) / 2.0)
    q = np.sqrt(1.0 - t * t)
    out = np.zeros((4, 4), dtype=complex)
    out[:2, 2:] = [[c, q / 2.0], [-q / 2.0, c]]
    return out


def example_projection(t: float) -> ProjectionSpec:
    return ProjectionSpec(block_projection(4, 2), example_coupling(t))


# ── β(μ, p, C) ────────────────────────────────────────────────────────────────

def beta_symbol(mu: CarlesonMeasure, ps: ProjectionSpec, spec: QuadratureSpec) -> Symbol:
    """β(x) = i(p𝓘p + q𝓘q) + C + p𝓡q + C* + q𝓡p with q = 1 − p.

    Boundedness of p𝓡(1−p) is not verified here; see ``off_diagonal_sup``.
    """
    if ps.dim != mu.dim:
        raise DimensionMismatch(f"projection dim {ps.dim} does not match measure dim {mu.dim}")
    p, q, c = ps.p, ps.complement, ps.c
    cache: dict[float, NDArray] = {}

    def one(x: float) -> NDArray:
        if x not in cache:
            r, i = pick_boundary(mu, x, spec)
            cache[x] = 1j * (p @ i @ p + q @ i @ q) + c + p @ r @ q + c.conj().T + q @ r @ p
        return cache[x]

    def evaluator(xs: NDArray) -> NDArray:
        return np.stack([one(float(x)) for x in xs])

    return Symbol("beta", mu.dim, evaluator)


def imaginary_part_symbol(mu: CarlesonMeasure, spec: QuadratureSpec) -> Symbol:
    """i·𝓘_μ, which is β(μ, 1, 0)."""
    eye = np.eye(mu.dim, dtype=complex)
    sym = beta_symbol(mu, ProjectionSpec(eye, np.zeros_like(eye)), spec)
    return Symbol("i_imag", mu.dim, sym.evaluator)


def off_diagonal_sup(mu: CarlesonMeasure, p, xs: Sequence[float], spec: QuadratureSpec) -> float:
    """sup over the grid of ‖p𝓡_μ(x)(1−p)‖, the empirical boundedness evidence."""
    p = as_matrix(p)
    q = np.eye(p.shape[0]) - p
    return max((spectral_norm(p @ pick_boundary(mu, x, spec)[0] @ q) for x in xs), default=0.0)


# ── Involutions and checks ────────────────────────────────────────────────────

def involutions(h: Symbol, x: float) -> tuple[NDArray, NDArray]:
    """(h^♯(x), h^♭(x)) = (conj h(−x), h(−x)*) in the standard basis."""
    if x == 0:
        raise DomainError("involutions are evaluated off x = 0")
    mirrored = h(-x)
    return np.conj(mirrored), mirrored.conj().T


def _record(h: Symbol, attr: str, defect: float, tol: float, grid_size: int) -> FlagRecord:
    rec = FlagRecord(FlagState.PASS if defect <= tol else FlagState.FAIL, defect, tol, grid_size)
    setattr(h.flags, attr, rec)
    log.debug("symbol %s: %s %s (defect %.3e, tol %.1e)", h.name, attr, rec.state, defect, tol)
    return rec


def check_unitary(h: Symbol, x_grid: Sequence[float], tol: float) -> FlagRecord:
    vals = h.values(x_grid)
    defect = _max_norm(vals @ _dagger(vals) - np.eye(h.dim))
    return _record(h, "unitary_checked", defect, tol, len(vals))


def check_sharp(h: Symbol, x_grid: Sequence[float], tol: float) -> FlagRecord:
    xs = np.asarray(x_grid, dtype=float)
    defect = _max_norm(np.conj(h.values(-xs)) - h.values(xs))
    return _record(h, "sharp_fixed", defect, tol, len(xs))


def check_flat(h: Symbol, x_grid: Sequence[float], tol: float) -> FlagRecord:
    xs = np.asarray(x_grid, dtype=float)
    defect = _max_norm(_dagger(h.values(-xs)) - h.values(xs))
    return _record(h, "flat_fixed", defect, tol, len(xs))


def projection_symmetry_check(h: Symbol, p, x_grid: Sequence[float], tol: float) -> FlagRecord:
    """h(−x) = h(x)* = −(2p−1)h(x)(2p−1) on the grid."""
    p = as_matrix(p)
    if p.shape != (h.dim, h.dim) or not is_projection(p, 1e-12):
        raise NotProjection("symmetry check needs an orthogonal projection of the symbol's dimension")
    xs = np.asarray(x_grid, dtype=float)
    vals = h.values(xs)
    adj = _dagger(vals)
    s = 2.0 * p - np.eye(h.dim)
    defect = max(_max_norm(h.values(-xs) - adj), _max_norm(adj + s @ vals @ s))
    return _record(h, "projection_symmetric", defect, tol, len(xs))


# ── Built-ins ─────────────────────────────────────────────────────────────────

def i_sgn(dim: int) -> Symbol:
    eye = np.eye(dim, dtype=complex)
    return Symbol("i_sgn", dim, lambda xs: 1j * np.sign(xs)[:, None, None] * eye)


def example_beta_closed(t: float) -> Symbol:
    """Closed form of β(μ_t, p, C_t); unitary because (t+|x|)² + 2(1−t)|x| + 1 − t² = (|x|+1)²."""
    if not 0.0 <= t <= 1.0:
        raise BadParams(f"example_beta_closed requires t in [0, 1], got {t}")
    b = np.sqrt(1.0 - t * t)

    def evaluator(xs: NDArray) -> NDArray:
        ax = np.abs(xs)
        diag = 1j * np.sign(xs) * (t + ax)
        a = np.sqrt(2.0 * (1.0 - t) * ax)
        out = np.zeros((len(xs), 4, 4), dtype=complex)
        for k in range(4):
            out[:, k, k] = diag
        out[:, 0, 2] = out[:, 2, 0] = a
        out[:, 0, 3] = out[:, 3, 0] = b
        out[:, 1, 2] = out[:, 2, 1] = -b
        out[:, 1, 3] = out[:, 3, 1] = a
        return out / (1.0 + ax)[:, None, None]

    return Symbol("example_beta_closed", 4, evaluator, (t,))


BUILTIN_SYMBOLS = ("i_sgn", "example_beta_closed")


def builtin_symbol(name: str, params: Sequence[float] = (), dim: int | None = None) -> Symbol:
    if name == "i_sgn":
        if params:
            raise BadParams("i_sgn takes no parameters")
        return i_sgn(dim or 1)
    if name == "example_beta_closed":
        if dim not in {None, 4}:
            raise BadParams(f"example_beta_closed is 4-dimensional, got dim={dim}")
        if len(params) != 1:
            raise BadParams("example_beta_closed takes exactly one parameter t")
        return example_beta_closed(float(params[0]))
    raise UnknownSymbol(f"unknown symbol '{name}' (known: {', '.join(BUILTIN_SYMBOLS)})")
