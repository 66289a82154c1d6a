"""Place a reflection-positive quadruple in the hierarchy invalid / rp_only / standard / Borchers-type."""
import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum

import numpy as np

from errors import HankelLabError, NotProjection
from hankel import KernelVector, default_gram_points, gram_matrix
from measure import CarlesonMeasure
from numerics import QuadratureSpec, as_matrix, is_projection
from symbol import Symbol, check_flat, check_sharp, check_unitary, i_sgn, projection_symmetry_check

log = logging.getLogger(__name__)


class Verdict(StrEnum):
    INVALID_SYMBOL = "invalid_symbol"
    RP_ONLY = "rp_only"
    STANDARD = "standard"
    BORCHERS = "borchers"


@dataclass(frozen=True)
class Evidence:
    name: str
    value: float
    threshold: float
    passed: bool


@dataclass(frozen=True)
class ComplexStructureCheck:
    max_square_defect: float
    borchers_defect: float | None
    tol: float

    @property
    def passed(self) -> bool:
        ok = self.max_square_defect <= self.tol
        if self.borchers_defect is not None:
            ok = ok and self.borchers_defect <= self.tol
        return ok


@dataclass(frozen=True)
class Classification:
    """Verdict at grid resolution with the evidence chain that produced it."""

    verdict: Verdict
    evidence: tuple[Evidence, ...]
    complex_structure: Symbol | None = field(default=None, compare=False)
    complex_check: ComplexStructureCheck | None = None

    @property
    def is_standard(self) -> bool:
        return self.verdict in {Verdict.STANDARD, Verdict.BORCHERS}

    @property
    def is_borchers(self) -> bool:
        return self.verdict == Verdict.BORCHERS

    def evidence_named(self, name: str) -> Evidence | None:
        return next((e for e in self.evidence if e.name == name), None)


def _require_projection(p, dim: int):
    p = as_matrix(p)
    if p.shape != (dim, dim) or not is_projection(p, 1e-12):
        raise NotProjection("classification needs an orthogonal projection of the symbol's dimension")
    return p


def induced_complex_structure(h: Symbol, p, x_grid: Sequence[float], tol: float,
                              borchers: bool = False) -> tuple[Symbol, ComplexStructureCheck]:
    """I(x) = h(x)(2p−1), with the defect of I² = −1 and, for Borchers verdicts, of I = i·sgn·(2p−1)."""
    p = _require_projection(p, h.dim)
    s = 2.0 * p - np.eye(h.dim)
    structure = Symbol(f"I[{h.name}]", h.dim, lambda xs: h.evaluator(xs) @ s, h.params)

    xs = np.asarray(x_grid, dtype=float)
    vals = structure.values(xs)
    square = max(float(np.linalg.norm(v @ v + np.eye(h.dim), 2)) for v in vals)
    borchers_defect = None
    if borchers:
        target = 1j * np.sign(xs)[:, None, None] * s
        borchers_defect = max(float(np.linalg.norm(d, 2)) for d in vals - target)
    return structure, ComplexStructureCheck(square, borchers_defect, tol)


def _gram_min_eig(h: Symbol, mu: CarlesonMeasure | None, points: Sequence[KernelVector] | None,
                  spec: QuadratureSpec) -> float:
    pts = list(points) if points is not None else default_gram_points(h.dim)
    source = mu if mu is not None else h
    return gram_matrix(source, pts, spec).min_eig


def classify(h: Symbol, p, mu: CarlesonMeasure | None, x_grid: Sequence[float], tol: float,
             spec: QuadratureSpec, gram_points: Sequence[KernelVector] | None = None,
             complex_tol: float = 1e-9) -> Classification:
    """Gate pipeline: unitary/♯/♭ → projection symmetry and strict Gram positivity → i·sgn·1.

    Without μ the Gram matrix is built from the symbol-side form.
    """
    p = _require_projection(p, h.dim)
    evidence: list[Evidence] = []

    def add(name: str, value: float, threshold: float, passed: bool) -> bool:
        evidence.append(Evidence(name, float(value), float(threshold), bool(passed)))
        return passed

    gates = [
        ("unitary", check_unitary(h, x_grid, tol)),
        ("sharp_fixed", check_sharp(h, x_grid, tol)),
        ("flat_fixed", check_flat(h, x_grid, tol)),
    ]
    valid = all([add(name, rec.defect, tol, rec.passed) for name, rec in gates])
    if not valid:
        return _finish(Verdict.INVALID_SYMBOL, evidence)

    sym = projection_symmetry_check(h, p, x_grid, tol)
    symmetric = add("projection_symmetry", sym.defect, tol, sym.passed)
    min_eig = _gram_min_eig(h, mu, gram_points, spec)
    strictly_positive = add("gram_min_eig_strict", min_eig, tol, min_eig > tol)
    if not add("gram_min_eig_nonneg", min_eig, -tol, min_eig >= -tol):
        return _finish(Verdict.INVALID_SYMBOL, evidence)
    if not (symmetric and strictly_positive):
        return _finish(Verdict.RP_ONLY, evidence)

    xs = np.asarray(x_grid, dtype=float)
    borchers_gap = float(max(np.linalg.norm(d, 2) for d in h.values(xs) - i_sgn(h.dim).values(xs)))
    borchers = add("borchers_gap", borchers_gap, tol, borchers_gap <= tol)
    verdict = Verdict.BORCHERS if borchers else Verdict.STANDARD
    structure, check = induced_complex_structure(h, p, x_grid, complex_tol, borchers=borchers)
    add("complex_structure_square", check.max_square_defect, complex_tol, check.max_square_defect <= complex_tol)
    return _finish(verdict, evidence, structure, check)


_GATES_BY_VERDICT = {
    Verdict.INVALID_SYMBOL: (),
    Verdict.RP_ONLY: ("unitary", "sharp_fixed", "flat_fixed", "gram_min_eig_nonneg"),
    Verdict.STANDARD: ("unitary", "sharp_fixed", "flat_fixed", "gram_min_eig_nonneg", "projection_symmetry",
                       "gram_min_eig_strict"),
    Verdict.BORCHERS: ("unitary", "sharp_fixed", "flat_fixed", "gram_min_eig_nonneg", "projection_symmetry",
                       "gram_min_eig_strict", "borchers_gap"),
}


def _finish(verdict: Verdict, evidence: list[Evidence], structure: Symbol | None = None,
            check: ComplexStructureCheck | None = None) -> Classification:
    result = Classification(verdict, tuple(evidence), structure, check)
    # borchers ⇒ standard ⇒ rp_only: every gate of the weaker verdicts must have passed
    for name in _GATES_BY_VERDICT[verdict]:
        item = result.evidence_named(name)
        if item is None or not item.passed:
            raise HankelLabError(f"verdict {verdict} reached without passing gate '{name}'")
    log.debug("classified as %s with %d evidence items", verdict, len(evidence))
    return result
