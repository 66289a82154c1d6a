import numpy as np
import pytest

from classify import Verdict, classify, induced_complex_structure
from errors import NotProjection
from measure import builtin_measure
from numerics import symmetric_log_grid
from symbol import block_projection, example_beta_closed, i_sgn

GRID = symmetric_log_grid(1e-3, 1e3, 12)
TOL = 1e-8


@pytest.mark.parametrize("p", [np.diag([1.0, 0.0]), np.eye(2), np.zeros((2, 2))])
def test_i_sgn_is_borchers_for_any_projection(spec, p):
    result = classify(i_sgn(2), p, None, GRID, TOL, spec)
    assert result.verdict == Verdict.BORCHERS
    assert result.is_standard
    assert result.complex_check.passed


def _random_projection(rng, dim: int) -> np.ndarray:
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)))
    cols = q[:, : int(rng.integers(0, dim + 1))]
    return cols @ cols.T


def test_i_sgn_is_borchers_for_random_projections(spec):
    rng = np.random.default_rng(2024)
    for _ in range(10):
        p = _random_projection(rng, 4)
        assert classify(i_sgn(4), p, None, GRID, TOL, spec).verdict == Verdict.BORCHERS


@pytest.mark.parametrize("t", [0.4, 0.5, 0.75])
def test_closed_example_is_standard_not_borchers(spec, t):
    mu = builtin_measure("example_t", (t,), 4)
    result = classify(example_beta_closed(t), block_projection(4, 2), mu, GRID, TOL, spec)
    assert result.verdict == Verdict.STANDARD
    assert not result.is_borchers
    assert result.evidence_named("borchers_gap").value > 1e-3
    assert result.complex_check.max_square_defect <= 1e-9


def test_closed_example_at_one_is_borchers(spec):
    mu = builtin_measure("example_t", (1.0,), 4)
    result = classify(example_beta_closed(1.0), block_projection(4, 2), mu, GRID, TOL, spec)
    assert result.verdict == Verdict.BORCHERS


@pytest.mark.parametrize("p", [np.eye(1), np.zeros((1, 1))])
@pytest.mark.parametrize("h", [i_sgn(1), i_sgn(1).negated()])
def test_scalar_symbols_never_standard_only(spec, h, p):
    assert classify(h, p, None, GRID, TOL, spec).verdict != Verdict.STANDARD


def test_negated_scalar_symbol_has_negative_form(spec):
    result = classify(i_sgn(1).negated(), np.eye(1), None, GRID, TOL, spec)
    assert result.verdict == Verdict.INVALID_SYMBOL
    assert not result.evidence_named("gram_min_eig_nonneg").passed


def test_non_unitary_symbol_is_invalid(spec):
    result = classify(i_sgn(1).shifted(0.5 * np.eye(1)), np.eye(1), None, GRID, TOL, spec)
    assert result.verdict == Verdict.INVALID_SYMBOL
    assert [e.name for e in result.evidence] == ["unitary", "sharp_fixed", "flat_fixed"]


def test_wrong_projection_gives_rp_only(spec):
    mu = builtin_measure("example_t", (0.5,), 4)
    result = classify(example_beta_closed(0.5), np.eye(4), mu, GRID, TOL, spec)
    assert result.verdict == Verdict.RP_ONLY
    assert not result.evidence_named("projection_symmetry").passed
    assert result.complex_structure is None


def test_projection_is_required(spec):
    with pytest.raises(NotProjection):
        classify(i_sgn(2), np.ones((2, 2)), None, GRID, TOL, spec)


def test_induced_complex_structure_squares_to_minus_one():
    structure, check = induced_complex_structure(example_beta_closed(0.5), block_projection(4, 2), GRID, 1e-9)
    vals = structure.values(GRID)
    assert np.allclose(vals @ vals, -np.eye(4), atol=1e-9)
    assert check.passed
    assert check.borchers_defect is None
