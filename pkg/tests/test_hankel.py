import numpy as np
import pytest

from errors import DimensionMismatch, DomainError, SingularGram
from hankel import (
    HardySample,
    KernelVector,
    PositivityVerdict,
    as_kernel_points,
    blaschke_witness,
    condition_fails_witness,
    default_gram_points,
    default_sample_pairs,
    gram_matrix,
    hankel_form,
    hankel_form_measure,
    kernel_gram,
    known_witness,
    norm_lower_bound,
    strict_positivity_report,
    szego_eval,
    verify_symbol,
)
from measure import CarlesonMeasure, builtin_measure
from numerics import log_grid
from symbol import example_beta_closed, i_sgn, imaginary_part_symbol

POSITIVITY_GRID = log_grid(1e-3, 1e3, 64)


def test_szego_kernel_reproduces_itself():
    xi = 0.5 + 2.0j
    assert szego_eval(xi, xi) == pytest.approx(1.0 / (4.0 * np.pi * xi.imag))


def test_kernel_vector_validation():
    with pytest.raises(DomainError):
        KernelVector(1.0, [1.0])
    with pytest.raises(DomainError):
        KernelVector(1j, [0.0, 0.0])


def test_sample_pairs_are_seeded():
    a = default_sample_pairs(2, 6, seed=7)
    b = default_sample_pairs(2, 6, seed=7)
    assert [(f.xi, g.xi) for f, g in a] == [(f.xi, g.xi) for f, g in b]
    assert all(f.xi.imag > 0 and g.xi.imag > 0 for f, g in a)


def test_verify_lebesgue2_against_i_sgn(spec, lebesgue2):
    assert verify_symbol(lebesgue2, i_sgn(1), default_sample_pairs(1, 12, 0), spec) <= 1e-6


@pytest.mark.parametrize("t", [0.5, 1.0])
def test_verify_example_against_closed_symbol(spec, t):
    mu = builtin_measure("example_t", (t,), 4)
    assert verify_symbol(mu, example_beta_closed(t), default_sample_pairs(4, 12, 0), spec) <= 1e-6


def test_verify_atom_against_imaginary_part(spec, single_atom):
    h = imaginary_part_symbol(single_atom, spec)
    assert verify_symbol(single_atom, h, default_sample_pairs(1, 12, 0), spec) <= 1e-6


def test_verify_detects_wrong_symbol(spec, lebesgue2):
    assert verify_symbol(lebesgue2, i_sgn(1).negated(), default_sample_pairs(1, 4, 0), spec) > 1e-3


def test_form_dimension_mismatch(spec, lebesgue2):
    f = KernelVector(1j, [1.0, 0.0])
    with pytest.raises(DimensionMismatch):
        hankel_form(lebesgue2, f, f, spec)


def test_gram_measure_and_symbol_sides_agree(spec, lebesgue2):
    points = default_gram_points(1)
    g_mu = gram_matrix(lebesgue2, points, spec)
    g_h = gram_matrix(i_sgn(1), points, spec)
    assert np.allclose(g_mu.matrix, g_h.matrix, atol=1e-8)
    assert g_mu.min_eig > 1e-8


def test_kernel_gram_is_positive():
    k = kernel_gram(default_gram_points(2))
    assert np.linalg.eigvalsh(k).min() > 0


def test_norm_lower_bound_below_symbol_norm(spec, lebesgue2):
    bound = norm_lower_bound(lebesgue2, default_gram_points(1), spec)
    assert 0.0 < bound <= 1.0 + 1e-6


def test_norm_lower_bound_singular_kernel_gram(spec, lebesgue2):
    with pytest.raises(SingularGram):
        norm_lower_bound(lebesgue2, as_kernel_points([1j, 1j], 1), spec)


def test_blaschke_witness_zeros_and_modulus():
    nodes = [0.5, 2.0]
    assert np.allclose(blaschke_witness(nodes, np.array([0.5j, 2.0j])), 0.0)
    xs = np.linspace(-5.0, 5.0, 11)
    assert np.allclose(np.abs(blaschke_witness(nodes, xs)), 1.0)
    with pytest.raises(DomainError):
        blaschke_witness([-1.0], 1j)


@pytest.mark.parametrize(
    ("name", "params", "dim"),
    [("lebesgue2", (), 1), ("example_t", (0.34,), 4), ("example_t", (0.5,), 4), ("example_t", (1.0,), 4)],
)
def test_strictly_positive_densities(spec, name, params, dim):
    rep = strict_positivity_report(builtin_measure(name, params, dim), POSITIVITY_GRID, spec)
    assert rep.verdict == PositivityVerdict.CERTIFIED_POSITIVE
    assert rep.evidence["density_max_min_eig"] > 0


def test_single_atom_is_not_strict(spec, single_atom):
    rep = strict_positivity_report(single_atom, POSITIVITY_GRID, spec)
    assert rep.verdict == PositivityVerdict.CERTIFIED_NOT_STRICT
    assert rep.evidence["witness_form"] <= 1e-9


def test_rank_one_density_has_vanishing_witness(spec):
    mu = builtin_measure("rank_one_fail", (), 2)
    rep = strict_positivity_report(mu, POSITIVITY_GRID, spec)
    assert rep.verdict == PositivityVerdict.INCONCLUSIVE
    assert rep.evidence["witness_vanishes"]
    assert condition_fails_witness(spec) <= 1e-9


def test_known_witness_registry(lebesgue2, single_atom):
    assert known_witness(lebesgue2) is None
    assert isinstance(known_witness(single_atom), HardySample)


def test_damping_shrinks_the_form(spec, lebesgue2):
    f = HardySample.from_kernel(KernelVector(1j, [1.0]))
    full = hankel_form_measure(lebesgue2, f, f, spec).real
    damped = hankel_form_measure(lebesgue2, f.damped(1.0), f.damped(1.0), spec).real
    assert 0.0 < damped < full


def test_szego_kernel_values():
    assert szego_eval(3j, 2j) == pytest.approx(1.0 / (10.0 * np.pi))
    xi, x = 1 + 1j, 0.5
    assert szego_eval(xi, -x) == pytest.approx(np.conj(szego_eval(-np.conj(xi), x)))


FORM_MEASURES = [("example_t", (0.5,), 4), ("lebesgue2", (), 1), ("atoms", (1.0, 3.0), 1)]


@pytest.mark.parametrize(("name", "params", "dim"), FORM_MEASURES)
def test_form_is_hermitian(spec, name, params, dim):
    mu = builtin_measure(name, params, dim)
    for f, g in default_sample_pairs(dim, 5, seed=2):
        fs, gs = HardySample.from_kernel(f), HardySample.from_kernel(g)
        forward = hankel_form_measure(mu, fs, gs, spec)
        backward = hankel_form_measure(mu, gs, fs, spec)
        assert abs(forward - np.conj(backward)) <= 1e-12


@pytest.mark.parametrize(("name", "params", "dim"), FORM_MEASURES)
def test_form_intertwines_damping(spec, name, params, dim):
    mu = builtin_measure(name, params, dim)
    for f, g in default_sample_pairs(dim, 5, seed=3):
        fs, gs = HardySample.from_kernel(f), HardySample.from_kernel(g)
        left = hankel_form_measure(mu, fs.damped(0.7), gs, spec)
        right = hankel_form_measure(mu, fs, gs.damped(0.7), spec)
        assert abs(left - right) <= 1e-12


def test_norm_lower_bound_single_point_lebesgue2(spec, lebesgue2):
    bound = norm_lower_bound(lebesgue2, [KernelVector(1j, [1.0])], spec)
    assert bound == pytest.approx(2.0 / np.pi, rel=1e-9)


def test_norm_lower_bound_of_zero_measure(spec):
    assert norm_lower_bound(CarlesonMeasure(2), default_gram_points(2), spec) == 0.0


@pytest.mark.parametrize(("locations", "dim", "rank"), [((1.0,), 1, 1), ((1.0,), 2, 2), ((0.5, 2.0), 1, 2)])
def test_atom_gram_rank_is_bounded(spec, locations, dim, rank):
    mu = builtin_measure("atoms", locations, dim)
    rep = gram_matrix(mu, default_gram_points(dim), spec)
    assert len(rep.points) > rank
    assert np.linalg.matrix_rank(rep.matrix, tol=1e-9 * rep.max_eig) == rank
    assert abs(rep.min_eig) <= 1e-12 * rep.max_eig


def test_default_gram_points_are_point_major():
    points = default_gram_points(2, n_axis=2, generic=False)
    assert points == as_kernel_points([0.1j, 10.0j], 2)
    assert [p.xi for p in points] == [0.1j, 0.1j, 10.0j, 10.0j]
    assert [int(np.argmax(np.abs(p.v))) for p in points] == [0, 1, 0, 1]
