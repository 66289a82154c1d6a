import numpy as np
import pytest

from errors import DomainError
from measure import builtin_measure
from numerics import log_grid, spectral_norm
from pick import (
    kappa_bound_check,
    kappa_symmetry_report,
    lebesgue2_pick,
    on_excluded_ray,
    pick_boundary,
    pick_consistency,
    pick_evaluation,
    pick_n,
    z_grid,
)


def _random_upper(rng, n):
    r = np.exp(rng.uniform(np.log(0.1), np.log(10.0), n))
    phi = rng.uniform(0.05, np.pi - 0.05, n)
    return r * np.exp(1j * phi)


def test_lebesgue2_closed_form_upper_half_plane(spec, lebesgue2, rng):
    for z in _random_upper(rng, 50):
        assert spectral_norm(pick_n(lebesgue2, z, spec) - lebesgue2_pick(z)) <= 1e-8


def test_lebesgue2_closed_form_real_axis(spec, lebesgue2, rng):
    xs = np.concatenate([-np.exp(rng.uniform(-3, 3, 10)), np.exp(rng.uniform(-3, 3, 10))])
    for x in xs:
        assert spectral_norm(pick_n(lebesgue2, x, spec) - lebesgue2_pick(x)) <= 1e-8


@pytest.mark.parametrize("x", [-5.0, -0.2, 0.2, 5.0])
def test_lebesgue2_boundary_values(spec, lebesgue2, x):
    r, i = pick_boundary(lebesgue2, x, spec)
    assert abs(r[0, 0]) <= 1e-9
    assert i[0, 0] == pytest.approx(np.sign(x), abs=1e-9)


def test_atom_boundary_values(spec, single_atom):
    x = 0.7
    r, i = pick_boundary(single_atom, x, spec)
    assert i[0, 0] == pytest.approx(x / (1.0 + x * x) / np.pi)
    assert r[0, 0] == pytest.approx((1.0 - x * x) / ((1.0 + x * x) * 2.0) / np.pi)


def test_excluded_ray(spec, lebesgue2):
    assert on_excluded_ray(-2j)
    assert on_excluded_ray(0)
    assert not on_excluded_ray(2j)
    with pytest.raises(DomainError):
        pick_n(lebesgue2, -0.5j, spec)
    with pytest.raises(DomainError):
        pick_boundary(lebesgue2, 0.0, spec)


def test_evaluation_parts_are_hermitian(spec):
    mu = builtin_measure("block_chi", (), 2)
    ev = pick_evaluation(mu, 0.3 + 1.2j, spec)
    assert np.allclose(ev.r_value, ev.r_value.conj().T)
    assert np.allclose(ev.i_value, ev.i_value.conj().T)
    assert np.allclose(ev.r_value + 1j * ev.i_value, ev.n_value)


@pytest.mark.parametrize(
    ("name", "params", "dim"),
    [("lebesgue2", (), 1), ("example_t", (0.5,), 4), ("rank_one_fail", (), 2), ("block_chi", (), 2)],
)
def test_symmetry_on_builtins(spec, name, params, dim):
    mu = builtin_measure(name, params, dim)
    rep = kappa_symmetry_report(mu, log_grid(1e-3, 1e3, 12), spec)
    assert rep.max_even_defect <= 1e-9
    assert rep.max_odd_defect <= 1e-9
    assert rep.min_signed_eigenvalue >= -1e-9


@pytest.mark.parametrize(
    ("name", "params", "dim"),
    [
        ("lebesgue2", (), 1),
        ("example_t", (0.5,), 4),
        ("example_t", (1.0,), 4),
        ("rank_one_fail", (), 2),
        ("block_chi", (), 2),
        ("atoms", (1.0,), 1),
        ("atoms", (0.5, 2.0), 2),
    ],
)
def test_growth_bounds_with_unit_alpha(spec, name, params, dim):
    mu = builtin_measure(name, params, dim)
    zs = z_grid(log_grid(1e-3, 1e3, 7), 9)
    assert any(z.imag == 0 for z in zs) and any(z.imag > 0 for z in zs)
    rep = kappa_bound_check(mu, 1.0, zs, spec)
    assert rep.passed, rep


def test_growth_bounds_reject_lower_half_plane(spec, lebesgue2):
    with pytest.raises(DomainError):
        kappa_bound_check(lebesgue2, 1.0, [1.0 - 1.0j], spec)
    with pytest.raises(DomainError):
        kappa_bound_check(lebesgue2, 1.0, [0.0], spec)


def test_z_grid_skips_excluded_ray():
    zs = z_grid([1.0], 5, -np.pi, np.pi)
    assert not any(on_excluded_ray(z) for z in zs)
    assert len(zs) == 4


def test_two_boundary_routes_agree(spec):
    mu = builtin_measure("example_t", (0.75,), 4)
    for x in (-2.0, 0.3, 4.0):
        assert pick_consistency(mu, x, spec) <= 1e-8
