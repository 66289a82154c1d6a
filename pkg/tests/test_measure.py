import numpy as np
import pytest

from errors import BadParams, DimensionMismatch, UnknownDensity
from measure import (
    Atom,
    CarlesonMeasure,
    builtin_measure,
    carleson_ratio_check,
    density_min_eigenvalues,
    density_names,
    example_blocks,
    make_density,
    moment,
)
from numerics import log_grid


def test_registry_names():
    assert density_names() == ["block_chi", "example_t", "lebesgue2", "rank_one_fail"]
    with pytest.raises(UnknownDensity):
        make_density("cauchy", (), 1)


def test_dict_form_rebuilds_measure():
    mu = CarlesonMeasure(2, make_density("block_chi", (), 2), (Atom(0.5, np.diag([1.0, 2.0])),))
    back = CarlesonMeasure.from_dict(mu.to_dict())
    assert back.dim == 2
    assert back.density.name == "block_chi"
    assert back.atoms[0].location == 0.5
    assert np.allclose(back.atoms[0].weight, np.diag([1.0, 2.0]))


@pytest.mark.parametrize(
    ("atoms", "error"),
    [
        ((Atom(0.0, np.eye(1)),), BadParams),
        ((Atom(1.0, np.eye(1)), Atom(1.0, np.eye(1))), BadParams),
        ((Atom(1.0, -np.eye(1)),), BadParams),
        ((Atom(1.0, np.eye(2)),), DimensionMismatch),
    ],
)
def test_atom_validation(atoms, error):
    with pytest.raises(error):
        CarlesonMeasure(1, None, atoms)


def test_density_dimension_must_match():
    with pytest.raises(DimensionMismatch):
        CarlesonMeasure(2, make_density("lebesgue2", (), 1))


def test_example_t_admissible_range():
    with pytest.raises(BadParams):
        builtin_measure("example_t", (0.2,), 4)
    with pytest.raises(BadParams):
        builtin_measure("example_t", (0.5,), 2)
    builtin_measure("example_t", (1.0 / 3.0,), 4)


@pytest.mark.parametrize("t", [0.34, 0.5, 1.0])
def test_example_t_density_positive_on_grid(t):
    mu = builtin_measure("example_t", (t,), 4)
    assert density_min_eigenvalues(mu, log_grid(1e-3, 1e3, 64)).min() > 0


def test_example_t_at_one_is_lebesgue():
    diag, off = example_blocks(1.0, np.array([0.3, 1.0, 7.0]))
    assert np.allclose(diag, 2.0)
    assert np.allclose(off, 0.0)


def test_example_t_min_eigenvalue_at_one():
    mu = builtin_measure("example_t", (0.5,), 4)
    assert density_min_eigenvalues(mu, [1.0])[0] == pytest.approx(1.5 - np.sqrt(3.0) / 2.0, abs=1e-12)
    assert density_min_eigenvalues(mu, [1.0])[0] == pytest.approx(0.6340, abs=1e-4)


def test_moment_of_lebesgue2(spec, lebesgue2):
    val = moment(lebesgue2, lambda lam: 1.0 / (1.0 + lam**2), spec)
    assert val[0, 0] == pytest.approx(np.pi, abs=1e-9)


def test_moment_of_atoms(spec):
    mu = builtin_measure("atoms", (1.0, 3.0), 2)
    val = moment(mu, lambda lam: 1.0 / (1.0 + lam**2), spec)
    assert np.allclose(val, (0.5 + 0.1) * np.eye(2))


def test_block_chi_moment_splits_at_one(spec):
    mu = builtin_measure("block_chi", (), 2)
    val = moment(mu, lambda lam: 1.0 / (1.0 + lam**2), spec)
    assert np.allclose(val, np.diag([np.pi / 4, np.pi / 4]), atol=1e-9)


def test_moment_is_linear_in_g(spec):
    mu = CarlesonMeasure(2, make_density("block_chi", (), 2), (Atom(2.0, np.diag([0.5, 1.0])),))

    def g1(lam):
        return 1.0 / (1.0 + lam**2)

    def g2(lam):
        return lam / (1.0 + lam**2) ** 2

    combined = moment(mu, lambda lam: 3.0 * g1(lam) - 2.0j * g2(lam), spec)
    assert np.allclose(combined, 3.0 * moment(mu, g1, spec) - 2.0j * moment(mu, g2, spec), atol=1e-9)
    both = moment(mu, lambda lam: g1(lam) + g2(lam), spec)
    assert np.allclose(both, moment(mu, g1, spec) + moment(mu, g2, spec), atol=1e-9)


def test_carleson_ratios_lebesgue2(spec, lebesgue2):
    xs = [0.01, 1.0, 100.0]
    ratios = carleson_ratio_check(lebesgue2, xs, spec)
    expected = [2.0 * np.arctan(x) / x for x in xs]
    assert np.allclose(ratios.ratios_low, expected, rtol=1e-8)
    assert np.allclose(ratios.ratios_high, expected, rtol=1e-8)
    assert ratios.max_ratio_low <= 2.0


def test_carleson_ratios_reject_nonpositive_points(spec, lebesgue2):
    with pytest.raises(BadParams):
        carleson_ratio_check(lebesgue2, [0.0], spec)
