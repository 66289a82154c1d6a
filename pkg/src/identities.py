"""Closed-form half-line integrals used as quadrature oracles.

Each identity is an integrand family in x with its exact value; the suite
integrates every member over ℝ₊ and compares.
"""
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from numerics import QuadratureSpec, integrate_halfline

IDENTITY_POINTS = (0.25, 0.5, 1.0, 2.0, 4.0)

_C = 2.0 / np.pi


@dataclass(frozen=True)
class Identity:
    name: str
    integrand: Callable[[NDArray, float], NDArray]
    exact: Callable[[float], float]


IDENTITIES: tuple[Identity, ...] = (
    Identity("a", lambda lam, x: _C * x / (x * x + lam**2), lambda x: 1.0),
    Identity("b", lambda lam, x: _C * x / ((x * x + lam**2) * (1 + lam**2)), lambda x: 1.0 / (1.0 + x)),
    Identity("c", lambda lam, x: _C * x / (x * x + lam**2) * lam**2 / (1 + lam**2), lambda x: x / (1.0 + x)),
    Identity(
        "d",
        lambda lam, x: _C * lam * (1 - x * x) / ((x * x + lam**2) * (1 + lam**2)) * lam / (1 + lam**2),
        lambda x: 1.0 / (1.0 + x) - 0.5,
    ),
    Identity(
        "e",
        lambda lam, x: _C * (lam - 1) / (np.sqrt(lam) * (x * x + lam**2)),
        lambda x: np.sqrt(2 * x) * (x - 1) / x**2,
    ),
    Identity(
        "f",
        lambda lam, x: _C * lam / (x * x + lam**2) * np.sqrt(lam) * (lam - 1) / (1 + lam**2),
        lambda x: np.sqrt(2.0) * np.sqrt(x) / (1.0 + x),
    ),
    Identity(
        "g",
        lambda lam, x: _C * lam * (1 - x * x) / ((x * x + lam**2) * (1 + lam**2)) * np.sqrt(lam) * (lam - 1) / (1 + lam**2),
        lambda x: np.sqrt(2.0) * (np.sqrt(x) / (1.0 + x) - 0.5),
    ),
    Identity("h", lambda lam, x: lam * (x * x - 1) / ((lam**2 + x * x) * (lam**2 + 1)), lambda x: float(np.log(x))),
)


@dataclass(frozen=True)
class IdentityResult:
    name: str
    x: float
    value: float
    exact: float
    error: float
    relative: bool


def check_identity(identity: Identity, x: float, spec: QuadratureSpec) -> IdentityResult:
    """Relative error against the exact value, absolute when the exact value is 0."""
    value = integrate_halfline(lambda lam: identity.integrand(lam, x), spec, (x,)).value
    value = float(np.real(value))
    exact = float(identity.exact(x))
    relative = abs(exact) > 1e-14
    error = abs(value - exact) / abs(exact) if relative else abs(value - exact)
    return IdentityResult(identity.name, x, value, exact, error, relative)


def run_identity_suite(spec: QuadratureSpec, xs: Sequence[float] = IDENTITY_POINTS) -> list[IdentityResult]:
    return [check_identity(identity, float(x), spec) for identity in IDENTITIES for x in xs]
