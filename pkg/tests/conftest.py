import numpy as np
import pytest

from measure import builtin_measure
from numerics import QuadratureSpec


class RecordingLogger:
    """Stands in for SCLogger: keeps (message, level) pairs."""

    def __init__(self):
        self.messages: list[tuple[str, str]] = []

    def log_message(self, message: str, level: str):
        self.messages.append((message, level))

    def at(self, level: str) -> list[str]:
        return [m for m, lvl in self.messages if lvl == level]


@pytest.fixture
def spec() -> QuadratureSpec:
    return QuadratureSpec()


@pytest.fixture
def logger() -> RecordingLogger:
    return RecordingLogger()


@pytest.fixture
def lebesgue2():
    return builtin_measure("lebesgue2", (), 1)


@pytest.fixture
def single_atom():
    return builtin_measure("atoms", (1.0,), 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
