"""Exception hierarchy shared by every hankel-symbol-lab module."""


class HankelLabError(RuntimeError):
    """Base class for all library errors."""


class NonConvergence(HankelLabError):
    """Adaptive quadrature ran out of refinements before meeting its tolerance."""

    def __init__(self, estimate, gap: float, refinements: int):
        self.estimate = estimate
        self.gap = gap
        self.refinements = refinements
        super().__init__(f"quadrature did not converge after {refinements} refinements (error estimate {gap:.3e})")


class NotHermitian(HankelLabError):
    pass


class NotProjection(HankelLabError):
    pass


class DomainError(HankelLabError):
    """Argument lies outside the domain of the operation (excluded ray, x = 0, ...)."""


class DimensionMismatch(HankelLabError):
    pass


class UnknownDensity(HankelLabError):
    pass


class UnknownSymbol(HankelLabError):
    pass


class BadParams(HankelLabError):
    pass


class SingularGram(HankelLabError):
    pass


class BadGridSize(HankelLabError):
    pass


class ConfigError(HankelLabError):
    """Run configuration failed validation; path names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
