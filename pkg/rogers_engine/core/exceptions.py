"""Core exception types shared across layers."""


class RogersEngineError(Exception):
    """Base class for every error raised by the engine."""


class DomainViolation(RogersEngineError, ValueError):
    """Raised when an input falls outside an operation's stated domain."""


class ParameterDomain(DomainViolation):
    """Raised when a family or identity parameter is inadmissible."""


class BranchDomain(DomainViolation):
    """Raised when a multivalued function is requested on its branch cut."""


class IntegerAlphaUnsupported(DomainViolation):
    """Raised when the second-kind Jacobi connection formula meets an integer alpha."""


class NonConvergent(RogersEngineError, ArithmeticError):
    """Raised when a series, product or quadrature fails to converge."""


class PoleError(RogersEngineError, ZeroDivisionError):
    """Raised when a gamma-type function is evaluated at a pole."""


class DenominatorPole(PoleError):
    """Raised when a series denominator parameter vanishes before termination."""

    def __init__(self, message: str, index: int | None = None) -> None:
        super().__init__(message)
        self.index = index


class DivisionByVanishingProduct(PoleError):
    """Raised when a q-shifted factorial in a denominator underflows the floor."""


__all__ = [
    "RogersEngineError",
    "DomainViolation",
    "ParameterDomain",
    "BranchDomain",
    "IntegerAlphaUnsupported",
    "NonConvergent",
    "PoleError",
    "DenominatorPole",
    "DivisionByVanishingProduct",
]
