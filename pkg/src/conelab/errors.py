"""Semantic exception hierarchy. Public functions raise these, never bare ValueError."""


class ConelabError(Exception):
    """Base error for this package."""


class ValidationError(ConelabError, ValueError):
    """Inputs violate a structural contract (shape, type, non-idempotent, bad frame)."""


class AlgebraMismatchError(ValidationError):
    """Operands belong to different algebras."""


class SingularElementError(ConelabError, ArithmeticError):
    """Inversion of an element with (numerically) zero eigenvalues."""


class DomainError(ConelabError, ValueError):
    """Argument outside the required cone or parameter domain."""


class FitError(ConelabError):
    """A least-squares fit is rank deficient or otherwise unusable."""


class InconsistencyError(ConelabError):
    """Supplied oracle data violates the functional equation beyond tolerance."""


class ContractError(ConelabError):
    """Two objects that must agree (shared scale parameter, shared algorithm) do not."""


class InsufficientSampleError(ConelabError, ValueError):
    """Too few samples for the requested statistical procedure."""


class ConfigError(ConelabError):
    """Malformed or incomplete run configuration."""
