"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input lies outside the domain where a formula is defined."""


class BracketError(DomainError):
    """A root search interval does not contain a sign change."""


class ResourceError(RuntimeError):
    """A brute-force enumeration was asked to exceed its size cap."""
