"""Exception types shared by the whole package."""


class PreconditionError(ValueError):
    """An input violates a documented precondition (bad signature, bad graph, ...)."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed a configured enumeration bound."""
