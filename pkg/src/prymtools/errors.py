class PrymError(Exception):
    """Base class for every failure the toolkit reports to its callers."""

    exit_code = 1
    error_code = "error"


class InputFormatError(PrymError):
    error_code = "input"


class DisconnectedGraphError(PrymError):
    error_code = "disconnected"

    def __init__(self, components: list[frozenset[int]]) -> None:
        self.components = components
        listed = ", ".join(
            "{" + ", ".join(str(v) for v in sorted(component)) + "}"
            for component in components
        )
        super().__init__(f"graph is disconnected, components: {listed}")


class InvalidCoverError(PrymError):
    error_code = "cover"


class DomainError(PrymError):
    error_code = "domain"


class LoopyModelError(DomainError):
    error_code = "loopy"


class NonGenericTargetError(DomainError):
    error_code = "non_generic"

    def __init__(self, message: str = "non-generic target, resample") -> None:
        super().__init__(message)


class ConsistencyError(PrymError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 2
    error_code = "consistency"
