"""Exception types shared across the package."""


class GroupNormsError(Exception):
    """Base class for all errors raised by this package."""


class ResourceExceeded(GroupNormsError):
    """A size cap (cosets, support, states, subsets) was hit before completion."""


class NotApplicable(GroupNormsError):
    """The requested formula does not apply to this input."""


class InvalidHomomorphism(GroupNormsError):
    """Generator images do not kill every defining relator of the source."""


class CertificationFailed(GroupNormsError):
    """A certificate could not be produced; ``witness`` names the offending word."""

    def __init__(self, message, witness=None, witnesses=None):
        super().__init__(message)
        self.witness = witness
        self.witnesses = list(witnesses or ([witness] if witness is not None else []))


class InvariantViolated(GroupNormsError):
    """An exact invariant that must hold by theory failed on computed data."""

    def __init__(self, invariant: str, detail: str = ""):
        super().__init__(f"{invariant}: {detail}" if detail else invariant)
        self.invariant = invariant


class ConfigError(GroupNormsError):
    """Malformed configuration, group file or expression."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 source: str | None = None):
        where = ""
        if source is not None:
            where += source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line
        self.column = column
        self.source = source
