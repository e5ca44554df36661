"""Exception hierarchy shared across the package."""


class ContactLociError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ContactLociError):
    """Input is outside the mathematical domain of the operation."""


class ResourceLimitError(ContactLociError):
    """An iteration cap or enumeration budget was exceeded."""


class UnsupportedDimensionError(ContactLociError):
    """The operation is only implemented for lower ambient dimension."""


class ValidationFailedError(ContactLociError):
    """A configuration failed validation; carries the violation list."""

    def __init__(self, issues):
        self.issues = list(issues)
        lines = "; ".join(str(i) for i in self.issues)
        super().__init__(f"invalid configuration: {lines}")


class NotMSeparatingError(ContactLociError):
    """The configuration is not m-separating; names one offending cell."""

    def __init__(self, m, ids, pair_mult):
        self.m = m
        self.ids = tuple(ids)
        self.pair_mult = pair_mult
        super().__init__(
            f"configuration is not {m}-separating: divisors {self.ids} meet "
            f"with multiplicity sum {pair_mult} <= {m}"
        )


class MissingCoverDataError(ContactLociError):
    """Cover homology is not combinatorially determined and was not supplied."""


class InconsistentConfigurationError(ContactLociError):
    """The combinatorial data cannot come from an actual log resolution."""


class NotNegativeDefiniteError(ContactLociError):
    """The exceptional intersection matrix is not negative definite."""
