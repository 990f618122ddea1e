"""Exception types raised across the package."""


class ContactGeoError(Exception):
    """Base class for all package errors."""


class ExprSyntaxError(ContactGeoError):
    """Syntax error while parsing an expression.

    Carries the byte offset of the offending token and a short message
    describing what was expected.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownFunctionError(ExprSyntaxError):
    pass


class ExprDomainError(ContactGeoError):
    """Evaluation left the domain of a function (log, sqrt, division)."""

    def __init__(self, message: str, subexpr: str = ""):
        self.subexpr = subexpr
        if subexpr:
            message = f"{message} in sub-expression '{subexpr}'"
        super().__init__(message)


class SingularMatrixError(ContactGeoError):
    pass


class DependentFrameError(ContactGeoError):
    pass


class DomainBoxError(ContactGeoError):
    """A sample point lies outside the chart's sampling box."""


class StructureInvariantError(ContactGeoError):
    """A structure violates its defining algebraic invariants."""

    def __init__(self, message: str, violations=None):
        super().__init__(message)
        self.violations = violations or []


class LeeFormUndefinedError(ContactGeoError):
    pass


class UnknownIdentityError(ContactGeoError):
    def __init__(self, identity_id: str, valid_ids):
        super().__init__(
            f"unknown identity id '{identity_id}'; valid ids: {', '.join(valid_ids)}"
        )
        self.valid_ids = tuple(valid_ids)


class UnknownCatalogError(ContactGeoError):
    def __init__(self, name: str, valid_names):
        super().__init__(
            f"unknown catalog name '{name}'; valid names: {', '.join(valid_names)}"
        )


class InputFormatError(ContactGeoError):
    """Malformed JSON input document."""
