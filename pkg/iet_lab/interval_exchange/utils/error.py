from __future__ import annotations


class UserException(Exception):
    pass


class ConfigError(UserException):
    """

    Raised for unreadable or invalid experiment configurations.
    Carries the offending line (INI input) or field path (validation) when known.

    """

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field

        location = ""
        if line is not None:
            location += " (line " + str(line) + ")"
        if field is not None:
            location += " (field '" + field + "')"

        super().__init__(message + location)


class BadLiteral(UserException):
    pass


class BadLengths(UserException):
    pass


class BadPermutation(UserException):
    pass


class IncompatibleField(UserException):
    pass


class NotIrrational(UserException):
    pass


class RationalInput(UserException):
    pass


class DomainError(UserException):
    pass


class BudgetExhausted(UserException):
    pass


class ScaleTooSlow(UserException):
    pass


class BadCsv(UserException):
    pass


class NotMinimal(UserException):
    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__("Map is not minimal: " + str(verdict))


class PropertyViolation(Exception):
    """
    A checked property failed. Maps to exit code 2.
    """

    def __init__(self, violations: list, report=None):
        self.violations = violations
        self.report = report
        super().__init__("; ".join(violations))
