"""Exception types shared by all modules."""


class OrdGraphError(Exception):
    """Base class for every error raised by this package."""


class FamilyMismatch(OrdGraphError, TypeError):
    pass


class NotPositive(OrdGraphError, ValueError):
    pass


class Infeasible(OrdGraphError):
    pass


class NotOrderHom(OrdGraphError, ValueError):
    pass


class NotComposable(OrdGraphError, ValueError):
    pass


class DegreeNotBelow(OrdGraphError, ValueError):
    pass


class NotInCorner(OrdGraphError, ValueError):
    pass


class NotCommuting(OrdGraphError, ValueError):
    pass


class DimensionMismatch(OrdGraphError, ValueError):
    pass


class GraphMismatch(OrdGraphError, ValueError):
    pass


class NotSubset(OrdGraphError, ValueError):
    pass


class NotValidated(OrdGraphError, ValueError):
    pass


class ParseError(OrdGraphError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ValidationFailed(OrdGraphError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"validation failed: {report.witnesses[:1]}")
