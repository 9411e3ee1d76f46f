"""Exception hierarchy.

Every domain failure derives from :class:`OutbreakNetError` so callers (and the
CLI) can tell domain errors apart from programming errors.
"""


class OutbreakNetError(Exception):
    """Base class for all domain errors raised by this package."""


# -- report ingestion ------------------------------------------------------

class MalformedHeadline(OutbreakNetError, ValueError):
    def __init__(self, message, line_number=None, line=None):
        self.line_number = line_number
        self.line = line
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class SchemaError(OutbreakNetError, ValueError):
    pass


class DateParseError(OutbreakNetError, ValueError):
    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


# -- case registry ---------------------------------------------------------

class AmbiguousMatch(OutbreakNetError):
    def __init__(self, candidates):
        self.candidates = tuple(candidates)
        super().__init__(
            "observation matches several records equally: " + ", ".join(self.candidates)
        )


class UnknownCase(OutbreakNetError, KeyError):
    def __str__(self):
        return f"unknown case id {self.args[0]!r}"


# -- transmission network --------------------------------------------------

class UnknownNode(OutbreakNetError, KeyError):
    def __str__(self):
        return f"unknown node {self.args[0]!r}"


class SelfLoop(OutbreakNetError, ValueError):
    pass


class TemporalViolation(OutbreakNetError, ValueError):
    pass


class DegenerateTravel(OutbreakNetError, ValueError):
    pass


class CycleDetected(OutbreakNetError):
    pass


# -- analytics -------------------------------------------------------------

class ZeroCases(OutbreakNetError, ZeroDivisionError):
    pass


class BeforeAnchor(OutbreakNetError, ValueError):
    pass


class MissingEventKind(OutbreakNetError, LookupError):
    pass


# -- media series ----------------------------------------------------------

class NotFound(OutbreakNetError, LookupError):
    pass


class MisalignedSeries(OutbreakNetError, ValueError):
    pass


class DegenerateVariance(OutbreakNetError, ValueError):
    pass


class EmptyIntersection(OutbreakNetError, ValueError):
    pass


# -- simulation ------------------------------------------------------------

class UnknownSeedPerson(OutbreakNetError, KeyError):
    def __str__(self):
        return f"seed person {self.args[0]!r} is not in the contact structure"


class InvalidParams(OutbreakNetError, ValueError):
    pass
