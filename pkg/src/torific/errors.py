"""Exception hierarchy shared by all torific modules."""


class TorificError(Exception):
    """Base class for every error raised by the package."""


class ParameterError(TorificError, ValueError):
    """Invalid constructor or catalog parameter."""


class SpecError(TorificError, ValueError):
    """Malformed family spec document.

    ``location`` carries a human-readable pointer (line/column or field name).
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class DomainError(TorificError, ValueError):
    """Evaluation point lies outside the domain of a curve or map."""


class NumericalError(TorificError):
    """A numerical pipeline step could not produce a trustworthy answer."""


class NonPositiveMetric(NumericalError):
    pass


class DegenerateFamily(NumericalError):
    pass


class NotConstantCurvature(NumericalError):
    def __init__(self, message, deviation=None):
        self.deviation = deviation
        super().__init__(message)


class NonConstantInvariant(NumericalError):
    pass


class FitMismatch(NumericalError):
    def __init__(self, message, max_rel_error=None):
        self.max_rel_error = max_rel_error
        super().__init__(message)


class NotToric(NumericalError):
    pass


class UnknownForm(NumericalError):
    pass


class DegenerateSampling(NumericalError):
    pass
