"""Exception types shared across the package."""


class StructuralError(ValueError):
    """Inputs are malformed: mismatched lengths, unknown labels, bad weights."""


class ZeroProbabilityCell(ValueError):
    """Conditioning was requested on a cell of zero probability, where the
    Bayes update is undefined."""


class AbsoluteContinuityViolation(ValueError):
    """A belief puts positive weight on an outcome the prior rules out."""

    def __init__(self, outcomes, message=None):
        self.outcomes = tuple(outcomes)
        if message is None:
            message = "belief charges prior-null outcomes: %s" % (
                ", ".join(repr(o) for o in self.outcomes)
            )
        super().__init__(message)


class InvalidMixError(ValueError):
    """A mixing distribution does not cover every posterior with positive
    weight."""


class NotRationalizableError(ValueError):
    """No model of the requested kind can reproduce the observation."""


class PreconditionError(ValueError):
    """The observation falls outside the hypotheses of the requested test."""


class ResourceBoundError(ValueError):
    """The requested exhaustive computation exceeds the built-in size guard."""


class UndefinedUpdateError(ValueError):
    """An objectively reachable signal has zero subjective probability, so
    the agent's posterior after it is undefined."""


class FormatError(ValueError):
    """A JSON input file does not conform to the documented schema."""
