"""Exception and warning types raised across the package."""


class TrustError(Exception):
    """Base class for domain errors (CLI maps these to exit code 1)."""


# promise core
class MixedEndpoints(TrustError, ValueError):
    pass


class ConditionalInBundle(TrustError, ValueError):
    pass


class EmptyBundle(TrustError, ValueError):
    pass


class NoMatchingAssurance(TrustError, ValueError):
    pass


# expectation
class NoEvidence(TrustError, LookupError):
    pass


class EmptyEnsemble(TrustError, ValueError):
    pass


class WeightsNotConvex(TrustError, ValueError):
    pass


class NoDonorEvidence(TrustError, LookupError):
    pass


# trust algebra
class OutOfRange(TrustError, ValueError):
    pass


class AllWeightsZero(TrustError, ValueError):
    pass


class IncompatibleOr(TrustError, ValueError):
    pass


class NotInScope(TrustError, ValueError):
    """The truster has no knowledge of the promise it would value."""


# reputation
class MissingRelayEdge(TrustError, LookupError):
    pass


class PathRepeat(TrustError, ValueError):
    pass


# community trust
class DuplicateEdge(TrustError, ValueError):
    pass


class UnknownAgent(TrustError, LookupError):
    pass


class OracleSizeExceeded(TrustError, ValueError):
    pass


# architectures
class EmptyUserSet(TrustError, ValueError):
    pass


class SelfSigning(TrustError, ValueError):
    pass


class EmptyValuations(TrustError, ValueError):
    pass


# graph files
class GraphFileError(TrustError):
    """A graph file could not be parsed; carries a 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class GraphSyntaxError(GraphFileError):
    pass


class UndeclaredAgent(GraphFileError):
    pass


class DuplicateAgent(GraphFileError):
    pass


class DuplicateRecord(GraphFileError):
    pass


# warnings
class DegenerateLikelihoods(UserWarning):
    """Bayes denominator vanished; the hypothesis was returned unchanged."""


class DegenerateSpectrum(UserWarning):
    """The principal eigenvector is not unique or iteration did not settle."""
