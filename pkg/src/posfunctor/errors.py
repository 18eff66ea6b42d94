"""Exception hierarchy shared by every module in the package."""


class PosFunctorError(Exception):
    """Base class for all errors raised by posfunctor."""


class CodingError(PosFunctorError):
    pass


class DecodeError(PosFunctorError):
    pass


class FunctionalInconsistency(PosFunctorError):
    """Two applicable query-axioms disagree on the output for one input."""


class InsufficientOracle(PosFunctorError):
    """A computation needs an oracle bit outside the declared window."""


class TotalityError(PosFunctorError):
    pass


class InconsistentDiagram(PosFunctorError):
    """A finite atomic diagram contains an atom together with its dual."""


class MalformedFunctional(PosFunctorError):
    pass


class FormatError(PosFunctorError):
    """An operation was asked to read an oracle format it cannot soundly handle."""


class MalformedPullback(PosFunctorError):
    pass


class InsufficientClasses(PosFunctorError):
    pass


class CompositionError(PosFunctorError):
    pass


class KindError(PosFunctorError):
    """Operator species or oracle format do not match the functor kind."""


class IllFormedFunctor(PosFunctorError):
    pass


class WitnessMalformed(PosFunctorError):
    pass


class BoundsError(PosFunctorError):
    pass


class SearchExhausted(PosFunctorError):
    pass


class ParseError(PosFunctorError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column
