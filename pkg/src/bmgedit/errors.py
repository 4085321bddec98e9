"""Exception types shared across the package."""


class BmgError(Exception):
    """Base class for all errors raised by this package."""


# -- graph model ---------------------------------------------------------

class UnknownVertex(BmgError):
    pass


class ModeViolation(BmgError):
    """An edit set does not respect its mode (deletion/completion/editing)."""


# -- trees ----------------------------------------------------------------

class UnknownLeaf(BmgError):
    pass


class EmptyRestriction(BmgError):
    pass


class NotPhylogenetic(BmgError):
    """Inner vertex with a single child, or a malformed rooted tree."""


# -- recognition ----------------------------------------------------------

class NotProperlyColored(BmgError):
    pass


class NotTwoColored(BmgError):
    pass


class NotConnected(BmgError):
    pass


class NotABmg(BmgError):
    pass


# -- ilp / solving --------------------------------------------------------

class WrongColorCount(BmgError):
    pass


class TooFewVertices(BmgError):
    pass


class Infeasible(BmgError):
    """No edit set of the requested mode can produce a best match graph."""


class BudgetExceeded(BmgError):
    """No edit set within the given budget exists."""


class ExportError(BmgError):
    """Model cannot be written as LP text (e.g. colliding variable names)."""


# -- generators -----------------------------------------------------------

class BadParameters(BmgError):
    pass


class NotEnoughPairs(BmgError):
    pass


class BadComponents(BmgError):
    pass


class BadInstance(BmgError):
    pass


class NotAnExactCover(BmgError):
    pass


class EmptyPart(BmgError):
    pass


# -- text formats ---------------------------------------------------------

class ParseError(BmgError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DuplicateRecord(ParseError):
    pass


class UnknownVertexInArc(ParseError):
    pass
