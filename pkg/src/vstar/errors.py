"""Exception hierarchy shared across the package."""


class VStarError(Exception):
    """Base class for all errors raised by this package."""


# -- kernel ---------------------------------------------------------------


class NotAPair(VStarError):
    def __init__(self, value):
        super().__init__(f"not a Kuratowski pair: {value}")
        self.value = value


class NotANat(VStarError):
    def __init__(self, value):
        super().__init__(f"not a von Neumann natural: {value}")
        self.value = value


class NotARational(VStarError):
    def __init__(self, value):
        super().__init__(f"not an encoded rational: {value}")
        self.value = value


class NotAFunction(VStarError):
    def __init__(self, value, reason):
        super().__init__(f"not a function ({reason}): {value}")
        self.value = value
        self.reason = reason


class LiteralSyntaxError(VStarError):
    def __init__(self, text, pos, message):
        super().__init__(f"{message} at offset {pos} in {text!r}")
        self.text = text
        self.pos = pos


# -- structured sets --------------------------------------------------------


class InvalidInput(VStarError):
    """An operation received a structure that fails its validity clauses."""


class IncompleteMap(VStarError):
    pass


class BoundExceeded(VStarError):
    pass


class NotSimple(VStarError):
    pass


class NotAQuasiDomain(VStarError):
    pass


# -- formulas ---------------------------------------------------------------


class FormulaSyntaxError(VStarError):
    def __init__(self, message, text="", pos=0):
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} (line {line}, column {col})")
        self.message = message
        self.pos = pos
        self.line = line
        self.column = col


class ScopeError(FormulaSyntaxError):
    pass


class EvalError(VStarError):
    pass


class NoWitness(EvalError):
    pass


class MultipleWitnesses(EvalError):
    pass


class RankCapExceeded(EvalError):
    """An unbounded existential ran out of candidates; the truth value is unknown."""


# -- theories and interpretations ---------------------------------------------


class UnsupportedTheory(VStarError):
    pass


class TargetViolation(VStarError):
    def __init__(self, message, clause=None):
        super().__init__(message)
        self.clause = clause


class NotInjective(VStarError):
    pass


class NotDomainPreserving(VStarError):
    pass


class IncompleteCatalog(VStarError):
    pass
