"""Exception hierarchy shared by the engine, the DSL and the CLI."""


class TmcError(Exception):
    """Base class for every engine error."""


# algebra

class DomainViolation(TmcError):
    """A monomial breaks the domain of one of its variables."""


class UnknownVariable(TmcError):
    pass


class NotUnimodular(TmcError):
    pass


class SignedMapUnsupported(TmcError):
    pass


class NotInvertible(TmcError):
    """A negative power of an expression that is not a unit was requested."""


# models

class ModelError(TmcError):
    pass


class NameClash(ModelError):
    pass


class NotLinearInP(ModelError):
    pass


class NotSolvable(ModelError):
    pass


class NotMonomialSigma(ModelError):
    pass


class NoUnitExponentVariable(ModelError):
    pass


class NotSingleVariableSigma(ModelError):
    pass


class ConstraintsPresent(ModelError):
    pass


class NotInvariant(TmcError):
    def __init__(self, monomial, pairing):
        self.monomial = tuple(monomial)
        self.pairing = pairing
        super().__init__(
            f"primal monomial {self.monomial} pairs to {pairing} with the circle action"
        )


class ResourceBudgetExceeded(TmcError):
    pass


class PipelineError(TmcError):
    def __init__(self, step, cause, log):
        self.step = step
        self.cause = cause
        self.log = log
        super().__init__(f"step {step}: {type(cause).__name__}: {cause}")


# warnings

class DuplicateRay(UserWarning):
    pass


class GradingBroken(UserWarning):
    pass


# DSL

class ParseError(TmcError):
    def __init__(self, message, line=0, col=0):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


class SemanticError(TmcError):
    def __init__(self, message, line=0, col=0):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")
