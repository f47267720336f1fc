"""Exception hierarchy.

Every error carries an ``exit_code`` so the command-line layer can map it
onto the stable 0/1/2 contract without a lookup table: 1 for bad input,
2 for numerical or property failures.
"""


class Coh2EntError(Exception):
    exit_code = 1


class ValidationError(Coh2EntError, ValueError):
    """Input does not satisfy a structural invariant."""


class NumericalError(Coh2EntError, ArithmeticError):
    exit_code = 2


class DimensionMismatch(ValidationError):
    pass


class BadSubsystemIndex(ValidationError):
    pass


class NonHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotNormalized(ValidationError):
    pass


class NotDistribution(ValidationError):
    pass


class NotComplete(ValidationError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotIdempotent(ValidationError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotOrthogonal(ValidationError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class NotRankOne(ValidationError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotPrime(ValidationError):
    pass


class NotAncillaStructured(ValidationError):
    pass


class TargetTooSmall(ValidationError):
    pass


class MatrixFileError(ValidationError):
    """A matrix file is malformed (bad JSON, wrong shape, NaN/Inf entries)."""


class NoConvergence(NumericalError):
    pass


class CompletionFailure(NumericalError):
    pass


class InconsistentExtension(NumericalError):
    pass


class SandwichViolation(NumericalError):
    pass
