"""Exception hierarchy.

Every error carries the CLI exit code it maps to: 2 for bad input data,
3 for bad parameters.
"""


class QEntropyError(ValueError):
    exit_code = 2


class InputError(QEntropyError):
    exit_code = 2


class ParameterError(QEntropyError):
    exit_code = 3


class EmptyInput(InputError):
    pass


class NegativeWeight(InputError):
    pass


class ZeroMass(InputError):
    pass


class NormalizationError(InputError):
    pass


class MalformedFile(InputError):
    pass


class ConditionOnNullEvent(InputError):
    pass


class EscortUndefined(ParameterError):
    pass


class InvalidParameters(ParameterError):
    pass


class NonPositiveArgument(ParameterError):
    pass


class CutoffViolation(ParameterError):
    pass


class DomainViolation(ParameterError):
    pass


class OutOfRange(ParameterError):
    pass


class NegativeEntropyForDeltaRule(ParameterError):
    pass
