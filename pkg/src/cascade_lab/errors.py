"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
2 for configuration problems, 3 for analytic-domain failures and 4 for
numerical-run failures.
"""


class CascadeError(ValueError):
    exit_code = 3


class ConfigError(CascadeError):
    exit_code = 2


class NonPositiveRate(ConfigError):
    def __init__(self, field, index=None, value=None):
        self.field = field
        self.index = index
        self.value = value
        where = field if index is None else f"{field}[{index}]"
        super().__init__(f"{where} must be a positive finite rate, got {value!r}")


class LengthMismatch(ConfigError):
    pass


class InvalidInput(ConfigError):
    pass


class DomainError(CascadeError):
    pass


class PoleEvaluation(CascadeError):
    pass


class InfiniteGain(CascadeError):
    pass


class UnstableFeedback(CascadeError):
    pass


class UnboundedNorm(CascadeError):
    pass


class PureIntegrator(CascadeError):
    pass


class IndexOutOfRange(CascadeError):
    pass


class NoConvergence(CascadeError):
    pass


class NumericRunError(CascadeError):
    exit_code = 4


class StepTooLarge(NumericRunError):
    pass


class TailNotDecayed(NumericRunError):
    pass


class DegenerateSignal(NumericRunError):
    pass
