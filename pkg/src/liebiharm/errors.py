"""Exception types shared across the package."""


class LieHarmError(Exception):
    """Base class; ``code`` is the name reported on the CLI error stream."""

    code = "Error"

    def __str__(self):
        msg = super().__str__()
        return f"{self.code}: {msg}" if msg else self.code


class UnknownAlgebra(LieHarmError, KeyError):
    code = "UnknownAlgebra"


class DegenerateMetric(LieHarmError, ValueError):
    code = "DegenerateMetric"


class ParamOutOfRange(LieHarmError, ValueError):
    code = "ParamOutOfRange"


class NotHomomorphism(LieHarmError, ValueError):
    code = "NotHomomorphism"


class NotAutomorphism(LieHarmError, ValueError):
    code = "NotAutomorphism"


class Singular(LieHarmError, ArithmeticError):
    code = "Singular"


class SamplingInfeasible(LieHarmError, RuntimeError):
    code = "SamplingInfeasible"


class MaxEvalsExceeded(LieHarmError, RuntimeError):
    code = "MaxEvalsExceeded"


class NoFreeParams(LieHarmError, ValueError):
    code = "NoFreeParams"


class InvalidInput(LieHarmError, ValueError):
    code = "InvalidInput"
