"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
2 for bad input, 3 for a mathematical inconsistency, 4 when the precision
cap is exhausted.
"""


class SaitoError(Exception):
    exit_code = 3


class InputError(SaitoError):
    exit_code = 2


class ExprSyntaxError(InputError, SyntaxError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text_input = text
        if position is not None:
            message = f"{message} (at position {position})"
        InputError.__init__(self, message)
        self.msg = message  # SyntaxError.__str__ reads msg

    def __str__(self):
        return self.msg


class UnknownVariable(InputError):
    pass


class NotAUnit(SaitoError):
    pass


class NoRationalRoot(SaitoError):
    pass


class PrecisionExhausted(SaitoError):
    exit_code = 4


class NotYGeneral(InputError):
    pass


class NotPrimitive(InputError):
    pass


class NotNormalized(InputError):
    pass


class IncidenceFailed(InputError):
    pass


class MissingBranch(InputError):
    pass


class LiftFailed(InputError):
    pass


class BadParams(InputError):
    pass


class NotMultiple(SaitoError):
    pass


class NotMember(SaitoError):
    pass


class MembershipFailed(SaitoError):
    pass


class CrossCheckFailed(SaitoError):
    pass


class NonTermination(SaitoError):
    pass


class NoBasisFound(SaitoError):
    pass


class HypothesisFailed(SaitoError):
    pass


class DegenerateA(SaitoError):
    pass


class NotZeroDimensional(SaitoError):
    pass


class ConductorMismatch(SaitoError):
    pass
