"""Exception hierarchy shared by every module."""


class SkewcatError(Exception):
    """Base class; the CLI maps any of these to exit code 2."""


class TermError(SkewcatError):
    pass


class UnknownGenerator(TermError):
    pass


class LoosenOnLooseSide(TermError):
    pass


class IndexOutOfRange(TermError):
    pass


class ObjectMismatch(TermError):
    pass


class BoundaryKindMismatch(TermError):
    pass


class NotAForm(TermError):
    pass


class SignatureError(SkewcatError):
    pass


class InfeasibleNormalForm(SkewcatError):
    pass


class ArrowMismatch(SkewcatError):
    pass


class CardinalityGuard(SkewcatError):
    """Raised when an enumeration would exceed the configured limit."""


class ArityBoundExceeded(SkewcatError):
    pass


class AssignmentMismatch(SkewcatError):
    pass


class HomMembership(SkewcatError):
    pass


class DanglingReference(SkewcatError, ReferenceError):
    """A table refers to an object or morphism that was never declared."""


class TypeMismatch(SkewcatError):
    pass


class CbpvSyntaxError(SkewcatError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class CbpvTypeError(SkewcatError):
    def __init__(self, rule, message):
        super().__init__(f"[{rule}] {message}")
        self.rule = rule


class InterpretationGap(SkewcatError):
    pass


DEFAULT_GUARD = 10**6


def guard(count, limit, what):
    if limit is not None and count > limit:
        raise CardinalityGuard(f"{what}: {count} elements exceeds guard {limit}")
