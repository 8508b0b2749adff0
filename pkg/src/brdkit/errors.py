"""Exception hierarchy shared by all brdkit modules."""


class BrdError(Exception):
    """Base class for every error raised by brdkit."""


class TermSyntaxError(BrdError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class InvalidTerm(BrdError):
    pass


class EmptyChain(BrdError):
    pass


class NotScattered(BrdError):
    pass


class PrefixViolation(BrdError):
    pass


class BudgetExceeded(BrdError):
    pass


class NoStabilization(BrdError):
    pass


class TypeMismatch(BrdError):
    pass


class NoInfiniteVertex(BrdError):
    pass


class NotInM(BrdError):
    pass


class GermGap(BrdError):
    pass


class CategoryError(BrdError):
    pass


class PremiseFails(BrdError):
    def __init__(self, message: str, h=None):
        super().__init__(message)
        self.h = h


class CapExceeded(BrdError):
    pass


class NotChaining(BrdError):
    pass


class ClassNotStable(BrdError):
    pass


class LanguageMismatch(BrdError):
    pass
