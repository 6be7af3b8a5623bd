"""Exception hierarchy shared by all lrckit modules."""


class LrcError(Exception):
    """Base class for all lrckit errors."""


class InvalidParameters(LrcError):
    pass


# -- field construction and arithmetic ----------------------------------

class NotPrime(InvalidParameters):
    pass


class ReducibleModulus(InvalidParameters):
    pass


class DegreeMismatch(InvalidParameters):
    pass


class ZeroInverse(LrcError):
    pass


class FieldMismatch(LrcError):
    pass


# -- code construction ---------------------------------------------------

class LocalityTooSmall(InvalidParameters):
    pass


class CharacteristicNotTwo(InvalidParameters):
    pass


class DesignInvalid(InvalidParameters):
    pass


class RankDeficient(LrcError):
    pass


# -- verification ---------------------------------------------------------

class BudgetExceeded(LrcError):
    pass


class UnknownStructure(LrcError):
    pass


# -- codec ----------------------------------------------------------------

class WrongErasureCount(LrcError):
    pass


class MatesUnavailable(LrcError):
    pass


class TooManyErasures(LrcError):
    pass


class InconsistentWord(LrcError):
    pass


class LengthMismatch(LrcError):
    pass
