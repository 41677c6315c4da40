"""
Exception hierarchy for the madvec package.

Every error raised by the library derives from MadvecError, which is itself a
ValueError, so callers that only care about "bad input" can keep catching
ValueError.
"""

from typing import Any, Optional


class MadvecError(ValueError):
    """Root of all madvec errors."""


class SpecMismatchError(MadvecError):
    """Two operands live over different fields."""


class ZeroDivisionFieldError(MadvecError, ZeroDivisionError):
    """Division by (or inversion of) the zero scalar."""


class ZeroVectorError(MadvecError):
    """A block predicate was handed the zero vector, which has no support."""


class NotBlockSequenceError(MadvecError):
    """A list of vectors fails the block ordering x_0 < x_1 < ..."""


class MalformedPresetError(MadvecError):
    """A family preset description cannot be turned into a stream."""


class StreamExhaustedError(MadvecError):
    """A stream ran out of rows (finite-dimensional input or a too-shallow search)."""


class CanonicalizationError(MadvecError):
    """A raw producer violated the nondecreasing-minimum contract of canonicalize."""


class FuelExhaustedError(MadvecError):
    """The global stream-pull budget (MADVEC_MAX_STEPS) was used up."""


class ConfigurationError(MadvecError):
    """Configuration or environment values are invalid."""


class MissingCertificateError(MadvecError):
    """An operation needs an almost-disjointness certificate that is not available."""


class InputFormatError(MadvecError):
    """A JSON artifact does not follow the documented format."""


class DuplicatePairError(MadvecError):
    """A Q-condition already contains the pair being added."""


class PreconditionViolation(MadvecError):
    """
    A construction precondition failed on re-verification.

    Attributes:
        k: Index of the subspace (or step) for which the check failed
        witness: Counterexample vector, when one is available
    """

    def __init__(self, message: str, k: Optional[int] = None, witness: Any = None) -> None:
        super().__init__(message)
        self.k = k
        self.witness = witness


class VerificationError(MadvecError):
    """
    A postcondition or recorded check did not hold.

    Attributes:
        check: Short name of the failing check
    """

    def __init__(self, message: str, check: Optional[str] = None) -> None:
        super().__init__(message)
        self.check = check


class DominationError(MadvecError):
    """The function h does not dominate max(f_alpha, g_alpha) at some index."""

    def __init__(self, message: str, index: int, member: Optional[int] = None) -> None:
        super().__init__(message)
        self.index = index
        self.member = member


class IllegalMoveError(MadvecError):
    """A strategy produced a move that breaks the rules of the game."""

    def __init__(self, message: str, player: str, round_index: int, rule: str) -> None:
        super().__init__(message)
        self.player = player
        self.round_index = round_index
        self.rule = rule


class DecompositionError(MadvecError):
    """A FIN block is not a union of the supports of a block sequence."""

    def __init__(self, message: str, block: Any = None) -> None:
        super().__init__(message)
        self.block = block


class ChainDescentError(MadvecError):
    """A chain X_0 >= X_1 >= ... fails to descend at the inspected depth."""

    def __init__(self, message: str, position: int, row: Any = None) -> None:
        super().__init__(message)
        self.position = position
        self.row = row
