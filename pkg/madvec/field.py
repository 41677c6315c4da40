#!/usr/bin/env python
"""
Exact scalar arithmetic for the madvec package.

Two families of countable fields are supported: the prime fields GF(p) with
2 <= p < 2^16, and the rational numbers. Scalars are immutable and always kept
in canonical form (a residue in 0..p-1, or a Fraction in lowest terms), so two
equal scalars compare equal field by field.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Literal, Optional, Union

from typing_extensions import TypeAlias

from madvec.errors import InputFormatError, SpecMismatchError, ZeroDivisionFieldError

RawValue: TypeAlias = Union[int, Fraction]
ArithOp = Literal["add", "sub", "mul", "div"]

# Largest admissible characteristic (exclusive)
MAX_PRIME = 1 << 16


class FieldKind(Enum):
    """Enum of the supported field families."""

    PRIME = "prime"
    RATIONALS = "rationals"


def is_prime(p: int) -> bool:
    """Trial division primality test, adequate below 2^16."""
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """
    Description of the coefficient field.

    Attributes:
        kind: Field family
        p: Characteristic for prime fields, None for the rationals
    """

    kind: FieldKind
    p: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind is FieldKind.PRIME:
            if self.p is None or not 2 <= self.p < MAX_PRIME or not is_prime(self.p):
                raise ValueError(f"GF(p) needs a prime 2 <= p < {MAX_PRIME}, got {self.p}")
        elif self.p is not None:
            raise ValueError("The rationals take no characteristic")

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(FieldKind.PRIME, p)

    @classmethod
    def rationals(cls) -> "FieldSpec":
        return cls(FieldKind.RATIONALS)

    @property
    def is_finite(self) -> bool:
        return self.kind is FieldKind.PRIME

    @property
    def name(self) -> str:
        """Short name as accepted by `--field` (gf5, q)."""
        return f"gf{self.p}" if self.kind is FieldKind.PRIME else "q"

    def normalize(self, value: RawValue) -> RawValue:
        """Bring a raw integer or fraction into canonical form for this field."""
        if self.kind is FieldKind.PRIME:
            assert self.p is not None
            if isinstance(value, Fraction):
                num = value.numerator % self.p
                den = value.denominator % self.p
                if den == 0:
                    raise ZeroDivisionFieldError(f"{value} has no image in GF({self.p})")
                return (num * pow(den, -1, self.p)) % self.p
            return value % self.p
        return Fraction(value)

    def scalar(self, value: RawValue) -> "FieldScalar":
        return FieldScalar(self, value)

    def zero(self) -> "FieldScalar":
        return self.scalar(0)

    def one(self) -> "FieldScalar":
        return self.scalar(1)

    def parse(self, text: str) -> "FieldScalar":
        """
        Parse the text encoding of a scalar.

        GF(p) scalars are decimal residues; rationals are "a/b" or "a".

        Raises:
            InputFormatError: If the text is not a valid encoding
        """
        try:
            if self.kind is FieldKind.PRIME:
                if "/" in text:
                    raise ValueError("fractions are not residues")
                return self.scalar(int(text))
            return self.scalar(Fraction(text))
        except (ValueError, ZeroDivisionError) as e:
            raise InputFormatError(f"Cannot read '{text}' as an element of {self.name}: {e}")

    def __str__(self) -> str:
        return f"GF({self.p})" if self.kind is FieldKind.PRIME else "Q"


@dataclass(frozen=True)
class FieldScalar:
    """
    An exact element of a supported field.

    Attributes:
        spec: Field the scalar belongs to
        value: Canonical representative (residue or reduced Fraction); any integer or
            Fraction passed in is brought to that form
    """

    spec: FieldSpec
    value: RawValue

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", self.spec.normalize(self.value))

    def _check(self, other: "FieldScalar") -> None:
        if self.spec != other.spec:
            raise SpecMismatchError(f"Cannot combine scalars of {self.spec} and {other.spec}")

    def __add__(self, other: "FieldScalar") -> "FieldScalar":
        self._check(other)
        return self.spec.scalar(self.value + other.value)

    def __sub__(self, other: "FieldScalar") -> "FieldScalar":
        self._check(other)
        return self.spec.scalar(self.value - other.value)

    def __mul__(self, other: "FieldScalar") -> "FieldScalar":
        self._check(other)
        return self.spec.scalar(self.value * other.value)

    def __truediv__(self, other: "FieldScalar") -> "FieldScalar":
        self._check(other)
        return self * other.inverse()

    def __neg__(self) -> "FieldScalar":
        return self.spec.scalar(-self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def inverse(self) -> "FieldScalar":
        """
        Multiplicative inverse.

        Raises:
            ZeroDivisionFieldError: If the scalar is zero
        """
        if self.is_zero:
            raise ZeroDivisionFieldError(f"Zero has no inverse in {self.spec}")
        if self.spec.kind is FieldKind.PRIME:
            assert self.spec.p is not None
            return FieldScalar(self.spec, pow(int(self.value), -1, self.spec.p))
        return FieldScalar(self.spec, 1 / Fraction(self.value))

    def to_text(self) -> str:
        """Text encoding: decimal residue, or "a/b" with b omitted when 1."""
        if isinstance(self.value, Fraction):
            if self.value.denominator == 1:
                return str(self.value.numerator)
            return f"{self.value.numerator}/{self.value.denominator}"
        return str(self.value)

    def __repr__(self) -> str:
        return f"{self.to_text()}@{self.spec.name}"


def scalar_arith(a: FieldScalar, b: FieldScalar, op: ArithOp) -> FieldScalar:
    """
    Apply one of the four field operations.

    Args:
        a: Left operand
        b: Right operand
        op: One of "add", "sub", "mul", "div"

    Returns:
        The exact result in canonical form

    Raises:
        SpecMismatchError: If the operands live over different fields
        ZeroDivisionFieldError: On division by zero
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"Unknown operation '{op}'")


def scalar_inv(a: FieldScalar) -> FieldScalar:
    """Multiplicative inverse of a nonzero scalar."""
    return a.inverse()
