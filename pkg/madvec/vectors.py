#!/usr/bin/env python
"""
Finitely-supported vectors of E, the direct sum of countably many copies of a field.

A SparseVector stores its nonzero coordinates as a strictly increasing tuple of
(index, coefficient) pairs; the empty tuple is the zero vector. All equality is
structural.
"""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Mapping, Sequence, Tuple, Union

from typing_extensions import TypeAlias

from madvec.errors import SpecMismatchError, ZeroVectorError
from madvec.field import FieldScalar, FieldSpec, RawValue

Entry: TypeAlias = Tuple[int, FieldScalar]
Coefficient: TypeAlias = Union[FieldScalar, RawValue]


@dataclass(frozen=True)
class SparseVector:
    """
    A vector of E with finite support.

    Attributes:
        spec: Coefficient field
        entries: Strictly increasing (index, nonzero coefficient) pairs
    """

    spec: FieldSpec
    entries: Tuple[Entry, ...] = ()

    def __post_init__(self) -> None:
        previous = -1
        for index, coeff in self.entries:
            if index <= previous:
                raise ValueError("Vector indices must be strictly increasing")
            if coeff.is_zero:
                raise ValueError(f"Zero coefficient stored at index {index}")
            if coeff.spec != self.spec:
                raise SpecMismatchError(
                    f"Coefficient over {coeff.spec} in a vector over {self.spec}"
                )
            previous = index

    @classmethod
    def zero(cls, spec: FieldSpec) -> "SparseVector":
        return cls(spec, ())

    @classmethod
    def basis(cls, spec: FieldSpec, n: int) -> "SparseVector":
        """The basis vector e_n."""
        if n < 0:
            raise ValueError(f"Basis indices are natural numbers, got {n}")
        return cls(spec, ((n, spec.one()),))

    @classmethod
    def from_mapping(cls, spec: FieldSpec, coords: Mapping[int, Coefficient]) -> "SparseVector":
        """Build a vector from an index -> coefficient mapping, dropping zeros."""
        entries = []
        for index in sorted(coords):
            if index < 0:
                raise ValueError(f"Vector indices are natural numbers, got {index}")
            raw = coords[index]
            coeff = raw if isinstance(raw, FieldScalar) else spec.scalar(raw)
            if coeff.spec != spec:
                raise SpecMismatchError(f"Coefficient over {coeff.spec} in a vector over {spec}")
            if not coeff.is_zero:
                entries.append((index, coeff))
        return cls(spec, tuple(entries))

    @classmethod
    def from_indices(cls, spec: FieldSpec, indices: Iterable[int]) -> "SparseVector":
        """Sum of e_n over the given indices (repeated indices add up)."""
        coords: Dict[int, RawValue] = {}
        for n in indices:
            coords[n] = coords.get(n, 0) + 1
        return cls.from_mapping(spec, coords)

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def support(self) -> FrozenSet[int]:
        return frozenset(index for index, _ in self.entries)

    @property
    def min_support(self) -> int:
        if not self.entries:
            raise ZeroVectorError("The zero vector has no support")
        return self.entries[0][0]

    @property
    def max_support(self) -> int:
        if not self.entries:
            raise ZeroVectorError("The zero vector has no support")
        return self.entries[-1][0]

    # The leftmost nonzero coordinate; rows of an echelon basis pivot here
    pivot = min_support

    @property
    def leading_coeff(self) -> FieldScalar:
        if not self.entries:
            raise ZeroVectorError("The zero vector has no leading coefficient")
        return self.entries[0][1]

    def coeff(self, index: int) -> FieldScalar:
        for i, c in self.entries:
            if i == index:
                return c
            if i > index:
                break
        return self.spec.zero()

    def as_dict(self) -> Dict[int, FieldScalar]:
        return dict(self.entries)

    def __add__(self, other: "SparseVector") -> "SparseVector":
        return vec_combine([(self.spec.one(), self), (self.spec.one(), other)])

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        return vec_combine([(self.spec.one(), self), (-self.spec.one(), other)])

    def __neg__(self) -> "SparseVector":
        return self.scale(-self.spec.one())

    def scale(self, c: FieldScalar) -> "SparseVector":
        if c.spec != self.spec:
            raise SpecMismatchError(f"Cannot scale a vector over {self.spec} by {c}")
        if c.is_zero:
            return SparseVector.zero(self.spec)
        return SparseVector(self.spec, tuple((i, a * c) for i, a in self.entries))

    def normalized(self) -> "SparseVector":
        """Scale so that the leading coefficient is 1."""
        return self.scale(self.leading_coeff.inverse())

    def __repr__(self) -> str:
        if not self.entries:
            return f"0@{self.spec.name}"
        terms = []
        for i, c in self.entries:
            text = c.to_text()
            terms.append(f"e{i}" if text == "1" else f"{text}*e{i}")
        return " + ".join(terms)


def support(v: SparseVector) -> FrozenSet[int]:
    """Index set of the nonzero coordinates of v (empty iff v = 0)."""
    return v.support()


def block_lt(x: SparseVector, y: SparseVector) -> bool:
    """
    Block ordering x < y, meaning max(supp(x)) < min(supp(y)).

    Raises:
        ZeroVectorError: If either vector is zero
    """
    return x.max_support < y.min_support


def is_block_sequence(xs: Sequence[SparseVector]) -> bool:
    """True iff every vector is nonzero and consecutive vectors are block ordered."""
    if any(x.is_zero for x in xs):
        return False
    return all(block_lt(a, b) for a, b in zip(xs, xs[1:]))


def vec_combine(terms: Iterable[Tuple[FieldScalar, SparseVector]]) -> SparseVector:
    """
    Exact linear combination sum(c_i * v_i).

    Args:
        terms: (coefficient, vector) pairs over a common field

    Returns:
        The combination in canonical form. An empty list gives the zero vector
        over GF(2); use combine_over when the field must be kept.

    Raises:
        SpecMismatchError: If the terms live over different fields
    """
    spec = None
    acc: Dict[int, FieldScalar] = {}
    for c, v in terms:
        if spec is None:
            spec = v.spec
        if v.spec != spec or c.spec != spec:
            raise SpecMismatchError(f"Cannot combine vectors over {spec} and {v.spec}")
        if c.is_zero:
            continue
        for index, a in v.entries:
            current = acc.get(index)
            acc[index] = a * c if current is None else current + a * c
    if spec is None:
        return SparseVector.zero(FieldSpec.prime(2))
    return SparseVector(spec, tuple((i, acc[i]) for i in sorted(acc) if not acc[i].is_zero))


def combine_over(
    spec: FieldSpec, terms: Iterable[Tuple[FieldScalar, SparseVector]]
) -> SparseVector:
    """vec_combine with an explicit field, so that an empty combination keeps its field."""
    result = vec_combine(terms)
    return SparseVector.zero(spec) if result.is_zero else result


def above(v: SparseVector, M: int) -> bool:
    """
    True iff min(supp(v)) > M, i.e. v lies in Y/M for any Y containing it.

    Raises:
        ZeroVectorError: If v is zero
    """
    return v.min_support > M
