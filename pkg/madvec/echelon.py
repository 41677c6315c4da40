#!/usr/bin/env python
"""
Reduced echelon form of finite vector lists.

Pivots are leftmost: the pivot of a row is min(supp(row)). An EchelonBasis has
unit leading coefficients, strictly increasing pivots, and every pivot column
cleared in all other rows, which makes it unique for its span. Everything else
in the package certifies against the operations in this module.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from madvec.errors import SpecMismatchError
from madvec.field import FieldScalar, FieldSpec
from madvec.vectors import SparseVector, combine_over

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EchelonBasis:
    """
    Canonical basis of a finite-dimensional subspace of E.

    Attributes:
        spec: Coefficient field
        rows: Rows in pivot order
    """

    spec: FieldSpec
    rows: Tuple[SparseVector, ...] = ()

    @classmethod
    def empty(cls, spec: FieldSpec) -> "EchelonBasis":
        return cls(spec, ())

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(row.pivot for row in self.rows)

    @property
    def max_support(self) -> int:
        """Largest index used by any row, or -1 for the zero subspace."""
        return max((row.max_support for row in self.rows), default=-1)

    def is_valid(self) -> bool:
        """Check every EchelonBasis invariant."""
        pivots = []
        for row in self.rows:
            if row.is_zero or row.spec != self.spec:
                return False
            if row.leading_coeff != self.spec.one():
                return False
            pivots.append(row.pivot)
        if any(a >= b for a, b in zip(pivots, pivots[1:])):
            return False
        for row in self.rows:
            for p in pivots:
                if p != row.pivot and not row.coeff(p).is_zero:
                    return False
        return True

    def rows_until_pivot_exceeds(self, K: int) -> "EchelonBasis":
        """Rows with pivot <= K (still a valid basis)."""
        return EchelonBasis(self.spec, tuple(row for row in self.rows if row.pivot <= K))

    def __iter__(self) -> Iterator[SparseVector]:
        return iter(self.rows)

    def __len__(self) -> int:
        return len(self.rows)


class EchelonBuilder:
    """
    Incremental reduced echelon form.

    Rows are kept fully reduced after every insertion, so the current basis is
    always the canonical basis of the span of everything inserted so far.
    """

    def __init__(self, spec: FieldSpec, rows: Iterable[SparseVector] = ()) -> None:
        self.spec = spec
        self._rows: Dict[int, SparseVector] = {}
        for row in rows:
            self.insert(row)

    @property
    def dim(self) -> int:
        return len(self._rows)

    def reduce(self, v: SparseVector) -> SparseVector:
        """Remainder of v after clearing every known pivot column."""
        if v.spec != self.spec:
            raise SpecMismatchError(
                f"Vector over {v.spec} reduced against a basis over {self.spec}"
            )
        for p in sorted(self._rows):
            if v.is_zero:
                break
            if p > v.max_support:
                break
            c = v.coeff(p)
            if not c.is_zero:
                v = combine_over(self.spec, [(self.spec.one(), v), (-c, self._rows[p])])
        return v

    def insert(self, v: SparseVector) -> Optional[SparseVector]:
        """
        Add v to the span.

        Returns:
            The new normalized row, or None if v was already in the span
        """
        r = self.reduce(v)
        if r.is_zero:
            return None
        r = r.normalized()
        q = r.pivot
        for p, row in list(self._rows.items()):
            c = row.coeff(q)
            if not c.is_zero:
                self._rows[p] = combine_over(self.spec, [(self.spec.one(), row), (-c, r)])
        self._rows[q] = r
        return r

    def row_at(self, pivot: int) -> Optional[SparseVector]:
        return self._rows.get(pivot)

    def basis(self) -> EchelonBasis:
        return EchelonBasis(self.spec, tuple(self._rows[p] for p in sorted(self._rows)))


def _common_spec(rows: Sequence[SparseVector], spec: Optional[FieldSpec]) -> FieldSpec:
    if spec is None:
        if not rows:
            raise ValueError("A field is needed to reduce an empty list of rows")
        spec = rows[0].spec
    for row in rows:
        if row.spec != spec:
            raise SpecMismatchError(f"Rows over {row.spec} and {spec} cannot be reduced together")
    return spec


def rref(rows: Sequence[SparseVector], spec: Optional[FieldSpec] = None) -> EchelonBasis:
    """
    Reduced echelon form of a finite list of vectors.

    Args:
        rows: Generating vectors (zeros and dependent rows are absorbed)
        spec: Field, required only when rows is empty

    Returns:
        The canonical basis of span(rows)

    Raises:
        SpecMismatchError: If the rows live over different fields
    """
    spec = _common_spec(rows, spec)
    return EchelonBuilder(spec, rows).basis()


def member(x: SparseVector, B: EchelonBasis) -> Optional[Tuple[FieldScalar, ...]]:
    """
    Coordinates of x with respect to B.

    Returns:
        Coefficients c with sum(c_i * B.rows[i]) = x (one per row of B), or None
        when x is not in span(B)

    Raises:
        SpecMismatchError: If x and B live over different fields
    """
    if x.spec != B.spec:
        raise SpecMismatchError(f"Vector over {x.spec} tested against a basis over {B.spec}")
    coefficients: List[FieldScalar] = []
    remainder = x
    for row in B.rows:
        c = remainder.coeff(row.pivot)
        coefficients.append(c)
        if not c.is_zero:
            remainder = combine_over(B.spec, [(B.spec.one(), remainder), (-c, row)])
    if not remainder.is_zero:
        return None
    return tuple(coefficients)


def in_span(x: SparseVector, B: EchelonBasis) -> bool:
    return member(x, B) is not None


def contains(U: EchelonBasis, V: EchelonBasis) -> bool:
    """True iff span(V) is a subspace of span(U)."""
    return all(in_span(v, U) for v in V.rows)


def _shift(v: SparseVector, offset: int) -> SparseVector:
    return SparseVector(v.spec, tuple((i + offset, c) for i, c in v.entries))


def intersect(U: EchelonBasis, V: EchelonBasis) -> EchelonBasis:
    """
    Exact intersection span(U) and span(V).

    Uses the Zassenhaus stacking: rows (u | u) and (v | 0) are reduced with all
    first-block columns to the left of the second block; the rows whose first
    block vanishes carry a basis of the intersection in their second block.

    Raises:
        SpecMismatchError: If U and V live over different fields
    """
    if U.spec != V.spec:
        raise SpecMismatchError(f"Cannot intersect subspaces over {U.spec} and {V.spec}")
    if not U.rows or not V.rows:
        return EchelonBasis.empty(U.spec)
    width = max(U.max_support, V.max_support) + 1
    stacked = [u + _shift(u, width) for u in U.rows] + list(V.rows)
    reduced = rref(stacked, U.spec)
    meet = [_shift(row, -width) for row in reduced.rows if row.pivot >= width]
    return rref(meet, U.spec)


def sum_space(U: EchelonBasis, V: EchelonBasis) -> EchelonBasis:
    """
    Canonical basis of span(U) + span(V).

    Raises:
        SpecMismatchError: If U and V live over different fields
    """
    if U.spec != V.spec:
        raise SpecMismatchError(f"Cannot add subspaces over {U.spec} and {V.spec}")
    return rref(list(U.rows) + list(V.rows), U.spec)


def window(spec: FieldSpec, K: int) -> EchelonBasis:
    """The coordinate subspace <e_0, ..., e_K> (empty when K < 0)."""
    return EchelonBasis(spec, tuple(SparseVector.basis(spec, n) for n in range(K + 1)))


def finite_extend_bound(B: EchelonBasis, K: int) -> int:
    """
    The extension bound for a finite-dimensional subspace.

    M = max(K, largest support index among rows with pivot <= K). Any x with
    min(supp(x)) > M then either adds nothing to the intersection with span(B)
    (x outside) or adds exactly <x> (x inside).
    """
    head = B.rows_until_pivot_exceeds(K)
    return max(K, head.max_support)


def enumerate_span(B: EchelonBasis) -> Iterator[SparseVector]:
    """
    Every vector of span(B); finite fields only.

    Raises:
        ValueError: If the field is infinite
    """
    if not B.spec.is_finite:
        raise ValueError("Spans over the rationals cannot be enumerated")
    assert B.spec.p is not None
    scalars = [B.spec.scalar(a) for a in range(B.spec.p)]
    for coefficients in itertools.product(scalars, repeat=B.dim):
        yield combine_over(B.spec, zip(coefficients, B.rows))
