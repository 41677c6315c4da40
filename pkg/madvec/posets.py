#!/usr/bin/env python
"""
Finite forcing conditions as executable objects.

MAPCondition is a pair (s, F): a finite block sequence s and a finite set F of
family members that later extensions must not meet outside <s>. QCondition is
a finite table assigning to each pair (alpha, beta) in F_p a block sequence of
length n_p; extensions must keep the intersections between rows with the same
label alpha unchanged.

Labels alpha are opaque strings: only their equality matters.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple

from typing_extensions import TypeAlias

from madvec.echelon import EchelonBasis, contains, finite_extend_bound, in_span, intersect, rref
from madvec.errors import DuplicatePairError, NotBlockSequenceError, VerificationError
from madvec.extension import ADCertificate, extend_outside, make_disjoint
from madvec.field import FieldSpec
from madvec.madlab import ADFamily
from madvec.streams import intersect_with_stream
from madvec.vectors import SparseVector, is_block_sequence

logger = logging.getLogger(__name__)

Pair: TypeAlias = Tuple[str, int]


@dataclass(frozen=True)
class MAPCondition:
    """
    A condition (s, F).

    Attributes:
        s: Block sequence with unit leading coefficients
        F: Indices of family members
    """

    s: Tuple[SparseVector, ...] = ()
    F: FrozenSet[int] = frozenset()

    def __post_init__(self) -> None:
        if not is_block_sequence(self.s):
            raise NotBlockSequenceError("The s part of a condition must be a block sequence")
        for x in self.s:
            if x.leading_coeff != x.spec.one():
                raise ValueError(f"Row {x!r} of s is not normalized")


def _check_indices(indices: Iterable[int], fam: ADFamily) -> None:
    for index in indices:
        if not 0 <= index < len(fam):
            raise ValueError(f"Invalid family index {index} (family has {len(fam)} members)")


def map_leq(q: MAPCondition, p: MAPCondition, fam: ADFamily) -> bool:
    """
    True iff q extends p.

    q.s must extend p.s, q.F must contain p.F, and for every member X of p.F
    the intersection of <q.s> with X must lie in <p.s>.

    Raises:
        ValueError: If an index is not a family member
    """
    _check_indices(q.F | p.F, fam)
    if q.s[: len(p.s)] != p.s or not q.F >= p.F:
        return False
    span_q = rref(list(q.s), fam.spec)
    span_p = rref(list(p.s), fam.spec)
    for index in sorted(p.F):
        meet = intersect_with_stream(span_q, fam.stream(index))
        if not contains(span_p, meet):
            return False
    return True


def _relabelled_certs(fam: ADFamily, indices: Sequence[int]) -> List[ADCertificate]:
    certs = []
    for a, b in itertools.combinations(range(len(indices)), 2):
        cert = fam.certificate(indices[a], indices[b])
        certs.append(ADCertificate(a, b, cert.bound, cert.depth, cert.dim))
    return certs


def map_extend(p: MAPCondition, fam: ADFamily, *, verify: bool = True) -> MAPCondition:
    """
    Extend s by one vector avoiding every member of F.

    The new vector lies above the extension bound of every member of F and
    outside all of them, so no intersection with a member grows.

    Raises:
        VerificationError: If the result is not below p
    """
    _check_indices(p.F, fam)
    indices = sorted(p.F)
    streams = [fam.stream(i) for i in indices]
    tails = make_disjoint([fam.stream(i) for i in indices], _relabelled_certs(fam, indices))
    x = extend_outside(streams, p.s, disjoint=tails, spec=fam.spec, verify=verify).normalized()
    q = MAPCondition(p.s + (x,), p.F)
    if verify and not map_leq(q, p, fam):
        raise VerificationError("Extended condition is not below the original", check="map_leq")
    logger.debug("Extended s to length %d with %r", len(q.s), x)
    return q


def map_add_member(p: MAPCondition, X_index: int, fam: ADFamily) -> MAPCondition:
    """(s, F + {X}); below p since s is unchanged."""
    _check_indices([X_index], fam)
    return MAPCondition(p.s, p.F | {X_index})


def map_common_extension(p: MAPCondition, q: MAPCondition) -> MAPCondition:
    """
    The common extension (s, F + F') of two conditions sharing s.

    Raises:
        ValueError: If the conditions have different s
    """
    if p.s != q.s:
        raise ValueError("Only conditions with the same s have this common extension")
    return MAPCondition(p.s, p.F | q.F)


@dataclass(frozen=True)
class QCondition:
    """
    A finite function F_p x n_p -> E.

    Attributes:
        spec: Coefficient field
        n: Height n_p
        table: (pair, row) entries sorted by pair; every row is a block sequence of length n
    """

    spec: FieldSpec
    n: int = 0
    table: Tuple[Tuple[Pair, Tuple[SparseVector, ...]], ...] = ()

    def __post_init__(self) -> None:
        pairs = [pair for pair, _ in self.table]
        if len(set(pairs)) != len(pairs):
            raise DuplicatePairError("A pair appears twice in the condition")
        if pairs != sorted(pairs):
            raise ValueError("Condition table must be sorted by pair")
        for pair, row in self.table:
            if len(row) != self.n:
                raise ValueError(f"Row of {pair} has length {len(row)}, expected {self.n}")
            if not is_block_sequence(row):
                raise NotBlockSequenceError(f"Row of {pair} is not a block sequence")
            if any(v.spec != self.spec for v in row):
                raise ValueError(f"Row of {pair} is not over {self.spec}")

    @classmethod
    def from_rows(
        cls, spec: FieldSpec, n: int, rows: Mapping[Pair, Sequence[SparseVector]]
    ) -> "QCondition":
        return cls(spec, n, tuple((pair, tuple(rows[pair])) for pair in sorted(rows)))

    @property
    def pairs(self) -> FrozenSet[Pair]:
        return frozenset(pair for pair, _ in self.table)

    def rows(self) -> Dict[Pair, Tuple[SparseVector, ...]]:
        return dict(self.table)

    def row(self, pair: Pair) -> Tuple[SparseVector, ...]:
        return self.rows()[pair]

    def labels(self) -> List[str]:
        return sorted({alpha for alpha, _ in self.pairs})

    def betas(self, alpha: str) -> List[int]:
        return sorted(beta for a, beta in self.pairs if a == alpha)


def _row_span(spec: FieldSpec, row: Sequence[SparseVector]) -> EchelonBasis:
    return rref(list(row), spec)


def q_leq(q: QCondition, p: QCondition) -> bool:
    """
    True iff q extends p as a function and keeps the same-label intersections of F_p.

    For every alpha and beta != gamma with (alpha, beta), (alpha, gamma) in F_p,
    the spans of q's two rows must meet exactly where p's two rows meet.
    """
    if q.spec != p.spec or not q.pairs >= p.pairs or q.n < p.n:
        return False
    q_rows, p_rows = q.rows(), p.rows()
    for pair in p.pairs:
        if q_rows[pair][: p.n] != p_rows[pair]:
            return False
    for alpha in p.labels():
        for beta, gamma in itertools.combinations(p.betas(alpha), 2):
            before = intersect(
                _row_span(p.spec, p_rows[(alpha, beta)]), _row_span(p.spec, p_rows[(alpha, gamma)])
            )
            after = intersect(
                _row_span(q.spec, q_rows[(alpha, beta)]), _row_span(q.spec, q_rows[(alpha, gamma)])
            )
            if before != after:
                return False
    return True


def q_add_pair(p: QCondition, pair: Pair) -> QCondition:
    """
    Add a pair whose row is e_0, ..., e_{n_p - 1}.

    Raises:
        DuplicatePairError: If the pair is already in F_p
    """
    if pair in p.pairs:
        raise DuplicatePairError(f"Pair {pair} is already in the condition")
    rows = p.rows()
    rows[pair] = tuple(SparseVector.basis(p.spec, i) for i in range(p.n))
    q = QCondition.from_rows(p.spec, p.n, rows)
    if not q_leq(q, p):
        raise VerificationError("Adding a pair broke the order", check="q_leq")
    return q


def _max_support(rows: Iterable[Sequence[SparseVector]]) -> int:
    return max((v.max_support for row in rows for v in row), default=-1)


def _fresh_block(spec: FieldSpec, j: int, width: int) -> SparseVector:
    return SparseVector.from_indices(spec, range(j, j + width))


def q_extend_level(p: QCondition, M: int, *, width: int = 1) -> QCondition:
    """
    Add one level, every new vector supported above M.

    Labels are swept one at a time and the betas of a label in order. Each new
    vector is the first sum e_j + ... + e_{j+width-1} with j above the running
    bound (M, the supports seen so far and the finite extension bounds of the
    spans to avoid) lying outside the spans of the other rows of its label: extended rows for betas
    already done, old rows for the rest. This keeps every same-label
    intersection unchanged.

    Args:
        p: Condition to extend
        M: Every new vector is supported above M
        width: Number of consecutive basis vectors summed into each new vector

    Raises:
        ValueError: If width < 1
        VerificationError: If the result is not below p
    """
    if width < 1:
        raise ValueError(f"Width must be at least 1, got {width}")
    old = p.rows()
    K = _max_support(old.values())
    new_rows: Dict[Pair, Tuple[SparseVector, ...]] = {}
    for alpha in p.labels():
        bound = max(M, K)
        betas = p.betas(alpha)
        for position, beta in enumerate(betas):
            avoid = [new_rows[(alpha, b)] for b in betas[:position]]
            avoid += [old[(alpha, b)] for b in betas[position + 1 :]]
            spans = [_row_span(p.spec, row) for row in avoid]
            bound = max([bound] + [finite_extend_bound(span, K) for span in spans])
            j = bound + 1
            while any(in_span(_fresh_block(p.spec, j, width), span) for span in spans):
                j += 1
            new_rows[(alpha, beta)] = old[(alpha, beta)] + (_fresh_block(p.spec, j, width),)
            bound = j + width - 1
    q = QCondition.from_rows(p.spec, p.n + 1, new_rows)
    if not q_leq(q, p):
        raise VerificationError("Extending the height broke the order", check="q_leq")
    logger.debug("Extended %d rows to height %d above %d", len(new_rows), q.n, M)
    return q


def q_amalgamate(p: QCondition, q: QCondition) -> QCondition:
    """
    Union of two conditions of equal height that agree on their shared pairs.

    Raises:
        ValueError: If the heights differ or a shared pair has different rows
    """
    if p.spec != q.spec or p.n != q.n:
        raise ValueError("Only conditions of the same height over the same field amalgamate")
    rows = p.rows()
    for pair, row in q.table:
        if pair in rows and rows[pair] != row:
            raise ValueError(f"Conditions disagree on pair {pair}")
        rows[pair] = row
    r = QCondition.from_rows(p.spec, p.n, rows)
    if not (q_leq(r, p) and q_leq(r, q)):
        raise VerificationError("Amalgamation is not a common extension", check="q_leq")
    return r
