#!/usr/bin/env python
"""
Lazy presentations of infinite-dimensional subspaces of E.

A subspace Y is presented by the rows of its reduced echelon basis, produced on
demand with strictly increasing pivots. Because pivots are leftmost, every row
with pivot > K has support above K, so membership, tails Y/M and intersections
with finite-dimensional subspaces are all decided from a finite prefix.

Streams are built from FamilyPreset descriptions. Presets are immutable and
replayable; a SubspaceStream is a single-owner cursor over one of them.
"""

import heapq
import itertools
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, ClassVar, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from typing_extensions import TypeAlias

from madvec.config import FUEL
from madvec.echelon import (
    EchelonBasis,
    EchelonBuilder,
    in_span,
    intersect,
    rref,
    window,
)
from madvec.errors import (
    CanonicalizationError,
    MalformedPresetError,
    StreamExhaustedError,
    ZeroVectorError,
)
from madvec.field import FieldScalar, FieldSpec
from madvec.vectors import SparseVector, is_block_sequence

logger = logging.getLogger(__name__)

# (index, coefficient text) pairs, the field-independent form of a vector
TermList: TypeAlias = Tuple[Tuple[int, str], ...]
RowProducer: TypeAlias = Callable[[FieldSpec], Iterator[SparseVector]]


class SubspaceStream:
    """
    Reduced-echelon row stream of an infinite-dimensional subspace.

    Produced rows are cached, so indexing and prefix queries never re-run the
    cursor. Every new row is checked against the echelon invariants of the
    cached prefix before it becomes visible.
    """

    def __init__(
        self,
        spec: FieldSpec,
        cursor: Iterator[SparseVector],
        preset: Optional["FamilyPreset"] = None,
    ) -> None:
        self.spec = spec
        self.preset = preset
        self._cursor = cursor
        self._cache: List[SparseVector] = []
        self._exhausted = False

    def __repr__(self) -> str:
        label = self.preset.kind if self.preset is not None else "raw"
        return f"SubspaceStream({label}, {self.spec.name}, {len(self._cache)} rows cached)"

    @property
    def produced(self) -> Tuple[SparseVector, ...]:
        """Rows pulled so far."""
        return tuple(self._cache)

    def _accept(self, row: SparseVector) -> None:
        if row.spec != self.spec or row.is_zero:
            raise MalformedPresetError(f"Stream produced an invalid row {row!r}")
        if row.leading_coeff != self.spec.one():
            raise MalformedPresetError(f"Row {row!r} does not have a unit leading coefficient")
        if self._cache:
            if row.pivot <= self._cache[-1].pivot:
                raise MalformedPresetError(
                    f"Row {row!r} breaks the increasing pivot order "
                    f"after pivot {self._cache[-1].pivot}"
                )
            for previous in self._cache:
                if not row.coeff(previous.pivot).is_zero or not previous.coeff(row.pivot).is_zero:
                    raise MalformedPresetError(
                        f"Rows {previous!r} and {row!r} are not mutually reduced"
                    )
        self._cache.append(row)

    def _fill(self, count: int) -> None:
        while len(self._cache) < count:
            if self._exhausted:
                raise StreamExhaustedError(
                    f"Stream ended after {len(self._cache)} rows (finite-dimensional input)"
                )
            try:
                row = next(self._cursor)
            except StopIteration:
                self._exhausted = True
                logger.debug("Stream %r exhausted", self)
                continue
            FUEL.consume()
            self._accept(row)

    def row(self, index: int) -> SparseVector:
        """
        The index-th row of the reduced echelon basis.

        Raises:
            StreamExhaustedError: If the presentation is finite-dimensional and has fewer rows
        """
        self._fill(index + 1)
        return self._cache[index]

    def prefix(self, depth: int) -> EchelonBasis:
        """The first `depth` rows as an EchelonBasis."""
        self._fill(depth)
        return EchelonBasis(self.spec, tuple(self._cache[:depth]))

    def iter_rows(self) -> Iterator[SparseVector]:
        """Iterate over all rows, stopping cleanly if the presentation is finite."""
        for index in itertools.count():
            if index >= len(self._cache):
                try:
                    self._fill(index + 1)
                except StreamExhaustedError:
                    if self._exhausted:
                        return
                    raise
            yield self._cache[index]

    def rows_until_pivot_exceeds(self, K: int) -> EchelonBasis:
        """
        Rows with pivot <= K.

        Every row not returned has support disjoint from [0, K].
        """
        rows = []
        for row in self.iter_rows():
            if row.pivot > K:
                break
            rows.append(row)
        return EchelonBasis(self.spec, tuple(rows))

    def first_row_above(self, M: int) -> SparseVector:
        """
        First row with pivot > M.

        Raises:
            StreamExhaustedError: If no such row exists
        """
        for row in self.iter_rows():
            if row.pivot > M:
                return row
        raise StreamExhaustedError(f"No row with pivot above {M}")

    def replay(self) -> "SubspaceStream":
        """A fresh cursor over the same preset."""
        if self.preset is None:
            raise MalformedPresetError("Only preset-backed streams can be replayed")
        return make_stream(self.preset, self.spec)


class FamilyPreset(ABC):
    """Immutable description of a subspace presentation."""

    kind: ClassVar[str] = ""

    @abstractmethod
    def rows(self, spec: FieldSpec) -> Iterator[SparseVector]:
        """Produce the reduced echelon rows of the presented subspace."""

    def validate(self) -> None:
        """Raise MalformedPresetError if the description is inconsistent."""


def _terms_vector(spec: FieldSpec, terms: TermList) -> SparseVector:
    coords: Dict[int, FieldScalar] = {}
    for index, text in terms:
        if index < 0:
            raise MalformedPresetError(f"Negative index {index} in a preset vector")
        if index in coords:
            raise MalformedPresetError(f"Index {index} repeated in a preset vector")
        coords[index] = spec.parse(str(text))
    return SparseVector.from_mapping(spec, coords)


@dataclass(frozen=True)
class DiagonalResidue(FamilyPreset):
    """The diagonal subspace <e_n : n = r mod m>."""

    kind: ClassVar[str] = "diagonal-residue"
    r: int
    m: int

    def validate(self) -> None:
        if self.m < 1 or not 0 <= self.r < self.m:
            raise MalformedPresetError(
                f"diagonal-residue needs 0 <= r < m, got r={self.r}, m={self.m}"
            )

    def rows(self, spec: FieldSpec) -> Iterator[SparseVector]:
        for n in itertools.count(self.r, self.m):
            yield SparseVector.basis(spec, n)


def two_adic_valuation(n: int) -> int:
    """Exponent of 2 in n (n >= 1)."""
    if n < 1:
        raise ValueError(f"2-adic valuation needs a positive integer, got {n}")
    return (n & -n).bit_length() - 1


def _valuation_rule(params: Sequence[int]) -> Callable[[int], bool]:
    (k,) = params
    return lambda n: two_adic_valuation(n + 1) == k


def _residue_rule(params: Sequence[int]) -> Callable[[int], bool]:
    r, m = params
    return lambda n: n % m == r


def _arithmetic_rule(params: Sequence[int]) -> Callable[[int], bool]:
    start, step = params
    return lambda n: n >= start and (n - start) % step == 0


# Index-set rules for diagonal-indexset presets: name -> (arity, rule factory)
INDEX_RULES: Dict[str, Tuple[int, Callable[[Sequence[int]], Callable[[int], bool]]]] = {
    "valuation": (1, _valuation_rule),  # {n : val_2(n+1) = k}
    "residue": (2, _residue_rule),  # {n : n = r mod m}
    "arithmetic": (2, _arithmetic_rule),  # {start + i*step : i >= 0}
}


@dataclass(frozen=True)
class DiagonalIndexSet(FamilyPreset):
    """
    The diagonal subspace <e_n : n in I>.

    I is an infinite rule-described set, optionally enlarged by a finite head.
    """

    kind: ClassVar[str] = "diagonal-indexset"
    rule: str
    params: Tuple[int, ...]
    head: Tuple[int, ...] = ()

    def validate(self) -> None:
        if self.rule not in INDEX_RULES:
            raise MalformedPresetError(
                f"Unknown index rule '{self.rule}'. Known rules: {', '.join(sorted(INDEX_RULES))}"
            )
        arity, _ = INDEX_RULES[self.rule]
        if len(self.params) != arity:
            raise MalformedPresetError(f"Rule '{self.rule}' takes {arity} parameters")
        if self.rule == "valuation" and self.params[0] < 0:
            raise MalformedPresetError("Valuation index must be nonnegative")
        if self.rule == "residue" and not 0 <= self.params[0] < self.params[1]:
            raise MalformedPresetError("Residue rule needs 0 <= r < m")
        if self.rule == "arithmetic" and (self.params[0] < 0 or self.params[1] < 1):
            raise MalformedPresetError("Arithmetic rule needs start >= 0 and step >= 1")
        if any(n < 0 for n in self.head):
            raise MalformedPresetError("Head indices must be natural numbers")

    def contains(self, n: int) -> bool:
        _, factory = INDEX_RULES[self.rule]
        return n in self.head or factory(self.params)(n)

    def rows(self, spec: FieldSpec) -> Iterator[SparseVector]:
        _, factory = INDEX_RULES[self.rule]
        rule = factory(self.params)
        head = set(self.head)
        for n in itertools.count():
            if n in head or rule(n):
                yield SparseVector.basis(spec, n)


@dataclass(frozen=True)
class Pattern(FamilyPreset):
    """
    The block subspace spanned by u_n = sum_j c_j e_{m*n + o_j}, n >= start.

    Rows are normalized to leading coefficient 1.
    """

    kind: ClassVar[str] = "pattern"
    terms: TermList
    m: int
    start: int = 0

    def validate(self) -> None:
        if self.m < 1:
            raise MalformedPresetError(f"Pattern period must be positive, got {self.m}")
        if self.start < 0:
            raise MalformedPresetError("Pattern start must be a natural number")
        if not self.terms:
            raise MalformedPresetError("Pattern needs at least one term")
        offsets = [offset for offset, _ in self.terms]
        if len(set(offsets)) != len(offsets):
            raise MalformedPresetError("Pattern offsets must be distinct")
        if any(not 0 <= offset < self.m for offset in offsets):
            raise MalformedPresetError(f"Pattern offsets must lie in [0, {self.m})")

    def rows(self, spec: FieldSpec) -> Iterator[SparseVector]:
        base = _terms_vector(spec, self.terms)
        if base.is_zero:
            raise MalformedPresetError(f"Pattern has no nonzero coefficient over {spec}")
        base = base.normalized()
        for n in itertools.count(self.start):
            yield SparseVector(spec, tuple((self.m * n + i, c) for i, c in base.entries))


def branch_code(bits: str) -> int:
    """
    Pairing code of a finite binary string: 2^len(s) - 1 + int(s, 2).

    The empty string gets 0; strings of length n fill [2^n - 1, 2^(n+1) - 2].
    """
    if any(b not in "01" for b in bits):
        raise MalformedPresetError(f"'{bits}' is not a binary string")
    return (1 << len(bits)) - 1 + (int(bits, 2) if bits else 0)


@dataclass(frozen=True)
class PerfectBranch(FamilyPreset):
    """
    The subspace <e_code(x|n) : n >= 0> for the branch x = bits + cycle + cycle + ...

    Distinct branches share only their common initial segments, so these
    subspaces are pairwise almost disjoint.
    """

    kind: ClassVar[str] = "perfect-branch"
    bits: str
    cycle: str = "0"

    def validate(self) -> None:
        if any(b not in "01" for b in self.bits + self.cycle):
            raise MalformedPresetError("Branch bits must be binary")
        if not self.cycle:
            raise MalformedPresetError("Branch cycle must be nonempty")

    def branch(self) -> Iterator[str]:
        yield from self.bits
        yield from itertools.cycle(self.cycle)

    def rows(self, spec: FieldSpec) -> Iterator[SparseVector]:
        prefix = ""
        yield SparseVector.basis(spec, branch_code(prefix))
        for bit in self.branch():
            prefix += bit
            yield SparseVector.basis(spec, branch_code(prefix))


def _basis_blocks(spec: FieldSpec) -> Iterator[SparseVector]:
    for n in itertools.count():
        yield SparseVector.basis(spec, n)


def _pair_blocks(spec: FieldSpec) -> Iterator[SparseVector]:
    for n in itertools.count():
        yield SparseVector.from_indices(spec, (2 * n, 2 * n + 1))


def _interval_blocks(spec: FieldSpec) -> Iterator[SparseVector]:
    # block n is the sum over [n(n+1)/2, (n+1)(n+2)/2)
    for n in itertools.count():
        start = n * (n + 1) // 2
        yield SparseVector.from_indices(spec, range(start, start + n + 1))


def _shifted_pair_blocks(spec: FieldSpec) -> Iterator[SparseVector]:
    yield SparseVector.basis(spec, 0)
    for n in itertools.count():
        yield SparseVector.from_indices(spec, (2 * n + 1, 2 * n + 2))


# Registered block-sequence producers for block-from-generator presets
BLOCK_GENERATORS: Dict[str, RowProducer] = {
    "basis": _basis_blocks,  # e_0, e_1, ... (the whole space)
    "pairs": _pair_blocks,  # e_{2n} + e_{2n+1}
    "intervals": _interval_blocks,  # sums over consecutive intervals of growing length
    "shifted-pairs": _shifted_pair_blocks,  # e_0, then e_{2n+1} + e_{2n+2}
}


@dataclass(frozen=True)
class BlockFromGenerator(FamilyPreset):
    """The block subspace spanned by a registered block-sequence producer."""

    kind: ClassVar[str] = "block-from-generator"
    name: str

    def validate(self) -> None:
        if self.name not in BLOCK_GENERATORS:
            raise MalformedPresetError(
                f"Unknown block generator '{self.name}'. "
                f"Known generators: {', '.join(sorted(BLOCK_GENERATORS))}"
            )

    def rows(self, spec: FieldSpec) -> Iterator[SparseVector]:
        for row in BLOCK_GENERATORS[self.name](spec):
            yield row.normalized()


def _pair_sums_raw(spec: FieldSpec) -> Iterator[SparseVector]:
    yield SparseVector.from_indices(spec, (0, 1))
    for n in itertools.count(1):
        yield SparseVector.basis(spec, n)


def _repeated_raw(spec: FieldSpec) -> Iterator[SparseVector]:
    for n in itertools.count():
        yield SparseVector.basis(spec, n)
        yield SparseVector.basis(spec, n)


def _contaminated_evens_raw(spec: FieldSpec) -> Iterator[SparseVector]:
    yield SparseVector.from_indices(spec, (0, 1))
    for n in itertools.count(1):
        yield SparseVector.basis(spec, 2 * n)


def _sums_then_parts_raw(spec: FieldSpec) -> Iterator[SparseVector]:
    for n in itertools.count():
        yield SparseVector.from_indices(spec, (2 * n, 2 * n + 1))
        yield SparseVector.basis(spec, 2 * n + 1)


# Registered raw generating sequences for canonicalized presets
RAW_PRODUCERS: Dict[str, RowProducer] = {
    "pair-sums": _pair_sums_raw,  # e_0 + e_1, e_1, e_2, ...
    "repeated": _repeated_raw,  # every basis vector twice
    "contaminated-evens": _contaminated_evens_raw,  # e_0 + e_1, e_2, e_4, ...
    "sums-then-parts": _sums_then_parts_raw,  # e_{2n} + e_{2n+1}, then e_{2n+1}
}


@dataclass(frozen=True)
class Canonicalized(FamilyPreset):
    """The reduced echelon form of a registered raw generating sequence."""

    kind: ClassVar[str] = "canonicalized"
    name: str

    def validate(self) -> None:
        if self.name not in RAW_PRODUCERS:
            raise MalformedPresetError(
                f"Unknown raw producer '{self.name}'. "
                f"Known producers: {', '.join(sorted(RAW_PRODUCERS))}"
            )

    def rows(self, spec: FieldSpec) -> Iterator[SparseVector]:
        return _canonical_rows(RAW_PRODUCERS[self.name](spec), spec)


@dataclass(frozen=True)
class Tail(FamilyPreset):
    """Y/M: the vectors of the base subspace with support above M."""

    kind: ClassVar[str] = "tail"
    base: FamilyPreset
    M: int

    def validate(self) -> None:
        if self.M < -1:
            raise MalformedPresetError(f"Tail bound must be at least -1, got {self.M}")
        self.base.validate()

    def rows(self, spec: FieldSpec) -> Iterator[SparseVector]:
        for row in make_stream(self.base, spec).iter_rows():
            if row.pivot > self.M:
                yield row


@dataclass(frozen=True)
class Amended(FamilyPreset):
    """The span of finitely many extra vectors together with the base subspace."""

    kind: ClassVar[str] = "amended"
    head: Tuple[TermList, ...]
    base: FamilyPreset

    def validate(self) -> None:
        self.base.validate()

    def rows(self, spec: FieldSpec) -> Iterator[SparseVector]:
        head = [v for v in (_terms_vector(spec, terms) for terms in self.head) if not v.is_zero]
        merged = heapq.merge(
            sorted(head, key=lambda v: v.min_support),
            make_stream(self.base, spec).iter_rows(),
            key=lambda v: v.min_support,
        )
        return _canonical_rows(merged, spec)


@dataclass(frozen=True)
class Intersection(FamilyPreset):
    """
    A canonical block subspace of <left> and right.

    Each row is the first echelon row of left/M, right/M and <e_0..e_K> for the
    least K, where M is the largest support index of the previous row. The
    search gives up once K passes M + window.
    """

    kind: ClassVar[str] = "intersection"
    left: FamilyPreset
    right: FamilyPreset
    window: int = 64

    def validate(self) -> None:
        if self.window < 1:
            raise MalformedPresetError("Intersection window must be positive")
        self.left.validate()
        self.right.validate()

    def rows(self, spec: FieldSpec) -> Iterator[SparseVector]:
        left = make_stream(self.left, spec)
        right = make_stream(self.right, spec)
        M = -1
        while True:
            row = next_common_block(left, right, M, self.window)
            logger.debug("Intersection row %r above %d", row, M)
            yield row
            M = row.max_support


# Preset kinds by their JSON name
PRESET_KINDS: Dict[str, type] = {
    cls.kind: cls
    for cls in (
        DiagonalResidue,
        DiagonalIndexSet,
        Pattern,
        PerfectBranch,
        BlockFromGenerator,
        Canonicalized,
        Tail,
        Amended,
        Intersection,
    )
}


def make_stream(preset: FamilyPreset, spec: FieldSpec) -> SubspaceStream:
    """
    Instantiate a fresh cursor for a preset.

    Args:
        preset: Subspace description
        spec: Coefficient field

    Returns:
        SubspaceStream yielding the reduced echelon basis of the presented subspace

    Raises:
        MalformedPresetError: If the preset is inconsistent
    """
    if not isinstance(preset, FamilyPreset):
        raise MalformedPresetError(f"Not a family preset: {preset!r}")
    preset.validate()
    return SubspaceStream(spec, preset.rows(spec), preset)


def _canonical_rows(raw: Iterable[SparseVector], spec: FieldSpec) -> Iterator[SparseVector]:
    builder = EchelonBuilder(spec)
    emitted: List[SparseVector] = []
    floor = -1
    for vector in raw:
        FUEL.consume()
        if vector.is_zero:
            continue
        if vector.spec != spec:
            raise CanonicalizationError(
                f"Raw vector over {vector.spec} fed to a stream over {spec}"
            )
        floor = vector.min_support
        new_row = builder.insert(vector)
        if new_row is not None and emitted and new_row.pivot <= emitted[-1].pivot:
            raise CanonicalizationError(
                f"Input {vector!r} creates pivot {new_row.pivot} "
                f"below emitted pivot {emitted[-1].pivot}"
            )
        for row in emitted if emitted and floor <= emitted[-1].max_support else ():
            if builder.row_at(row.pivot) != row:
                raise CanonicalizationError(f"Input {vector!r} changes the emitted row {row!r}")
        # A row whose support lies below every future input can no longer change
        for row in builder.basis().rows:
            if emitted and row.pivot <= emitted[-1].pivot:
                continue
            if row.max_support >= floor:
                break
            emitted.append(row)
            yield row
    for row in builder.basis().rows:
        if not emitted or row.pivot > emitted[-1].pivot:
            emitted.append(row)
            yield row


def canonicalize(raw: Iterable[SparseVector], spec: FieldSpec) -> SubspaceStream:
    """
    Incremental reduced echelon form of a raw generating sequence.

    The minimum supports of the raw vectors must be nondecreasing. A row is
    emitted once its support lies below the minimum support of the latest
    input, since no later input can change it. Dependent inputs are absorbed.

    Args:
        raw: Generating vectors
        spec: Coefficient field

    Returns:
        SubspaceStream of the canonical rows; pulling past the end of a finite
        input raises StreamExhaustedError

    Raises:
        CanonicalizationError: If an input would alter a row already emitted
    """
    return SubspaceStream(spec, _canonical_rows(raw, spec))


def rows_until_pivot_exceeds(Y: SubspaceStream, K: int) -> EchelonBasis:
    """Rows of Y with pivot <= K; all other rows have support above K."""
    return Y.rows_until_pivot_exceeds(K)


def stream_member(x: SparseVector, Y: SubspaceStream) -> bool:
    """
    Exact membership x in Y.

    Any representation of x uses only rows with pivot <= max(supp(x)).

    Raises:
        ZeroVectorError: If x is zero
    """
    if x.is_zero:
        raise ZeroVectorError("Membership of the zero vector is not asked")
    return in_span(x, Y.rows_until_pivot_exceeds(x.max_support))


def tail_stream(Y: SubspaceStream, M: int) -> SubspaceStream:
    """
    Y/M, presented by the rows of Y with pivot > M.

    The tail shares the row cache of Y, so both belong to the same owner.
    """
    cursor = (row for row in Y.iter_rows() if row.pivot > M)
    preset = Tail(Y.preset, M) if Y.preset is not None else None
    return SubspaceStream(Y.spec, cursor, preset)


def intersect_with_stream(B: EchelonBasis, Y: SubspaceStream) -> EchelonBasis:
    """
    Exact span(B) and Y.

    Only rows of Y with pivot <= max support of B can contribute.
    """
    if B.dim == 0:
        return EchelonBasis.empty(B.spec)
    return intersect(B, Y.rows_until_pivot_exceeds(B.max_support))


def first_row_above(Y: SubspaceStream, M: int) -> SparseVector:
    return Y.first_row_above(M)


def block_subsequence(Y: SubspaceStream, length: int) -> Tuple[SparseVector, ...]:
    """
    A block sequence of rows of Y.

    Each chosen row has pivot above the largest support index of the previous one.
    """
    chosen: List[SparseVector] = []
    M = -1
    for _ in range(length):
        row = Y.first_row_above(M)
        chosen.append(row)
        M = row.max_support
    assert is_block_sequence(chosen)
    return tuple(chosen)


def next_common_block(
    X: SubspaceStream, Y: SubspaceStream, M: int, window_size: int
) -> SparseVector:
    """
    First echelon row of X/M, Y/M and <e_0..e_K> for the least K > M.

    Raises:
        StreamExhaustedError: If nothing is found with K <= M + window_size
    """
    for K in range(M + 1, M + window_size + 1):
        rows = [row for row in X.rows_until_pivot_exceeds(K).rows if row.pivot > M]
        if not rows:
            continue
        candidate = intersect(rref(rows, X.spec), window(X.spec, K))
        common = intersect_with_stream(candidate, Y)
        if common.dim:
            return common.rows[0]
    raise StreamExhaustedError(
        f"No common vector above {M} within a window of {window_size} coordinates"
    )
