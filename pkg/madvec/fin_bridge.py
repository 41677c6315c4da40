#!/usr/bin/env python
"""
FIN block combinatorics and the support bridge between block sequences of
vectors and block sequences of finite sets.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

import pandas as pd

from madvec.echelon import in_span, rref
from madvec.errors import DecompositionError, NotBlockSequenceError
from madvec.streams import SubspaceStream, block_subsequence
from madvec.vectors import SparseVector, is_block_sequence

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class FinBlock:
    """A nonempty finite set of naturals."""

    elements: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.elements:
            raise ValueError("FIN blocks are nonempty")
        if any(a >= b for a, b in zip(self.elements, self.elements[1:])):
            raise ValueError("FIN block elements must be strictly increasing")
        if self.elements[0] < 0:
            raise ValueError("FIN block elements are natural numbers")

    @classmethod
    def of(cls, elements: Iterable[int]) -> "FinBlock":
        return cls(tuple(sorted(set(elements))))

    @property
    def min(self) -> int:
        return self.elements[0]

    @property
    def max(self) -> int:
        return self.elements[-1]

    def as_set(self) -> FrozenSet[int]:
        return frozenset(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class FinBlockSeq:
    """A finite prefix of a block sequence a_0 < a_1 < ... in FIN."""

    blocks: Tuple[FinBlock, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.blocks, self.blocks[1:]):
            if a.max >= b.min:
                raise NotBlockSequenceError(f"Blocks {a.elements} and {b.elements} are not ordered")

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> "FinBlockSeq":
        return cls(tuple(FinBlock.of(block) for block in blocks))

    def __len__(self) -> int:
        return len(self.blocks)

    def union(self) -> FrozenSet[int]:
        return frozenset(itertools.chain.from_iterable(b.elements for b in self.blocks))


def fu_enum(A: FinBlockSeq, upto: int) -> Set[FinBlock]:
    """
    All finite unions of blocks among the first `upto` blocks of A.

    Returns:
        2^upto - 1 distinct sets (fewer when A is shorter)
    """
    blocks = A.blocks[:upto]
    unions: Set[FinBlock] = set()
    for size in range(1, len(blocks) + 1):
        for chosen in itertools.combinations(blocks, size):
            unions.add(FinBlock.of(itertools.chain.from_iterable(b.elements for b in chosen)))
    return unions


def _components(blocks: Sequence[FinBlock]) -> List[FrozenSet[int]]:
    parent: Dict[int, int] = {}

    def find(n: int) -> int:
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    for block in blocks:
        for n in block.elements:
            parent.setdefault(n, n)
        root = find(block.elements[0])
        for n in block.elements[1:]:
            parent[find(n)] = root
    groups: Dict[int, Set[int]] = {}
    for n in parent:
        groups.setdefault(find(n), set()).add(n)
    return sorted((frozenset(g) for g in groups.values()), key=min)


def fin_ad_report(A: FinBlockSeq, B: FinBlockSeq, cutoff: int) -> List[FinBlock]:
    """
    Every element of FU(A) and FU(B) all of whose elements are below cutoff.

    Such a set is a union of blocks of A below cutoff and of blocks of B below
    cutoff, so it is a union of connected components of those blocks that are
    covered by both sides. The list is complete.

    Returns:
        The common elements in sorted order
    """
    low_a = [b for b in A.blocks if b.max < cutoff]
    low_b = [b for b in B.blocks if b.max < cutoff]
    covered_a = frozenset(itertools.chain.from_iterable(b.elements for b in low_a))
    covered_b = frozenset(itertools.chain.from_iterable(b.elements for b in low_b))
    valid = [c for c in _components(low_a + low_b) if c <= covered_a and c <= covered_b]
    common = [
        FinBlock.of(itertools.chain.from_iterable(chosen))
        for size in range(1, len(valid) + 1)
        for chosen in itertools.combinations(valid, size)
    ]
    logger.debug("%d common components below %d", len(valid), cutoff)
    return sorted(common)


def supp_of_blockseq(X: Sequence[SparseVector]) -> FinBlockSeq:
    """
    The blockwise supports of a block sequence.

    Raises:
        NotBlockSequenceError: If X is not a block sequence
    """
    if not is_block_sequence(X):
        raise NotBlockSequenceError("Supports are taken of block sequences only")
    return FinBlockSeq(tuple(FinBlock.of(x.support()) for x in X))


def e_a(A: FinBlockSeq) -> FrozenSet[int]:
    """Union of the singleton blocks of A."""
    return frozenset(b.min for b in A.blocks if len(b) == 1)


@dataclass(frozen=True)
class BGAReport:
    """
    Finite report on the hypotheses about the sets E_A of a list of members.

    Attributes:
        depth: Window [0, depth) the report is computed on
        density: One row per member: singletons, density and missing count in the window
        overlaps: One row per pair: exact size of the intersection in the window
    """

    depth: int
    density: pd.DataFrame
    overlaps: pd.DataFrame


def bga_hypotheses(fams: Sequence[FinBlockSeq], depth: int) -> BGAReport:
    """
    Report E_A density and pairwise E_A overlaps on [0, depth).

    Coinfiniteness and finiteness of overlaps are not decided; the report
    gives the counts within the window.
    """
    windows = [frozenset(n for n in e_a(A) if n < depth) for A in fams]
    density = pd.DataFrame(
        {
            "member": range(len(fams)),
            "singletons": [len(w) for w in windows],
            "density": [len(w) / depth if depth else 0.0 for w in windows],
            "missing": [depth - len(w) for w in windows],
        }
    )
    rows = []
    for i, j in itertools.combinations(range(len(fams)), 2):
        overlap = len(windows[i] & windows[j])
        rows.append(
            {
                "i": i,
                "j": j,
                "overlap": overlap,
                "full_overlap": bool(overlap) and windows[i] == windows[j],
            }
        )
    overlaps = pd.DataFrame(rows, columns=["i", "j", "overlap", "full_overlap"])
    return BGAReport(depth, density, overlaps)


def lift_supp(X: Sequence[SparseVector], A: FinBlockSeq) -> Tuple[SparseVector, ...]:
    """
    Realize a FIN block sequence inside <X>.

    Each block of A must be a union of supports of vectors of X; the lifted
    vector is the sum of those vectors, so its support is exactly the block.

    Raises:
        NotBlockSequenceError: If X is not a block sequence
        DecompositionError: If a block is not a union of supports of X
    """
    supports = supp_of_blockseq(X)
    owner: Dict[int, int] = {}
    for index, block in enumerate(supports.blocks):
        for n in block.elements:
            owner[n] = index
    lifted = []
    for block in A.blocks:
        used = sorted({owner[n] for n in block.elements if n in owner})
        union = frozenset(itertools.chain.from_iterable(supports.blocks[i].elements for i in used))
        if union != block.as_set():
            raise DecompositionError(
                f"Block {list(block.elements)} is not a union of supports of X", block=block
            )
        y = X[used[0]]
        for i in used[1:]:
            y = y + X[i]
        lifted.append(y)
    return tuple(lifted)


def singleton_members(X: Sequence[SparseVector]) -> FrozenSet[int]:
    """The n in E_supp(X) for which e_n lies in <X> (all of them, when X is a block sequence)."""
    if not X:
        return frozenset()
    span = rref(list(X), X[0].spec)
    singletons = e_a(supp_of_blockseq(X))
    return frozenset(n for n in singletons if in_span(SparseVector.basis(span.spec, n), span))


def fin_family_from_streams(streams: Sequence[SubspaceStream], length: int) -> List[FinBlockSeq]:
    """
    Support images of block subspaces of the given streams.

    Streams whose first rows already form a block sequence use those rows;
    otherwise a block subsequence of rows is taken.
    """
    images = []
    for Y in streams:
        rows = Y.prefix(length).rows
        if not is_block_sequence(rows):
            rows = block_subsequence(Y, length)
        images.append(supp_of_blockseq(rows))
    return images
