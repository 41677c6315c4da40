"""Tests for reduced echelon form, membership and exact intersection."""

import itertools
from typing import FrozenSet, List, Sequence

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from madvec.echelon import (
    EchelonBasis,
    EchelonBuilder,
    contains,
    enumerate_span,
    finite_extend_bound,
    in_span,
    intersect,
    member,
    rref,
    sum_space,
    window,
)
from madvec.errors import SpecMismatchError
from madvec.field import FieldSpec
from madvec.vectors import SparseVector, combine_over
from tests.conftest import VectorFactory

GF2 = FieldSpec.prime(2)
GF3 = FieldSpec.prime(3)

ALL_GF2_5 = [
    SparseVector.from_indices(GF2, [i for i in range(5) if mask >> i & 1]) for mask in range(32)
]


def span_set(rows: Sequence[SparseVector]) -> FrozenSet[SparseVector]:
    """Brute-force span over GF(2)."""
    return frozenset(
        v for v in ALL_GF2_5 if any(_sums(subset) == v for subset in _subsets(rows))
    )


def _subsets(rows: Sequence[SparseVector]) -> List[Sequence[SparseVector]]:
    return [c for n in range(len(rows) + 1) for c in itertools.combinations(rows, n)]


def _sums(rows: Sequence[SparseVector]) -> SparseVector:
    return combine_over(GF2, [(GF2.one(), r) for r in rows])


gf3_rows = st.lists(
    st.dictionaries(st.integers(0, 7), st.integers(0, 2), max_size=4).map(
        lambda coords: SparseVector.from_mapping(GF3, coords)
    ),
    max_size=5,
)


class TestRref:
    """Test suite for rref and EchelonBuilder."""

    def test_example(self, vec: VectorFactory) -> None:
        basis = rref([vec(0, 1), vec(1, 2), vec(0, 2)])
        assert basis.rows == (vec(0, 2), vec(1, 2))
        assert basis.pivots == (0, 1)
        assert basis.is_valid()

    def test_zero_and_empty(self, vec: VectorFactory) -> None:
        assert rref([vec(), vec()]).dim == 0
        assert rref([], GF3).spec == GF3
        with pytest.raises(ValueError):
            rref([])

    def test_mixed_fields(self, vec: VectorFactory) -> None:
        with pytest.raises(SpecMismatchError):
            rref([vec(0), SparseVector.basis(GF3, 1)])

    def test_builder_reports_dependent_rows(self, vec: VectorFactory) -> None:
        builder = EchelonBuilder(GF2)
        assert builder.insert(vec(0, 3)) == vec(0, 3)
        assert builder.insert(vec(3)) == vec(3)
        assert builder.insert(vec(0)) is None
        assert builder.row_at(0) == vec(0)
        assert builder.dim == 2

    @given(gf3_rows)
    def test_canonical_and_order_independent(self, rows: List[SparseVector]) -> None:
        basis = rref(rows, GF3)
        assert basis.is_valid()
        assert rref(list(reversed(rows)), GF3) == basis
        assert rref(list(basis.rows), GF3) == basis
        assert all(in_span(r, basis) for r in rows)

    def test_random_gf5_matrices(self, rng: np.random.Generator, gf5: FieldSpec) -> None:
        for _ in range(20):
            matrix = rng.integers(0, 5, size=(4, 8))
            rows = [SparseVector.from_mapping(gf5, dict(enumerate(map(int, r)))) for r in matrix]
            basis = rref(rows)
            assert basis.dim == _rank_mod_p(matrix, 5)
            assert all(in_span(r, basis) for r in rows)


def _rank_mod_p(matrix: np.ndarray, p: int) -> int:
    m = matrix.copy() % p
    rank = 0
    for col in range(m.shape[1]):
        pivot = next((r for r in range(rank, m.shape[0]) if m[r, col]), None)
        if pivot is None:
            continue
        m[[rank, pivot]] = m[[pivot, rank]]
        m[rank] = (m[rank] * pow(int(m[rank, col]), -1, p)) % p
        for r in range(m.shape[0]):
            if r != rank and m[r, col]:
                m[r] = (m[r] - m[r, col] * m[rank]) % p
        rank += 1
    return rank


class TestMembership:
    """Test suite for member, in_span and contains."""

    def test_coordinates(self) -> None:
        basis = rref([SparseVector.from_mapping(GF3, {0: 1, 2: 1}), SparseVector.basis(GF3, 1)])
        x = SparseVector.from_mapping(GF3, {0: 2, 1: 1, 2: 2})
        assert member(x, basis) == (GF3.scalar(2), GF3.scalar(1))
        assert member(SparseVector.basis(GF3, 2), basis) is None

    def test_zero_has_zero_coordinates(self, vec: VectorFactory) -> None:
        basis = rref([vec(0, 1), vec(4)])
        assert member(vec(), basis) == (GF2.zero(), GF2.zero())

    def test_contains(self, vec: VectorFactory) -> None:
        big = rref([vec(0), vec(1), vec(2)])
        small = rref([vec(0, 2)])
        assert contains(big, small)
        assert not contains(small, big)
        assert contains(small, EchelonBasis.empty(GF2))

    def test_membership_matches_brute_force(self, rng: np.random.Generator) -> None:
        for _ in range(25):
            rows = [ALL_GF2_5[int(i)] for i in rng.integers(0, 32, size=3)]
            basis = rref(rows, GF2)
            expected = span_set(rows)
            assert frozenset(v for v in ALL_GF2_5 if in_span(v, basis)) == expected
            assert frozenset(enumerate_span(basis)) == expected


class TestIntersection:
    """Test suite for intersect and sum_space."""

    def test_example(self, vec: VectorFactory) -> None:
        U = rref([vec(0), vec(1)])
        V = rref([vec(0, 1), vec(2)])
        assert intersect(U, V).rows == (vec(0, 1),)
        assert sum_space(U, V).dim == 3

    def test_empty_side(self, vec: VectorFactory) -> None:
        assert intersect(rref([vec(0)]), EchelonBasis.empty(GF2)).dim == 0

    def test_mixed_fields(self, vec: VectorFactory) -> None:
        with pytest.raises(SpecMismatchError):
            intersect(rref([vec(0)]), rref([SparseVector.basis(GF3, 0)]))

    def test_exhaustive_gf2_5(self, rng: np.random.Generator) -> None:
        """Intersections agree with set intersection of enumerated spans."""
        for _ in range(40):
            left = [ALL_GF2_5[int(i)] for i in rng.integers(0, 32, size=3)]
            right = [ALL_GF2_5[int(i)] for i in rng.integers(0, 32, size=3)]
            meet = intersect(rref(left, GF2), rref(right, GF2))
            assert meet.is_valid()
            assert frozenset(enumerate_span(meet)) == span_set(left) & span_set(right)

    @settings(max_examples=50)
    @given(gf3_rows, gf3_rows)
    def test_dimension_formula(self, left: List[SparseVector], right: List[SparseVector]) -> None:
        U, V = rref(left, GF3), rref(right, GF3)
        meet = intersect(U, V)
        assert meet.dim + sum_space(U, V).dim == U.dim + V.dim
        assert contains(U, meet) and contains(V, meet)


class TestWindowsAndBounds:
    """Test suite for coordinate windows and finite extension bounds."""

    def test_window(self, vec: VectorFactory) -> None:
        assert window(GF2, 2).rows == (vec(0), vec(1), vec(2))
        assert window(GF2, -1).dim == 0

    def test_finite_extend_bound(self, vec: VectorFactory) -> None:
        basis = rref([vec(1, 9), vec(4, 5)])
        assert finite_extend_bound(basis, 0) == 0
        assert finite_extend_bound(basis, 2) == 9
        assert finite_extend_bound(EchelonBasis.empty(GF2), 3) == 3

    def test_bound_dichotomy(self, vec: VectorFactory) -> None:
        """Vectors above the bound add nothing to the window intersection or add only themselves."""
        basis = rref([vec(1, 9), vec(4, 5), vec(12)])
        K = 3
        M = finite_extend_bound(basis, K)
        head = intersect(window(GF2, K), basis)
        for x in (vec(10), vec(12), vec(11, 13)):
            assert x.min_support > M
            grown = intersect(rref(list(window(GF2, K).rows) + [x]), basis)
            if in_span(x, basis):
                assert grown == sum_space(head, rref([x]))
            else:
                assert grown == head

    def test_enumerate_span_needs_finite_field(self, rationals: FieldSpec) -> None:
        with pytest.raises(ValueError):
            list(enumerate_span(rref([SparseVector.basis(rationals, 0)])))
