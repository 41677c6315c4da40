"""Tests for the forcing conditions and their orders."""

import numpy as np
import pytest

from madvec.errors import DuplicatePairError, NotBlockSequenceError
from madvec.field import FieldSpec
from madvec.madlab import ADFamily
from madvec.posets import (
    MAPCondition,
    QCondition,
    map_add_member,
    map_common_extension,
    map_extend,
    map_leq,
    q_add_pair,
    q_amalgamate,
    q_extend_level,
    q_leq,
)
from madvec.streams import stream_member
from madvec.vectors import SparseVector
from tests.conftest import VectorFactory, random_block_sequence

GF2 = FieldSpec.prime(2)
GF3 = FieldSpec.prime(3)


class TestMAPCondition:
    """Test suite for (s, F) conditions."""

    def test_invariants(self, vec: VectorFactory) -> None:
        with pytest.raises(NotBlockSequenceError):
            MAPCondition((vec(2), vec(0)))
        with pytest.raises(ValueError):
            MAPCondition((SparseVector.from_mapping(GF3, {0: 2}),))

    def test_extend_avoids_members(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        p = MAPCondition((), frozenset({0, 1}))
        q = map_extend(p, triple_family)
        assert q.s == (vec(0, 1),)
        r = map_extend(q, triple_family)
        assert r.s == (vec(0, 1), vec(2, 3))
        assert map_leq(r, p, triple_family)
        for index in (0, 1):
            assert not any(stream_member(x, triple_family.stream(index)) for x in r.s)

    def test_extend_with_every_member(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        q = map_extend(MAPCondition((), frozenset({0, 1, 2})), triple_family)
        assert q.s == (vec(0, 3, 4, 5),)

    def test_extend_without_members(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        assert map_extend(MAPCondition(), triple_family).s == (vec(0),)

    def test_order(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        p = MAPCondition((), frozenset({0}))
        assert map_leq(p, p, triple_family)
        assert not map_leq(MAPCondition((vec(0),), frozenset({0})), p, triple_family)
        assert map_leq(MAPCondition((vec(1),), frozenset({0})), p, triple_family)
        assert not map_leq(MAPCondition((vec(1),)), p, triple_family)
        assert not map_leq(p, MAPCondition((vec(1),)), triple_family)
        with pytest.raises(ValueError):
            map_leq(MAPCondition((), frozenset({7})), p, triple_family)

    def test_add_member_and_common_extension(
        self, triple_family: ADFamily, vec: VectorFactory
    ) -> None:
        p = MAPCondition((vec(1),), frozenset({0}))
        q = map_add_member(p, 2, triple_family)
        assert q.F == frozenset({0, 2})
        assert map_leq(q, p, triple_family)
        r = map_common_extension(q, MAPCondition((vec(1),), frozenset({1})))
        assert r.F == frozenset({0, 1, 2})
        with pytest.raises(ValueError):
            map_add_member(p, 3, triple_family)
        with pytest.raises(ValueError):
            map_common_extension(p, MAPCondition((vec(3),)))

    def test_chains_descend(self, triple_family: ADFamily, rng: np.random.Generator) -> None:
        """Every condition of a chain of extensions lies below all earlier ones."""
        for _ in range(5):
            chain = [MAPCondition((), frozenset({int(rng.integers(3))}))]
            for _ in range(10):
                last = chain[-1]
                if rng.random() < 0.3:
                    chain.append(map_add_member(last, int(rng.integers(3)), triple_family))
                else:
                    chain.append(map_extend(last, triple_family))
            for later, q in enumerate(chain):
                assert all(map_leq(q, p, triple_family) for p in chain[:later])

    def test_same_s_is_compatible(self, triple_family: ADFamily, rng: np.random.Generator) -> None:
        """Conditions sharing s always have a common extension."""
        for _ in range(500):
            s = random_block_sequence(rng, GF2, int(rng.integers(0, 4)), 12)
            F, G = (frozenset(np.flatnonzero(rng.random(3) < 0.5).tolist()) for _ in range(2))
            p, q = MAPCondition(s, F), MAPCondition(s, G)
            r = map_common_extension(p, q)
            assert r.F == F | G
            assert map_leq(r, p, triple_family) and map_leq(r, q, triple_family)


def condition(n: int, rows: dict) -> QCondition:
    return QCondition.from_rows(GF2, n, rows)


class TestQCondition:
    """Test suite for table conditions."""

    def test_table_invariants(self, vec: VectorFactory) -> None:
        with pytest.raises(DuplicatePairError):
            QCondition(GF2, 1, ((("a", 0), (vec(0),)), (("a", 0), (vec(1),))))
        with pytest.raises(ValueError):
            QCondition(GF2, 1, ((("b", 0), (vec(0),)), (("a", 0), (vec(1),))))
        with pytest.raises(ValueError):
            condition(2, {("a", 0): (vec(0),)})
        with pytest.raises(NotBlockSequenceError):
            condition(2, {("a", 0): (vec(2), vec(0))})
        with pytest.raises(ValueError):
            condition(1, {("a", 0): (SparseVector.basis(GF3, 0),)})

    def test_accessors(self, vec: VectorFactory) -> None:
        p = condition(1, {("b", 0): (vec(2),), ("a", 3): (vec(0),), ("a", 1): (vec(1),)})
        assert p.labels() == ["a", "b"]
        assert p.betas("a") == [1, 3]
        assert p.row(("a", 3)) == (vec(0),)

    def test_order(self, vec: VectorFactory) -> None:
        p = condition(1, {("a", 0): (vec(0),), ("a", 1): (vec(1),)})
        shared = condition(2, {("a", 0): (vec(0), vec(2)), ("a", 1): (vec(1), vec(2))})
        assert not q_leq(shared, p)
        split = condition(2, {("a", 0): (vec(0), vec(2)), ("a", 1): (vec(1), vec(3))})
        assert q_leq(split, p)
        other = condition(1, {("a", 0): (vec(0),), ("b", 1): (vec(0),)})
        assert not q_leq(other, p)
        assert not q_leq(p, split)

    def test_labels_do_not_interact(self, vec: VectorFactory) -> None:
        p = condition(1, {("a", 0): (vec(0),), ("b", 0): (vec(1),)})
        q = condition(2, {("a", 0): (vec(0), vec(2)), ("b", 0): (vec(1), vec(2))})
        assert q_leq(q, p)
        assert q_extend_level(p, 0) == q

    def test_extend_level(self, vec: VectorFactory) -> None:
        p = condition(1, {("a", 0): (vec(0),), ("a", 1): (vec(1),)})
        q = q_extend_level(p, 3)
        assert q.rows() == {("a", 0): (vec(0), vec(4)), ("a", 1): (vec(1), vec(5))}
        assert q_leq(q, p)

    def test_extend_keeps_a_shared_line(self, vec: VectorFactory) -> None:
        p = condition(2, {("a", 0): (vec(0), vec(2)), ("a", 1): (vec(0), vec(3))})
        q = q_extend_level(p, 0)
        assert q.rows() == {("a", 0): (vec(0), vec(2), vec(4)), ("a", 1): (vec(0), vec(3), vec(5))}

    def test_random_extensions(self, rng: np.random.Generator) -> None:
        for _ in range(10):
            rows = {
                (label, beta): random_block_sequence(rng, GF3, 2, 20)
                for label in ("a", "b")
                for beta in range(int(rng.integers(1, 4)))
            }
            p = QCondition.from_rows(GF3, 2, rows)
            M = int(rng.integers(0, 30))
            q = q_extend_level(p, M)
            assert q.n == 3
            assert q_leq(q, p)
            assert all(row[-1].min_support > M for row in q.rows().values())

    def test_extend_level_width(self, vec: VectorFactory) -> None:
        p = condition(1, {("a", 0): (vec(0),), ("a", 1): (vec(1),)})
        q = q_extend_level(p, 3, width=2)
        assert q.rows() == {("a", 0): (vec(0), vec(4, 5)), ("a", 1): (vec(1), vec(6, 7))}
        assert q_leq(q, p)
        with pytest.raises(ValueError):
            q_extend_level(p, 3, width=0)

    def test_generated_conditions(self, rng: np.random.Generator) -> None:
        """Rows sharing a prefix keep exactly that intersection through every extension."""
        for _ in range(500):
            shared = random_block_sequence(rng, GF3, int(rng.integers(1, 3)), 6)
            n = len(shared) + int(rng.integers(1, 3))
            start = shared[-1].max_support + 1
            rows = {
                ("a", beta): shared
                + random_block_sequence(rng, GF3, n - len(shared), start + 20, start=start)
                for beta in range(3)
            }
            rows[("b", 0)] = random_block_sequence(rng, GF3, n, 40)
            p = QCondition.from_rows(GF3, n, rows)
            M = int(rng.integers(0, 30))
            q = q_extend_level(p, M, width=int(rng.integers(1, 4)))
            assert q.n == n + 1
            assert q_leq(q, p) and not q_leq(p, q)
            assert all(row[-1].min_support > M for row in q.rows().values())
            r = q_add_pair(q, ("c", 0))
            assert q_leq(r, q) and q_leq(r, p)

    def test_add_pair(self, vec: VectorFactory) -> None:
        p = condition(2, {("a", 0): (vec(0), vec(3))})
        q = q_add_pair(p, ("a", 1))
        assert q.row(("a", 1)) == (vec(0), vec(1))
        assert q_leq(q, p)
        with pytest.raises(DuplicatePairError):
            q_add_pair(q, ("a", 1))
        assert q_add_pair(QCondition(GF2), ("w", 0)).row(("w", 0)) == ()

    def test_amalgamate(self, vec: VectorFactory) -> None:
        p = condition(1, {("a", 0): (vec(0),)})
        q = condition(1, {("a", 1): (vec(1),), ("a", 0): (vec(0),)})
        r = q_amalgamate(p, q)
        assert r.pairs == {("a", 0), ("a", 1)}
        assert q_leq(r, p) and q_leq(r, q)
        with pytest.raises(ValueError):
            q_amalgamate(p, condition(1, {("a", 0): (vec(1),)}))
        with pytest.raises(ValueError):
            q_amalgamate(p, condition(2, {("a", 0): (vec(0), vec(1))}))
