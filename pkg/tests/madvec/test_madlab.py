"""Tests for almost-disjoint families and their witnesses."""

from dataclasses import replace

import pytest

from madvec.echelon import contains, rref
from madvec.errors import (
    ChainDescentError,
    DominationError,
    MissingCertificateError,
    PreconditionViolation,
)
from madvec.field import FieldSpec
from madvec.madlab import (
    NAMED_FAMILIES,
    ADFamily,
    HMembershipCertificate,
    HWitness,
    Witness,
    WitnessCheck,
    diagonalize_under,
    domination_table,
    f_alpha,
    g_alpha,
    in_Abar,
    in_H,
    named_family,
    p_diagonalize,
    required_checks,
    verify_h_certificate,
    verify_witness,
    witness_nonmax_countable,
    witness_nonmax_finite,
)
from madvec.streams import BlockFromGenerator, DiagonalResidue, Tail, stream_member
from tests.conftest import VectorFactory

GF2 = FieldSpec.prime(2)
WHOLE_SPACE = BlockFromGenerator("basis")


class TestADFamily:
    """Test suite for ADFamily and the named families."""

    def test_triple_family_is_pairwise_disjoint(self, triple_family: ADFamily) -> None:
        assert len(triple_family) == 3
        assert len(triple_family.certs) == 3
        assert all(cert.is_trivial and cert.depth == 32 for cert in triple_family.certs)

    def test_triple_family_is_not_independent(self, triple_family: ADFamily) -> None:
        """Every row of the pair-sum member lies in evens + odds."""
        evens, odds, pairs = triple_family.streams()
        both = rref(list(evens.prefix(32).rows) + list(odds.prefix(32).rows), GF2)
        assert contains(both, pairs.prefix(32))

    def test_certificate_lookup(self, triple_family: ADFamily) -> None:
        assert triple_family.certificate(2, 0).pair == (0, 2)
        with pytest.raises(MissingCertificateError):
            triple_family.certificate(1, 1)
        with pytest.raises(IndexError):
            triple_family.stream(3)

    def test_restrict(self, residue6_family: ADFamily) -> None:
        sub = residue6_family.restrict(2)
        assert sub.members == (DiagonalResidue(0, 6), DiagonalResidue(1, 6))
        assert [cert.pair for cert in sub.certs] == [(0, 1)]

    def test_named_families(self) -> None:
        assert set(NAMED_FAMILIES) >= {"evens-odds-sums", "two-adic", "residues6", "branches"}
        assert len(named_family("residues8", GF2, depth=4)) == 8
        with pytest.raises(ValueError):
            named_family("nope", GF2)

    def test_branch_certificates_are_nontrivial(self) -> None:
        fam = named_family("branches", GF2, depth=8)
        assert fam.certificate(0, 1).bound == 2
        assert not any(cert.dim == 0 for cert in fam.certs)


class TestNonMaximalityWitnesses:
    """Test suite for the finite and countable witnesses."""

    def test_finite_witness_on_triple_family(
        self, triple_family: ADFamily, vec: VectorFactory
    ) -> None:
        witness = witness_nonmax_finite(triple_family, 4)
        assert witness.xs[0] == vec(0, 3, 4, 5)
        assert len(witness.xs) == 4
        assert len(witness.checks) == 12
        assert verify_witness(witness, triple_family) is None

    def test_finite_witness_on_residues(self, residue6_family: ADFamily) -> None:
        witness = witness_nonmax_finite(residue6_family, 12)
        assert verify_witness(witness, residue6_family) is None
        for Y in residue6_family.streams():
            assert not any(stream_member(x, Y) for x in witness.xs)

    def test_finite_witness_after_tails(self) -> None:
        fam = named_family("branches", GF2, depth=8)
        witness = witness_nonmax_finite(fam, 2)
        assert verify_witness(witness, fam) is None

    def test_countable_witness_on_residues(
        self, residue6_family: ADFamily, vec: VectorFactory
    ) -> None:
        witness = witness_nonmax_countable(residue6_family, 6)
        assert witness.xs == tuple(vec(n) for n in range(6))
        assert verify_witness(witness, residue6_family) is None

    def test_countable_witness_on_two_adic(self, two_adic_family: ADFamily) -> None:
        witness = witness_nonmax_countable(two_adic_family, 8)
        assert verify_witness(witness, two_adic_family) is None
        for n, x in enumerate(witness.xs):
            assert stream_member(x, two_adic_family.stream(n))

    def test_countable_needs_enough_members(self, triple_family: ADFamily) -> None:
        with pytest.raises(ValueError):
            witness_nonmax_countable(triple_family, 4)

    def test_tampered_witness_fails(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        witness = witness_nonmax_finite(triple_family, 2)
        swapped = Witness(witness.kind, (witness.xs[1], witness.xs[0]), witness.checks)
        assert verify_witness(swapped, triple_family).kind == "block"
        every_member = tuple(WitnessCheck(k, "disjoint", 0, 1) for k in range(3))
        inside = Witness(witness.kind, (vec(0),), every_member)
        assert verify_witness(inside, triple_family) == WitnessCheck(0, "disjoint", 0, 1)
        out_of_range = Witness(witness.kind, (vec(0),), (WitnessCheck(5, "member", 0, 1),))
        assert verify_witness(out_of_range, triple_family).kind == "checks"

    def test_checks_come_from_the_kind(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        """A witness cannot vouch for itself by leaving checks out."""
        witness = witness_nonmax_finite(triple_family, 3)
        assert required_checks(witness, triple_family) == witness.checks
        blank = replace(witness, checks=())
        assert verify_witness(blank, triple_family).kind == "checks"
        inside_evens = replace(witness, xs=(vec(0), vec(2)), checks=())
        assert verify_witness(inside_evens, triple_family).kind == "checks"
        fitted = replace(inside_evens, checks=required_checks(inside_evens, triple_family))
        assert verify_witness(fitted, triple_family) == WitnessCheck(0, "disjoint", 0, 1)
        dropped = replace(witness, checks=witness.checks[1:])
        assert verify_witness(dropped, triple_family).kind == "checks"

    def test_unknown_kind(self, triple_family: ADFamily) -> None:
        witness = witness_nonmax_finite(triple_family, 2)
        assert verify_witness(replace(witness, kind="finite"), triple_family).kind == "kind"

    def test_countable_witness_too_long(
        self, triple_family: ADFamily, residue6_family: ADFamily
    ) -> None:
        witness = witness_nonmax_countable(residue6_family, 4)
        assert required_checks(witness, triple_family) is None
        assert verify_witness(witness, triple_family).kind == "checks"

    def test_unchecked_construction(self, triple_family: ADFamily) -> None:
        witness = witness_nonmax_finite(triple_family, 2, verify=False)
        assert verify_witness(witness, triple_family) is None


class TestDiagonalization:
    """Test suite for the h-dominated diagonal sequence."""

    def test_f_and_g(self, triple_family: ADFamily) -> None:
        assert f_alpha(triple_family, 0, 1) == 0
        assert g_alpha(triple_family, 2, 2) == 3
        assert g_alpha(triple_family, 0, 4) == 4

    def test_domination_table(self, triple_family: ADFamily) -> None:
        table = domination_table(triple_family, 3, 5)
        assert table.index.name == "n"
        assert list(table["g_2"]) == [1, 1, 3, 3, 5, 5]
        assert list(table["h"]) == [2, 2, 4, 4, 6, 6]
        assert (table["h"] > table["bound"]).all()

    def test_diagonalize_with_table(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        h = list(domination_table(triple_family, 3, 5)["h"])
        witness = diagonalize_under(triple_family, h, 3)
        assert witness.xs == (vec(0), vec(3), vec(6, 7))
        assert witness.h == (2, 2, 4, 4)
        assert verify_witness(witness, triple_family) is None

    def test_diagonalize_with_function(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        witness = diagonalize_under(triple_family, lambda n: 2 * n + 2, 3)
        assert witness.xs == (vec(0), vec(5), vec(14, 15))
        assert witness.h == (2, 4, 6, 8, 10, 12)

    def test_domination_failures(self, triple_family: ADFamily) -> None:
        with pytest.raises(DominationError) as info:
            diagonalize_under(triple_family, [0, 0, 0, 0], 3)
        assert (info.value.index, info.value.member) == (0, 2)
        with pytest.raises(DominationError) as info:
            diagonalize_under(triple_family, [2, 2], 3)
        assert info.value.index == 2

    def test_bad_arguments(self, triple_family: ADFamily) -> None:
        with pytest.raises(ValueError):
            diagonalize_under(triple_family, [3, 2, 4], 2)
        with pytest.raises(ValueError):
            diagonalize_under(triple_family, [2, 2, 4], 0)

    def test_recorded_h_is_rechecked(self, triple_family: ADFamily) -> None:
        h = list(domination_table(triple_family, 3, 5)["h"])
        witness = diagonalize_under(triple_family, h, 3)
        zeros = replace(witness, h=(0, 0, 0, 0))
        assert verify_witness(zeros, triple_family).kind == "domination"
        short = replace(witness, h=(2,))
        assert verify_witness(short, triple_family).kind == "above"
        assert required_checks(replace(witness, xs=()), triple_family) is None


class TestHMembership:
    """Test suite for in_H, its certificates and in_Abar."""

    def test_complete_certificate(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        X = [vec(0), vec(1), vec(2), vec(3)]
        cert = in_H(X, triple_family, 2)
        assert cert.complete
        assert cert.members == (0, 1)
        assert verify_h_certificate(cert, X, triple_family)

    def test_incomplete_certificate(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        cert = in_H([vec(0), vec(2), vec(4)], triple_family, 2)
        assert not cert.complete
        assert cert.members == (0,)
        assert in_H([], triple_family, 0).complete

    def test_forged_certificate(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        X = [vec(0), vec(1), vec(2), vec(3)]
        forged = HMembershipCertificate(
            2, (HWitness(0, (vec(1), vec(3))), HWitness(1, (vec(1), vec(3)))), True
        )
        assert not verify_h_certificate(forged, X, triple_family)
        short = HMembershipCertificate(2, (HWitness(0, (vec(0), vec(2))),), True)
        assert not verify_h_certificate(short, X, triple_family)

    def test_in_abar(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        assert in_Abar([vec(0), vec(2)], triple_family) == 0
        assert in_Abar([vec(1)], triple_family) == 1
        assert in_Abar([vec(0, 1)], triple_family) == 2
        assert in_Abar([vec(0), vec(1)], triple_family) is None


class TestChainDiagonalization:
    """Test suite for p_diagonalize."""

    def test_whole_space(self, triple_family: ADFamily, vec: VectorFactory) -> None:
        witness = p_diagonalize([WHOLE_SPACE], triple_family, 4)
        assert witness.xs == (vec(0), vec(1), vec(2, 3), vec(4))
        assert witness.hits == ((0, 0), (1, 1), (2, 2), (3, 0))
        assert verify_witness(witness, triple_family) is None

    def test_descending_chain(self, triple_family: ADFamily) -> None:
        chain = [WHOLE_SPACE, Tail(WHOLE_SPACE, 3)]
        witness = p_diagonalize(chain, triple_family, 5)
        for m, x in enumerate(witness.xs):
            assert x.min_support >= m
            if m >= 1:
                assert x.min_support > 3

    def test_chain_must_descend(self, triple_family: ADFamily) -> None:
        with pytest.raises(ChainDescentError) as info:
            p_diagonalize([DiagonalResidue(0, 2), WHOLE_SPACE], triple_family, 2)
        assert info.value.position == 1

    def test_chain_members_must_be_certified(self, triple_family: ADFamily) -> None:
        with pytest.raises(PreconditionViolation):
            p_diagonalize([DiagonalResidue(0, 2)], triple_family, 2)
        with pytest.raises(ValueError):
            p_diagonalize([], triple_family, 2)

    def test_chain_is_carried_and_rechecked(self, triple_family: ADFamily) -> None:
        witness = p_diagonalize([WHOLE_SPACE], triple_family, 4)
        assert witness.chain == (WHOLE_SPACE,)
        assert verify_witness(replace(witness, chain=()), triple_family).kind == "checks"
        moved = replace(witness, hits=((0, 1), (1, 1), (2, 2), (3, 0)))
        assert verify_witness(moved, triple_family).kind == "checks"
        refitted = replace(moved, checks=required_checks(moved, triple_family))
        assert verify_witness(refitted, triple_family) == WitnessCheck(1, "member", 0, 1)
        narrower = replace(witness, chain=(Tail(WHOLE_SPACE, 3),))
        assert verify_witness(narrower, triple_family) == WitnessCheck(0, "chain", 0, 1)

    def test_unchecked_chain(self, triple_family: ADFamily) -> None:
        witness = p_diagonalize([WHOLE_SPACE], triple_family, 3, verify=False)
        assert verify_witness(witness, triple_family) is None
