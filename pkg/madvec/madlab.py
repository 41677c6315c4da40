#!/usr/bin/env python
"""
Almost-disjoint families of subspaces and the witnesses built from them.

An ADFamily is an ordered list of presets together with a certificate for
every pair. The enumeration order is part of the family: the diagonalization
below treats the first `length` members as the countable enumeration and the
remaining members as the others.

Every witness returned here has already passed its own recorded checks, and
verify_witness re-runs those checks from scratch.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd

from madvec.echelon import rref
from madvec.errors import (
    ChainDescentError,
    DominationError,
    MissingCertificateError,
    PreconditionViolation,
    VerificationError,
)
from madvec.extension import (
    ADCertificate,
    certificate_index,
    certify_pair,
    extend_avoiding_all,
    extend_bound,
    extend_disjoint_one,
    make_disjoint,
)
from madvec.field import FieldSpec
from madvec.streams import (
    DiagonalIndexSet,
    DiagonalResidue,
    FamilyPreset,
    Pattern,
    PerfectBranch,
    SubspaceStream,
    intersect_with_stream,
    make_stream,
    next_common_block,
    stream_member,
)
from madvec.vectors import SparseVector, is_block_sequence

logger = logging.getLogger(__name__)

HFunction = Union[Sequence[int], Callable[[int], int]]


@dataclass(frozen=True)
class ADFamily:
    """
    An indexed almost-disjoint family with its pairwise certificates.

    Attributes:
        spec: Coefficient field
        members: Presets in enumeration order
        certs: One certificate per unordered pair of members
    """

    spec: FieldSpec
    members: Tuple[FamilyPreset, ...]
    certs: Tuple[ADCertificate, ...] = ()

    @classmethod
    def build(cls, spec: FieldSpec, presets: Iterable[FamilyPreset], depth: int = 16) -> "ADFamily":
        """Certify every pair of members at the given depth."""
        members = tuple(presets)
        streams = [make_stream(preset, spec) for preset in members]
        certs = tuple(
            certify_pair(streams[i], streams[j], i, j, depth)
            for i, j in itertools.combinations(range(len(members)), 2)
        )
        logger.debug("Built family of %d members over %s", len(members), spec)
        return cls(spec, members, certs)

    def __len__(self) -> int:
        return len(self.members)

    def stream(self, index: int) -> SubspaceStream:
        if not 0 <= index < len(self.members):
            raise IndexError(f"Family has no member {index}")
        return make_stream(self.members[index], self.spec)

    def streams(self) -> List[SubspaceStream]:
        """Fresh cursors for every member."""
        return [make_stream(preset, self.spec) for preset in self.members]

    def certificate(self, i: int, j: int) -> ADCertificate:
        """
        Raises:
            MissingCertificateError: If the pair is not certified
        """
        cert = certificate_index(self.certs).get((min(i, j), max(i, j)))
        if i == j or cert is None:
            raise MissingCertificateError(f"No certificate for pair ({i}, {j})")
        return cert

    def restrict(self, count: int) -> "ADFamily":
        """The first `count` members with their certificates."""
        return ADFamily(
            self.spec,
            self.members[:count],
            tuple(c for c in self.certs if c.i < count and c.j < count),
        )


def triple_family_presets() -> List[FamilyPreset]:
    """Evens, odds and <e_2n + e_2n+1>: pairwise disjoint, but not independent."""
    return [
        DiagonalResidue(0, 2),
        DiagonalResidue(1, 2),
        Pattern(((0, "1"), (1, "1")), 2),
    ]


def two_adic_presets(count: int) -> List[FamilyPreset]:
    """Diagonals on A_k = {n : val_2(n+1) = k} for k < count."""
    return [DiagonalIndexSet("valuation", (k,)) for k in range(count)]


def residue_presets(m: int) -> List[FamilyPreset]:
    """The m residue-class diagonals modulo m."""
    return [DiagonalResidue(r, m) for r in range(m)]


def branch_presets(prefixes: Sequence[str], cycle: str = "0") -> List[FamilyPreset]:
    return [PerfectBranch(bits, cycle) for bits in prefixes]


# Built-in families offered by the CLI: name -> (description, preset builder)
NAMED_FAMILIES: Dict[str, Tuple[str, Callable[[], List[FamilyPreset]]]] = {
    "evens-odds-sums": ("evens, odds and pair sums", triple_family_presets),
    "two-adic": ("8 diagonals by 2-adic valuation of n+1", lambda: two_adic_presets(8)),
    "residues6": ("residue classes mod 6", lambda: residue_presets(6)),
    "residues8": ("residue classes mod 8", lambda: residue_presets(8)),
    "branches": (
        "8 branches of the binary tree",
        lambda: branch_presets(["1", "11", "101", "111", "1001", "1011", "1101", "1111"]),
    ),
}


def named_family(name: str, spec: FieldSpec, depth: int = 16) -> ADFamily:
    """
    Build one of the built-in families.

    Raises:
        ValueError: If the name is unknown
    """
    if name not in NAMED_FAMILIES:
        known = ", ".join(sorted(NAMED_FAMILIES))
        raise ValueError(f"Unknown family '{name}'. Known families: {known}")
    _, builder = NAMED_FAMILIES[name]
    return ADFamily.build(spec, builder(), depth)


@dataclass(frozen=True)
class WitnessCheck:
    """
    One check on a witness.

    kind "disjoint": span(xs[start:stop]) meets member k only in {0}.
    kind "line": span(xs[start:stop]) meets member k exactly in <xs[k]>.
    kind "member": xs[start] lies in member k.
    kind "chain": xs[start] lies in element k of the diagonalized chain.

    verify_witness also reports structural failures with k = -1 and one of the
    kinds "block", "kind", "checks", "support" or "above", or with k the member
    and kind "domination".
    """

    k: int
    kind: str
    start: int
    stop: int


@dataclass(frozen=True)
class Witness:
    """
    A block sequence with the checks that certify it.

    Attributes:
        kind: Construction that produced it
        xs: The block sequence
        checks: Checks against family members
        hits: (round, member) pairs of a diagonalization schedule
        h: The dominating table used, when there is one
        chain: Presets of the diagonalized chain, for p-diagonalize witnesses
    """

    kind: str
    xs: Tuple[SparseVector, ...]
    checks: Tuple[WitnessCheck, ...] = ()
    hits: Tuple[Tuple[int, int], ...] = ()
    h: Tuple[int, ...] = ()
    chain: Tuple[FamilyPreset, ...] = ()


WITNESS_KINDS: Tuple[str, ...] = (
    "nonmax-finite",
    "nonmax-countable",
    "diagonalize",
    "p-diagonalize",
)


def _finite_checks(length: int, size: int) -> Tuple[WitnessCheck, ...]:
    return tuple(
        WitnessCheck(k, "disjoint", 0, stop) for stop in range(1, length + 1) for k in range(size)
    )


def _countable_checks(length: int) -> Tuple[WitnessCheck, ...]:
    return tuple(
        WitnessCheck(k, "line", 0, stop) for stop in range(1, length + 1) for k in range(stop)
    )


def _diagonal_checks(length: int, size: int) -> Tuple[WitnessCheck, ...]:
    checks = [WitnessCheck(n, "member", n, n + 1) for n in range(length)]
    checks += [WitnessCheck(m, "disjoint", m + 1, length) for m in range(length - 1)]
    checks += [WitnessCheck(alpha, "disjoint", 1, length) for alpha in range(length, size)]
    return tuple(checks)


def _chain_checks(hits: Sequence[Tuple[int, int]], chain_length: int) -> Tuple[WitnessCheck, ...]:
    checks = []
    for m, member in hits:
        checks.append(WitnessCheck(member, "member", m, m + 1))
        checks += [
            WitnessCheck(position, "chain", m, m + 1)
            for position in range(min(m, chain_length - 1) + 1)
        ]
    return tuple(checks)


def required_checks(witness: Witness, fam: ADFamily) -> Optional[Tuple[WitnessCheck, ...]]:
    """
    The checks a witness must carry, derived from its kind, length and family.

    Returns:
        The required checks, or None when no witness of that kind can have this
        shape (unknown kind, too long for the family, malformed schedule)
    """
    length, size = len(witness.xs), len(fam)
    if witness.kind == "nonmax-finite":
        return _finite_checks(length, size)
    if witness.kind == "nonmax-countable":
        return _countable_checks(length) if length <= size else None
    if witness.kind == "diagonalize":
        return _diagonal_checks(length, size) if 1 <= length <= size else None
    if witness.kind == "p-diagonalize":
        rounds = [m for m, _ in witness.hits]
        if not witness.chain or rounds != list(range(length)):
            return None
        if not all(0 <= member < size for _, member in witness.hits):
            return None
        return _chain_checks(witness.hits, len(witness.chain))
    return None


def _run_check(check: WitnessCheck, xs: Sequence[SparseVector], Y: SubspaceStream) -> bool:
    if check.kind in ("member", "chain"):
        return check.start < len(xs) and stream_member(xs[check.start], Y)
    meet = intersect_with_stream(rref(list(xs[check.start : check.stop]), Y.spec), Y)
    if check.kind == "disjoint":
        return meet.dim == 0
    if check.kind == "line":
        return check.k < len(xs) and meet == rref([xs[check.k]], Y.spec)
    return False


def _domination_failure(
    fam: ADFamily, hf: Callable[[int], int], length: int, n: int, streams: List[SubspaceStream]
) -> Optional[Tuple[int, int]]:
    """The first (member, max(f, g)) with h(n) below max(f, g), if any."""
    for alpha in range(len(fam)):
        f = f_alpha(fam, alpha, n) if n < length and n != alpha else 0
        g = g_alpha(fam, alpha, n, streams[alpha])
        if hf(n) < max(f, g):
            return alpha, max(f, g)
    return None


def _diagonal_shape_failure(witness: Witness, fam: ADFamily) -> Optional[WitnessCheck]:
    xs, table = witness.xs, witness.h
    for n in range(len(xs) - 1):
        argument = max(xs[n].max_support, n + 1)
        if argument >= len(table) or not xs[n + 1].pivot > table[argument]:
            return WitnessCheck(-1, "above", n + 1, n + 2)
    streams = fam.streams()
    for n in range(len(table)):
        failure = _domination_failure(fam, lambda i: table[i], len(xs), n, streams)
        if failure is not None:
            return WitnessCheck(failure[0], "domination", n, n + 1)
    return None


def verify_witness(witness: Witness, fam: ADFamily) -> Optional[WitnessCheck]:
    """
    Re-check a witness from scratch.

    The carried checks must be exactly those required of its kind; each is then
    re-run against fresh streams, after the block ordering and the
    kind-specific support conditions.

    Returns:
        The first failing check, or None when all hold
    """
    xs = witness.xs
    if not is_block_sequence(xs):
        return WitnessCheck(-1, "block", 0, len(xs))
    if witness.kind not in WITNESS_KINDS:
        return WitnessCheck(-1, "kind", 0, len(xs))
    required = required_checks(witness, fam)
    if required is None or set(required) != set(witness.checks):
        return WitnessCheck(-1, "checks", 0, len(xs))
    if witness.kind == "diagonalize":
        failing = _diagonal_shape_failure(witness, fam)
        if failing is not None:
            return failing
    if witness.kind == "p-diagonalize":
        for m, x in enumerate(xs):
            if x.min_support < m:
                return WitnessCheck(-1, "support", m, m + 1)
    streams: Dict[Tuple[str, int], SubspaceStream] = {}
    for check in required:
        key = ("chain" if check.kind == "chain" else "member", check.k)
        if key not in streams:
            streams[key] = (
                make_stream(witness.chain[check.k], fam.spec)
                if check.kind == "chain"
                else fam.stream(check.k)
            )
        if not _run_check(check, xs, streams[key]):
            return check
    return None


def _checked(witness: Witness, fam: ADFamily, verify: bool) -> Witness:
    if not verify:
        return witness
    failing = verify_witness(witness, fam)
    if failing is not None:
        raise VerificationError(
            f"{witness.kind} witness fails its {failing.kind} check for member {failing.k}",
            check=failing.kind,
        )
    return witness


def witness_nonmax_finite(fam: ADFamily, length: int, *, verify: bool = True) -> Witness:
    """
    A block sequence whose span misses every member, at every prefix.

    The family is first made disjoint by passing to tails; each step is an
    application of extend_avoiding_all.
    """
    streams = fam.streams()
    tails = make_disjoint(fam.streams(), fam.certs)
    xs: List[SparseVector] = []
    for _ in range(length):
        xs.append(extend_avoiding_all(streams, xs, disjoint=tails, spec=fam.spec, verify=verify))
    checks = _finite_checks(length, len(fam))
    return _checked(Witness("nonmax-finite", tuple(xs), checks), fam, verify)


def witness_nonmax_countable(fam: ADFamily, length: int, *, verify: bool = True) -> Witness:
    """
    A block sequence with x_n in Y_n and span(x_0..x_m) meeting Y_n in <x_n>.

    The first `length` members are the enumeration; each step is an
    application of extend_disjoint_one that also keeps clear of the members
    still to come.
    """
    if length > len(fam):
        raise ValueError(f"Family has {len(fam)} members, cannot enumerate {length}")
    sub = fam.restrict(length)
    tails = make_disjoint(sub.streams(), sub.certs)
    xs: List[SparseVector] = []
    for n in range(length):
        _, x = extend_disjoint_one(tails[: n + 1], xs, also_avoid=tails[n + 1 :], verify=verify)
        xs.append(x)
    checks = _countable_checks(length)
    return _checked(Witness("nonmax-countable", tuple(xs), checks), fam, verify)


def f_alpha(fam: ADFamily, alpha: int, n: int) -> int:
    """
    Least k with the certified intersection of members alpha and n inside <e_0..e_k>.

    Raises:
        MissingCertificateError: If the pair is not certified
    """
    cert = fam.certificate(alpha, n)
    return 0 if cert.is_trivial else cert.bound


def g_alpha(fam: ADFamily, alpha: int, n: int, stream: Optional[SubspaceStream] = None) -> int:
    """The extension bound of member alpha at n."""
    return extend_bound(stream if stream is not None else fam.stream(alpha), n)


def domination_table(fam: ADFamily, length: int, upto: int) -> pd.DataFrame:
    """
    Tabulate f_alpha and g_alpha on [0, upto] and the canonical dominating h.

    f_alpha(n) is only defined for n in the enumeration (n < length, n != alpha)
    and counts as 0 elsewhere.

    Returns:
        DataFrame indexed by n with columns f_<alpha>, g_<alpha>, bound and h,
        where h is the running maximum of bound plus one
    """
    streams = fam.streams()
    columns: Dict[str, List[int]] = {}
    for alpha in range(len(fam)):
        columns[f"f_{alpha}"] = [
            f_alpha(fam, alpha, n) if n < min(length, len(fam)) and n != alpha else 0
            for n in range(upto + 1)
        ]
        columns[f"g_{alpha}"] = [g_alpha(fam, alpha, n, streams[alpha]) for n in range(upto + 1)]
    table = pd.DataFrame(columns, index=pd.RangeIndex(upto + 1, name="n"))
    table["bound"] = table.max(axis=1) if columns else 0
    table["h"] = table["bound"].cummax() + 1
    return table


def _as_function(h: HFunction) -> Callable[[int], int]:
    if callable(h):
        return h
    table = list(h)
    if any(a > b for a, b in zip(table, table[1:])):
        raise ValueError("The table of h must be nondecreasing")

    def lookup(n: int) -> int:
        if n >= len(table):
            raise DominationError(f"h is only tabulated on [0, {len(table) - 1}]", index=n)
        return table[n]

    return lookup


def diagonalize_under(fam: ADFamily, h: HFunction, length: int, *, verify: bool = True) -> Witness:
    """
    The h-dominated diagonal sequence through the first `length` members.

    x_0 is the first row of Y_0 and x_{n+1} the first row of Y_{n+1} above
    h(max(max supp x_n, n+1)). Domination of f_alpha and g_alpha by h is
    checked on every argument used. The result records, for each member m of
    the enumeration, that span(x_{m+1}, ...) misses Y_m, and for every other
    member that span(x_1, ...) misses it.

    Raises:
        ValueError: If length exceeds the family size
        DominationError: If h fails to dominate at some index
        VerificationError: If a case check fails
    """
    if not 1 <= length <= len(fam):
        raise ValueError(f"Need 1 <= length <= {len(fam)}, got {length}")
    hf = _as_function(h)
    streams = fam.streams()
    checked_upto = -1

    def dominate_through(R: int) -> None:
        nonlocal checked_upto
        for n in range(checked_upto + 1, R + 1):
            failure = _domination_failure(fam, hf, length, n, streams)
            if failure is not None:
                alpha, bound = failure
                raise DominationError(
                    f"h({n}) = {hf(n)} is below max(f, g) = {bound} for member {alpha}",
                    index=n,
                    member=alpha,
                )
        checked_upto = max(checked_upto, R)

    xs = [streams[0].row(0)]
    for n in range(length - 1):
        argument = max(xs[-1].max_support, n + 1)
        dominate_through(argument)
        xs.append(streams[n + 1].first_row_above(hf(argument)))
        logger.debug("Diagonal step %d: h(%d) = %d, next %r", n + 1, argument, hf(argument), xs[-1])
    table = tuple(hf(n) for n in range(checked_upto + 1))
    witness = Witness("diagonalize", tuple(xs), _diagonal_checks(length, len(fam)), h=table)
    return _checked(witness, fam, verify)


@dataclass(frozen=True)
class HWitness:
    """Independent vectors of <X> lying in one member."""

    member: int
    vectors: Tuple[SparseVector, ...]


@dataclass(frozen=True)
class HMembershipCertificate:
    """
    Finite evidence that a block sequence meets many members in large subspaces.

    Attributes:
        depth: Requested number of members and of vectors per member
        witnesses: Members found, each with `depth` independent vectors
        complete: Whether `depth` members were found
    """

    depth: int
    witnesses: Tuple[HWitness, ...] = field(default_factory=tuple)
    complete: bool = False

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(w.member for w in self.witnesses)


def in_H(
    X: Sequence[SparseVector], fam: ADFamily, depth: int, *, stop_early: bool = True
) -> HMembershipCertificate:
    """
    Look for `depth` members each meeting <X> in at least `depth` dimensions.

    Args:
        X: Finite prefix of a block sequence
        fam: Family to scan in order
        depth: Required number of members and dimension
        stop_early: Stop once `depth` members are found

    Returns:
        Certificate with the evidence found; `complete` tells whether it suffices
    """
    if depth == 0:
        return HMembershipCertificate(0, (), True)
    span = rref(list(X), fam.spec)
    found: List[HWitness] = []
    for index, Y in enumerate(fam.streams()):
        meet = intersect_with_stream(span, Y)
        if meet.dim >= depth:
            found.append(HWitness(index, meet.rows[:depth]))
            if stop_early and len(found) == depth:
                break
    return HMembershipCertificate(depth, tuple(found), len(found) >= depth)


def verify_h_certificate(
    cert: HMembershipCertificate, X: Sequence[SparseVector], fam: ADFamily
) -> bool:
    """Check every vector of the certificate against <X> and its member."""
    members = cert.members
    if len(set(members)) != len(members):
        return False
    if cert.complete and len(members) < cert.depth:
        return False
    span = rref(list(X), fam.spec)
    for witness in cert.witnesses:
        if len(witness.vectors) < cert.depth:
            return False
        if rref(list(witness.vectors), fam.spec).dim != len(witness.vectors):
            return False
        Y = fam.stream(witness.member)
        for v in witness.vectors:
            if rref(list(span.rows) + [v], fam.spec).dim != span.dim or not stream_member(v, Y):
                return False
    return True


def in_Abar(X: Sequence[SparseVector], fam: ADFamily) -> Optional[int]:
    """Index of the first member containing every vector of X, or None."""
    for index, Y in enumerate(fam.streams()):
        if all(stream_member(x, Y) for x in X):
            return index
    return None


def _check_descent(chain: Sequence[SubspaceStream], scan: int) -> None:
    for position in range(1, len(chain)):
        for row in chain[position].prefix(scan).rows:
            if not stream_member(row, chain[position - 1]):
                raise ChainDescentError(
                    f"Row {row!r} of chain member {position} is not in member {position - 1}",
                    position=position,
                    row=row,
                )


def p_diagonalize(
    chain: Sequence[FamilyPreset],
    fam: ADFamily,
    length: int,
    *,
    working_depth: int = 3,
    scan: int = 32,
    window: int = 64,
    verify: bool = True,
) -> Witness:
    """
    Diagonalize a descending chain X_0 >= X_1 >= ... of members of H(fam).

    The chain is continued by its last element. For each m the members found by
    in_H for X_m are the targets, and x_m is the first common block of X_m and
    target m mod (number of targets) above max(max supp x_{m-1}, m-1). Hence
    min supp x_m >= m and x_m lies in X_n for every n <= m.

    Args:
        chain: Presets of X_0, X_1, ...
        fam: Family
        length: Number of vectors
        working_depth: Depth of the in_H certificates
        scan: Rows of each X_m inspected for descent and for in_H
        window: Search window of the common-block search
        verify: Re-check the result, including membership in every chain element

    Raises:
        ChainDescentError: If the chain does not descend on the scanned rows
        PreconditionViolation: If some X_m has no complete in_H certificate
    """
    if not chain:
        raise ValueError("The chain must be nonempty")
    streams = [make_stream(preset, fam.spec) for preset in chain]
    _check_descent(streams, scan)
    members = fam.streams()
    targets: List[Tuple[int, ...]] = []
    for position, X in enumerate(streams):
        cert = in_H(X.prefix(scan).rows, fam, working_depth, stop_early=False)
        if not cert.complete:
            raise PreconditionViolation(
                f"Chain member {position} is not certified in H at depth {working_depth}",
                k=position,
            )
        targets.append(cert.members)
    xs: List[SparseVector] = []
    hits: List[Tuple[int, int]] = []
    for m in range(length):
        position = min(m, len(streams) - 1)
        selected = targets[position]
        member = selected[m % len(selected)]
        M = max(xs[-1].max_support if xs else -1, m - 1)
        x = next_common_block(streams[position], members[member], M, window)
        xs.append(x)
        hits.append((m, member))
    checks = _chain_checks(hits, len(chain))
    witness = Witness("p-diagonalize", tuple(xs), checks, hits=tuple(hits), chain=tuple(chain))
    return _checked(witness, fam, verify)
