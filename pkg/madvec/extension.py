#!/usr/bin/env python
"""
Extension bounds and canonical next vectors for block sequences.

Given a subspace Y and a bound K on the supports of a block sequence, the
extension bound M makes the effect of any further vector x above M on the
intersection with Y predictable: nothing changes when x is outside Y, and
exactly <x> is added when x is inside. The operations here turn that bound into
canonical choices of next vectors and check their postconditions with the
exact finite oracle before returning.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from madvec.echelon import EchelonBasis, in_span, intersect, rref, sum_space
from madvec.errors import (
    MissingCertificateError,
    NotBlockSequenceError,
    PreconditionViolation,
    StreamExhaustedError,
    VerificationError,
)
from madvec.field import FieldSpec
from madvec.streams import SubspaceStream, intersect_with_stream, stream_member, tail_stream
from madvec.vectors import SparseVector, is_block_sequence

logger = logging.getLogger(__name__)

# How far past the bound extend_outside looks for a basis vector outside a single subspace
OUTSIDE_SEARCH_WINDOW = 256


@dataclass(frozen=True)
class ADCertificate:
    """
    Checkable evidence that Y_i and Y_j are almost disjoint.

    Attributes:
        i: First family index
        j: Second family index
        bound: c with the inspected intersection inside <e_0, ..., e_c> (0 when trivial)
        depth: Number of rows of each subspace that were intersected
        dim: Dimension of the inspected intersection
    """

    i: int
    j: int
    bound: int
    depth: int
    dim: int = 0

    @property
    def pair(self) -> Tuple[int, int]:
        return (self.i, self.j)

    @property
    def is_trivial(self) -> bool:
        return self.dim == 0


def _span(spec: FieldSpec, xs: Sequence[SparseVector]) -> EchelonBasis:
    return rref(list(xs), spec)


def _require_block(xs: Sequence[SparseVector]) -> None:
    if not is_block_sequence(xs):
        raise NotBlockSequenceError(f"Not a block sequence: {list(xs)!r}")


def _last_support(xs: Sequence[SparseVector]) -> int:
    return xs[-1].max_support if xs else -1


def certify_pair(
    Y_i: SubspaceStream, Y_j: SubspaceStream, i: int, j: int, depth: int
) -> ADCertificate:
    """
    Intersect the depth-row prefixes of two streams and record the bound.

    Args:
        Y_i: First subspace
        Y_j: Second subspace
        i: Family index of Y_i
        j: Family index of Y_j
        depth: Number of rows inspected on each side

    Returns:
        ADCertificate whose bound is the largest support index of the inspected intersection
    """
    meet = intersect(Y_i.prefix(depth), Y_j.prefix(depth))
    bound = meet.max_support if meet.dim else 0
    logger.debug("Pair (%d, %d) at depth %d: dim %d, bound %d", i, j, depth, meet.dim, bound)
    return ADCertificate(i, j, bound, depth, meet.dim)


def verify_certificate(cert: ADCertificate, Y_i: SubspaceStream, Y_j: SubspaceStream) -> bool:
    """Recompute the inspected intersection and compare it with the certificate."""
    meet = intersect(Y_i.prefix(cert.depth), Y_j.prefix(cert.depth))
    if meet.dim != cert.dim:
        return False
    return meet.dim == 0 or meet.max_support <= cert.bound


def extend_bound(Y: SubspaceStream, K: int) -> int:
    """
    The extension bound of Y for block sequences supported in [0, K].

    Returns:
        M = max(K, largest support index among rows with pivot <= K)
    """
    return max(K, Y.rows_until_pivot_exceeds(K).max_support)


def check_extension_dichotomy(
    Y: SubspaceStream, xs: Sequence[SparseVector], x: SparseVector
) -> bool:
    """
    Evaluate the extension dichotomy for one (xs, x) with the exact oracle.

    Returns:
        True iff span(xs, x) and Y meet in span(xs) and Y when x is outside Y,
        and in that plus <x> when x is inside Y
    """
    spec = Y.spec
    before = intersect_with_stream(_span(spec, xs), Y)
    after = intersect_with_stream(_span(spec, list(xs) + [x]), Y)
    if stream_member(x, Y):
        return after == sum_space(before, _span(spec, [x]))
    return after == before


def _line_checks(
    spec: FieldSpec,
    Ys: Sequence[SubspaceStream],
    xs: Sequence[SparseVector],
) -> Optional[int]:
    # index of the first Y_k whose intersection with span(xs) is not <xs[k]>
    span = _span(spec, xs)
    for k, Y in enumerate(Ys):
        meet = intersect_with_stream(span, Y)
        if meet != _span(spec, [xs[k]]):
            return k
    return None


def extend_disjoint_one(
    Ys: Sequence[SubspaceStream],
    xs: Sequence[SparseVector],
    *,
    floor: int = -1,
    also_avoid: Sequence[SubspaceStream] = (),
    verify: bool = True,
) -> Tuple[int, SparseVector]:
    """
    Extend a block sequence by a vector of the next subspace.

    With Ys = (Y_0, ..., Y_{n+1}) pairwise disjoint and xs = (x_0, ..., x_n)
    such that span(xs) meets Y_k in <x_k> (k <= n) and misses Y_{n+1}, the
    new vector is the first row of Y_{n+1} above the combined extension bound.

    Args:
        Ys: Subspaces, one more than xs
        xs: Current block sequence
        floor: Additional lower bound for the new vector's support
        also_avoid: Further subspaces that span(xs) misses and must keep missing
        verify: Re-check pre- and postconditions

    Returns:
        (M, x_next) with M the bound used

    Raises:
        PreconditionViolation: If the input does not satisfy the preconditions
        VerificationError: If the result fails its postcondition
    """
    if len(Ys) != len(xs) + 1:
        raise ValueError(
            f"Need exactly one more subspace than vectors, got {len(Ys)} and {len(xs)}"
        )
    spec = Ys[0].spec
    n = len(xs)
    if verify:
        _require_block(xs)
        bad = _line_checks(spec, Ys[:n], xs)
        if bad is not None:
            raise PreconditionViolation(
                f"span(xs) does not meet Y_{bad} in <x_{bad}>", k=bad, witness=xs[bad]
            )
        for k, Y in enumerate([Ys[n], *also_avoid]):
            meet = intersect_with_stream(_span(spec, xs), Y)
            if meet.dim:
                raise PreconditionViolation(
                    f"span(xs) meets subspace {n + k} nontrivially", k=n + k, witness=meet.rows[0]
                )
    K = _last_support(xs)
    M = max([K] + [extend_bound(Y, K) for Y in [*Ys, *also_avoid]])
    x_next = Ys[n].first_row_above(max(M, floor))
    logger.debug("Extension bound %d for K=%d, next vector %r", M, K, x_next)
    if verify:
        extended = list(xs) + [x_next]
        bad = _line_checks(spec, Ys, extended)
        if bad is not None:
            raise VerificationError(
                f"Extended sequence does not meet Y_{bad} in a line", check="line"
            )
        for Y in also_avoid:
            if intersect_with_stream(_span(spec, extended), Y).dim:
                raise VerificationError(
                    "Extended sequence meets an avoided subspace", check="disjoint"
                )
    return M, x_next


def _outside_single(Y: SubspaceStream, M: int) -> SparseVector:
    for j in range(M + 1, M + 1 + OUTSIDE_SEARCH_WINDOW):
        candidate = SparseVector.basis(Y.spec, j)
        if not stream_member(candidate, Y):
            return candidate
    raise PreconditionViolation(
        f"Every basis vector in ({M}, {M + OUTSIDE_SEARCH_WINDOW}] lies in the subspace"
    )


def extend_outside(
    Ys: Sequence[SubspaceStream],
    xs: Sequence[SparseVector],
    *,
    disjoint: Optional[Sequence[SubspaceStream]] = None,
    spec: Optional[FieldSpec] = None,
    verify: bool = True,
) -> SparseVector:
    """
    A vector above the extension bound that lies outside every Y_k.

    For two or more subspaces the vector is x'_0 + ... + x'_r, with the x'_i
    built one after another in the pairwise disjoint subspaces `disjoint`
    (tails of Ys; Ys itself when omitted). For one subspace it is the first
    basis vector above the bound outside it, and with none it is e_{M+1}.
    Adding the result leaves span(xs) and Y_k meeting in the same subspace.

    Raises:
        PreconditionViolation: If no vector outside a single subspace is found
        VerificationError: If the result fails its postcondition
    """
    if spec is None:
        if not xs and not Ys:
            raise ValueError("Need a field: pass a spec, a subspace or a vector")
        spec = Ys[0].spec if Ys else xs[0].spec
    if verify:
        _require_block(xs)
    K = _last_support(xs)
    M = max([K] + [extend_bound(Y, K) for Y in Ys])
    tails = list(disjoint) if disjoint is not None else list(Ys)
    if len(Ys) == 0:
        x = SparseVector.basis(spec, M + 1)
    elif len(Ys) == 1:
        x = _outside_single(Ys[0], M)
    else:
        parts: List[SparseVector] = []
        for i in range(len(tails)):
            _, part = extend_disjoint_one(
                tails[: i + 1], parts, floor=M, also_avoid=tails[i + 1 :], verify=verify
            )
            parts.append(part)
        x = parts[0]
        for part in parts[1:]:
            x = x + part
    logger.debug("Vector %r avoids %d subspaces above %d", x, len(Ys), M)
    if verify:
        before = _span(spec, xs)
        after = _span(spec, list(xs) + [x])
        for k, Y in enumerate(Ys):
            changed = intersect_with_stream(after, Y) != intersect_with_stream(before, Y)
            if stream_member(x, Y) or changed:
                raise VerificationError(
                    f"New vector changes the intersection with Y_{k}", check="outside"
                )
    return x


def extend_avoiding_all(
    Ys: Sequence[SubspaceStream],
    xs: Sequence[SparseVector],
    *,
    disjoint: Optional[Sequence[SubspaceStream]] = None,
    spec: Optional[FieldSpec] = None,
    verify: bool = True,
) -> SparseVector:
    """
    Extend a block sequence whose span misses every Y_k so that it keeps missing them.

    Raises:
        PreconditionViolation: If span(xs) meets some Y_k
        VerificationError: If the result fails its postcondition
    """
    if verify and xs:
        span = _span(xs[0].spec, xs)
        for k, Y in enumerate(Ys):
            meet = intersect_with_stream(span, Y)
            if meet.dim:
                raise PreconditionViolation(
                    f"span(xs) meets Y_{k} nontrivially", k=k, witness=meet.rows[0]
                )
    x = extend_outside(Ys, xs, disjoint=disjoint, spec=spec, verify=verify)
    if verify:
        span = _span(x.spec, list(xs) + [x])
        for k, Y in enumerate(Ys):
            if intersect_with_stream(span, Y).dim:
                raise VerificationError(f"Extended span meets Y_{k}", check="disjoint")
    return x


def certificate_index(certs: Iterable[ADCertificate]) -> Dict[Tuple[int, int], ADCertificate]:
    """Index certificates by unordered pair."""
    table: Dict[Tuple[int, int], ADCertificate] = {}
    for cert in certs:
        table[(min(cert.i, cert.j), max(cert.i, cert.j))] = cert
    return table


def make_disjoint(
    Ys: Sequence[SubspaceStream],
    certs: Union[Iterable[ADCertificate], Mapping[Tuple[int, int], ADCertificate]],
) -> List[SubspaceStream]:
    """
    Pass to tails that are pairwise disjoint at the certified depth.

    Returns:
        The streams unchanged when every certificate is trivial, otherwise the
        tails Y_k/c* with c* the largest nontrivial bound

    Raises:
        MissingCertificateError: If some pair has no certificate
    """
    table = certificate_index(certs.values() if isinstance(certs, Mapping) else certs)
    for i, j in itertools.combinations(range(len(Ys)), 2):
        if (i, j) not in table:
            raise MissingCertificateError(f"No almost-disjointness certificate for pair ({i}, {j})")
    bounds = [
        table[pair].bound
        for pair in itertools.combinations(range(len(Ys)), 2)
        if not table[pair].is_trivial
    ]
    if not bounds:
        return list(Ys)
    c_star = max(bounds)
    logger.debug("Passing to tails above %d", c_star)
    return [tail_stream(Y, c_star) for Y in Ys]


def cont_mod_finite_bound(
    X: SubspaceStream,
    Y: SubspaceStream,
    zs: Sequence[SparseVector],
    *,
    spot: int = 8,
) -> int:
    """
    Bound M with X/M inside the block subspace Y, given X inside Y + <zs>.

    Args:
        X: Subspace claimed to lie in Y + <zs>
        Y: Block subspace
        zs: Finite block sequence
        spot: Number of rows of X (and of X/M) that are checked

    Returns:
        M = max(0, N, largest support index of Y-rows with pivot <= N), N = max support of zs

    Raises:
        PreconditionViolation: If a spot-checked row of X is not in Y + <zs>
        VerificationError: If a checked row of X/M is not in Y
    """
    _require_block(zs)
    N = _last_support(zs)
    head = Y.rows_until_pivot_exceeds(N)
    M = max(0, N, head.max_support)
    following = Y.first_row_above(N)
    if not is_block_sequence(list(head.rows) + [following]):
        raise PreconditionViolation("Y is not presented by a block sequence", witness=following)
    for index in range(spot):
        x = X.row(index)
        ceiling = max(x.max_support, N)
        B = rref(list(Y.rows_until_pivot_exceeds(ceiling).rows) + list(zs), Y.spec)
        if not in_span(x, B):
            raise PreconditionViolation(f"Row {index} of X is not in Y + <zs>", k=index, witness=x)
    checked = 0
    for x in X.iter_rows():
        if checked == spot:
            break
        if x.pivot <= M:
            continue
        if not stream_member(x, Y):
            raise VerificationError(f"Row {x!r} of X/{M} is not in Y", check="tail")
        checked += 1
    if checked < spot:
        raise StreamExhaustedError(f"X has only {checked} rows above {M}")
    return M
