#!/usr/bin/env python
"""
Engines for the Gowers game G[X] and the asymptotic game F[X].

In G[X] player I plays a block subspace of X (a preset whose rows lie in X)
and II answers with a vector of that subspace. In F[X] player I plays an
integer n and II answers with a vector of X supported above n. In both games
II's vectors must form a block sequence, which is the outcome.

Plays are truncated to a fixed number of rounds. The engine validates every
move, and replay re-validates a finished transcript from scratch.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from madvec.errors import IllegalMoveError, MadvecError, PreconditionViolation
from madvec.field import FieldSpec
from madvec.madlab import ADFamily, in_H
from madvec.streams import (
    FamilyPreset,
    Intersection,
    SubspaceStream,
    Tail,
    make_stream,
    next_common_block,
    stream_member,
)
from madvec.vectors import SparseVector

logger = logging.getLogger(__name__)

MoveI = Union[FamilyPreset, int]

# Rows of an offered subspace that are checked to lie in the arena
OFFER_SCAN = 8


class GameKind(Enum):
    """Enum of the supported games."""

    GOWERS = "gowers"
    ASYMPTOTIC = "asymptotic"


class Player(Enum):
    I = "I"
    II = "II"


@dataclass(frozen=True)
class Round:
    """One alternation: I's move and II's answering vector."""

    move_i: MoveI
    move_ii: SparseVector


@dataclass(frozen=True)
class GameTranscript:
    """
    A validated finite play.

    Attributes:
        kind: Which game was played
        spec: Coefficient field
        arena: Preset of the subspace X the game is played below
        rounds: Moves in order
    """

    kind: GameKind
    spec: FieldSpec
    arena: FamilyPreset
    rounds: Tuple[Round, ...] = ()

    @property
    def outcome(self) -> Tuple[SparseVector, ...]:
        """II's vectors, a block sequence."""
        return tuple(r.move_ii for r in self.rounds)


@dataclass
class GamePosition:
    """
    What a strategy sees before moving.

    Attributes:
        kind: Which game is played
        spec: Coefficient field
        arena: Stream of X
        rounds: Completed rounds
        move_i: I's move in the current round (for II only)
        offer: Stream of I's subspace in the current Gowers round (for II only)
    """

    kind: GameKind
    spec: FieldSpec
    arena: SubspaceStream
    rounds: Tuple[Round, ...]
    move_i: Optional[MoveI] = None
    offer: Optional[SubspaceStream] = None

    @property
    def round_index(self) -> int:
        return len(self.rounds)

    @property
    def floor(self) -> int:
        """Largest support index of II's last vector, or -1."""
        return self.rounds[-1].move_ii.max_support if self.rounds else -1


class Strategy(ABC):
    """A deterministic rule choosing the next move for one player."""

    player: Player

    @abstractmethod
    def move(self, position: GamePosition) -> Union[MoveI, SparseVector]:
        """Return the next move for the position."""

    def __str__(self) -> str:
        return type(self).__name__


class GameEngine:
    """
    Referee for one play: keeps the position and rejects illegal moves.

    Raises IllegalMoveError naming the player, the round and the broken rule.
    """

    def __init__(
        self, kind: GameKind, arena: FamilyPreset, spec: FieldSpec, scan: int = OFFER_SCAN
    ) -> None:
        self.kind = kind
        self.spec = spec
        self.arena_preset = arena
        self.arena = make_stream(arena, spec)
        self.scan = scan
        self.rounds: List[Round] = []
        self._move_i: Optional[MoveI] = None
        self._offer: Optional[SubspaceStream] = None

    def position(self) -> GamePosition:
        return GamePosition(
            self.kind, self.spec, self.arena, tuple(self.rounds), self._move_i, self._offer
        )

    def _error(self, player: Player, rule: str, message: str) -> IllegalMoveError:
        return IllegalMoveError(
            f"Player {player.value}, round {len(self.rounds)}: {message}",
            player=player.value,
            round_index=len(self.rounds),
            rule=rule,
        )

    def submit_i(self, move: MoveI) -> None:
        if self._move_i is not None:
            raise self._error(Player.I, "turn", "I has already moved this round")
        if self.kind is GameKind.ASYMPTOTIC:
            if isinstance(move, bool) or not isinstance(move, int) or move < 0:
                raise self._error(Player.I, "integer", f"expected a natural number, got {move!r}")
            self._move_i = move
            return
        if not isinstance(move, FamilyPreset):
            raise self._error(Player.I, "subspace", f"expected a subspace preset, got {move!r}")
        try:
            offer = make_stream(move, self.spec)
            rows = offer.prefix(self.scan).rows
        except MadvecError as e:
            raise self._error(Player.I, "subspace", f"cannot present the offered subspace: {e}")
        for row in rows:
            if not stream_member(row, self.arena):
                raise self._error(Player.I, "subspace", f"offered row {row!r} is not in X")
        self._move_i = move
        self._offer = offer

    def submit_ii(self, move: SparseVector) -> None:
        if self._move_i is None:
            raise self._error(Player.II, "turn", "II cannot move before I")
        if not isinstance(move, SparseVector) or move.spec != self.spec or move.is_zero:
            raise self._error(Player.II, "vector", f"expected a nonzero vector over {self.spec}")
        if self.rounds and not self.rounds[-1].move_ii.max_support < move.min_support:
            raise self._error(
                Player.II, "order", f"{move!r} does not come after the previous vector"
            )
        if self.kind is GameKind.GOWERS:
            assert self._offer is not None
            if not stream_member(move, self._offer):
                raise self._error(Player.II, "membership", f"{move!r} is not in I's subspace")
        else:
            assert isinstance(self._move_i, int)
            if not move.min_support > self._move_i:
                raise self._error(
                    Player.II, "above", f"{move!r} is not supported above {self._move_i}"
                )
            if not stream_member(move, self.arena):
                raise self._error(Player.II, "membership", f"{move!r} is not in X")
        self.rounds.append(Round(self._move_i, move))
        self._move_i = None
        self._offer = None

    def transcript(self) -> GameTranscript:
        return GameTranscript(self.kind, self.spec, self.arena_preset, tuple(self.rounds))


def play(
    kind: GameKind,
    X: SubspaceStream,
    strat_I: Strategy,
    strat_II: Strategy,
    rounds: int,
) -> GameTranscript:
    """
    Play `rounds` alternations with every move validated.

    Args:
        kind: Game to play
        X: Arena; must be backed by a preset
        strat_I: Strategy for I
        strat_II: Strategy for II
        rounds: Number of rounds

    Returns:
        The transcript; its outcome is a block sequence

    Raises:
        IllegalMoveError: If a strategy breaks a rule
    """
    if X.preset is None:
        raise ValueError("The arena must be presented by a preset")
    engine = GameEngine(kind, X.preset, X.spec)
    for _ in range(rounds):
        engine.submit_i(strat_I.move(engine.position()))  # type: ignore[arg-type]
        engine.submit_ii(strat_II.move(engine.position()))  # type: ignore[arg-type]
    logger.debug("Played %d rounds of %s: %s vs %s", rounds, kind.value, strat_I, strat_II)
    return engine.transcript()


@dataclass(frozen=True)
class ReplayReport:
    """Result of re-validating a transcript."""

    ok: bool
    round_index: Optional[int] = None
    player: Optional[str] = None
    rule: Optional[str] = None
    message: str = ""


def replay(transcript: GameTranscript) -> ReplayReport:
    """Re-check every move of a transcript against fresh streams."""
    engine = GameEngine(transcript.kind, transcript.arena, transcript.spec)
    try:
        for r in transcript.rounds:
            engine.submit_i(r.move_i)
            engine.submit_ii(r.move_ii)
    except IllegalMoveError as e:
        return ReplayReport(False, e.round_index, e.player, e.rule, str(e))
    return ReplayReport(True)


class ArenaStrategy(Strategy):
    """I in G[X]: always offer X itself."""

    player = Player.I

    def move(self, position: GamePosition) -> MoveI:
        assert position.arena.preset is not None
        return position.arena.preset


class CountingStrategy(Strategy):
    """I in F[X]: play n_k = k + offset."""

    player = Player.I

    def __init__(self, offset: int = 0) -> None:
        self.offset = offset

    def move(self, position: GamePosition) -> MoveI:
        return position.round_index + self.offset


class FirstRowStrategy(Strategy):
    """II in either game: the first legal row of the offered subspace or of X."""

    player = Player.II

    def move(self, position: GamePosition) -> SparseVector:
        if position.kind is GameKind.GOWERS:
            assert position.offer is not None
            return position.offer.first_row_above(position.floor)
        assert isinstance(position.move_i, int)
        return position.arena.first_row_above(max(position.floor, position.move_i))


class RandomLegalStrategy(Strategy):
    """
    A fuzzing opponent that makes random legal moves.

    I offers random tails of X or random integers; II plays one of the first
    legal rows, or the sum of two of them.
    """

    def __init__(self, player: Player, rng: np.random.Generator) -> None:
        self.player = player
        self.rng = rng

    def move(self, position: GamePosition) -> Union[MoveI, SparseVector]:
        if self.player is Player.I:
            if position.kind is GameKind.ASYMPTOTIC:
                return int(self.rng.integers(0, 2 * position.round_index + 4))
            assert position.arena.preset is not None
            if self.rng.random() < 0.5:
                return position.arena.preset
            return Tail(position.arena.preset, int(self.rng.integers(-1, 12)))
        if position.kind is GameKind.GOWERS:
            assert position.offer is not None
            source, bound = position.offer, position.floor
        else:
            assert isinstance(position.move_i, int)
            source, bound = position.arena, max(position.floor, position.move_i)
        first = source.first_row_above(bound + int(self.rng.integers(0, 3)))
        if self.rng.random() < 0.5:
            return first
        return first + source.first_row_above(first.max_support)


def _schedule(fam: ADFamily, X: SubspaceStream, working_depth: int, scan: int) -> Tuple[int, ...]:
    cert = in_H(X.prefix(scan).rows, fam, working_depth, stop_early=False)
    if not cert.complete:
        raise PreconditionViolation(
            f"Only {len(cert.witnesses)} members certified at working depth {working_depth}"
        )
    return cert.members


class IntoHStrategy(Strategy):
    """I in G[X]: offer a block subspace of X inside the member scheduled for the round."""

    player = Player.I

    def __init__(self, fam: ADFamily, schedule: Sequence[int], window: int) -> None:
        self.fam = fam
        self.schedule = tuple(schedule)
        self.window = window

    def member_for(self, round_index: int) -> int:
        return self.schedule[round_index % len(self.schedule)]

    def move(self, position: GamePosition) -> MoveI:
        assert position.arena.preset is not None
        member = self.fam.members[self.member_for(position.round_index)]
        return Intersection(position.arena.preset, member, self.window)


def strat_I_into_H(
    fam: ADFamily, X: SubspaceStream, *, working_depth: int = 3, scan: int = 32, window: int = 64
) -> IntoHStrategy:
    """
    I's strategy in G[X] driving the outcome into H(fam).

    The members certified by in_H on the first `scan` rows of X are offered in
    turn: round n offers a block subspace of <X> and member s(n), with s(n)
    cycling through the certified members.

    Raises:
        PreconditionViolation: If fewer than `working_depth` members are certified
    """
    return IntoHStrategy(fam, _schedule(fam, X, working_depth, scan), window)


class FirstElementStrategy(Strategy):
    """II in F[X]: play the first vector of the scheduled member that is legal."""

    player = Player.II

    def __init__(
        self,
        fam: ADFamily,
        schedule: Optional[Sequence[int]] = None,
        *,
        working_depth: int = 3,
        scan: int = 32,
        window: int = 64,
    ) -> None:
        self.fam = fam
        self.schedule = tuple(schedule) if schedule is not None else None
        self.working_depth = working_depth
        self.scan = scan
        self.window = window
        self._members = fam.streams()

    def member_for(self, round_index: int) -> int:
        assert self.schedule is not None
        return self.schedule[round_index % len(self.schedule)]

    def move(self, position: GamePosition) -> SparseVector:
        if self.schedule is None:
            self.schedule = _schedule(self.fam, position.arena, self.working_depth, self.scan)
        assert isinstance(position.move_i, int)
        bound = max(position.floor, position.move_i)
        Y = self._members[self.member_for(position.round_index)]
        candidate = Y.first_row_above(bound)
        if stream_member(candidate, position.arena):
            return candidate
        return next_common_block(position.arena, Y, bound, self.window)


def strat_II_first_element(
    fam: ADFamily, *, working_depth: int = 3, scan: int = 32, window: int = 64
) -> FirstElementStrategy:
    """
    II's strategy in F[X]: round n plays the first row of member s(n) above every
    constraint, or the first common block of X and that member when the row is not in X.

    The schedule is fixed on the first move from an in_H certificate of the arena.
    """
    return FirstElementStrategy(fam, working_depth=working_depth, scan=scan, window=window)


class ConstantOfferStrategy(Strategy):
    """I in G[X]: always offer the same block subspace of X and one member."""

    player = Player.I

    def __init__(self, member: FamilyPreset, window: int) -> None:
        self.member = member
        self.window = window

    def move(self, position: GamePosition) -> MoveI:
        assert position.arena.preset is not None
        return Intersection(position.arena.preset, self.member, self.window)


class InsideMemberStrategy(Strategy):
    """II in F[X]: always answer with a common block of X and one member."""

    player = Player.II

    def __init__(self, member: FamilyPreset, spec: FieldSpec, window: int) -> None:
        self.Y = make_stream(member, spec)
        self.window = window

    def move(self, position: GamePosition) -> SparseVector:
        assert isinstance(position.move_i, int)
        M = max(position.floor, position.move_i)
        return next_common_block(position.arena, self.Y, M, self.window)


def strat_pair_into_Abar(
    Y_index: int, fam: ADFamily, *, window: int = 64
) -> Tuple[ConstantOfferStrategy, InsideMemberStrategy]:
    """
    Strategies keeping every outcome vector inside member Y_index.

    Returns:
        (I's strategy in G[X], II's strategy in F[X])
    """
    member = fam.members[Y_index]
    return ConstantOfferStrategy(member, window), InsideMemberStrategy(member, fam.spec, window)


# Built-in strategies by CLI name: name -> (player, games, description)
STRATEGY_NAMES: Dict[str, Tuple[Player, Tuple[GameKind, ...], str]] = {
    "arena": (Player.I, (GameKind.GOWERS,), "offer X itself"),
    "counting": (Player.I, (GameKind.ASYMPTOTIC,), "play n_k = k"),
    "first-row": (Player.II, (GameKind.GOWERS, GameKind.ASYMPTOTIC), "first legal row"),
    "into-h": (Player.I, (GameKind.GOWERS,), "offer subspaces of scheduled members"),
    "first-element": (Player.II, (GameKind.ASYMPTOTIC,), "first row of the scheduled member"),
    "abar": (Player.I, (GameKind.GOWERS,), "offer subspaces of one member (needs --member)"),
    "abar-ii": (Player.II, (GameKind.ASYMPTOTIC,), "answer inside one member (needs --member)"),
    "random-i": (Player.I, (GameKind.GOWERS, GameKind.ASYMPTOTIC), "random legal moves (seeded)"),
    "random-ii": (Player.II, (GameKind.GOWERS, GameKind.ASYMPTOTIC), "random legal moves (seeded)"),
}


def build_strategy(
    name: str,
    fam: Optional[ADFamily],
    X: SubspaceStream,
    *,
    member: Optional[int] = None,
    working_depth: int = 3,
    window: int = 64,
    rng_seed: Optional[int] = None,
) -> Strategy:
    """
    Instantiate a built-in strategy by name.

    Raises:
        ValueError: If the name is unknown or a needed family or member is missing
    """
    if name == "arena":
        return ArenaStrategy()
    if name == "counting":
        return CountingStrategy()
    if name == "first-row":
        return FirstRowStrategy()
    if name in ("random-i", "random-ii"):
        player = Player.I if name == "random-i" else Player.II
        return RandomLegalStrategy(player, np.random.default_rng(rng_seed))
    if name not in STRATEGY_NAMES:
        known = ", ".join(sorted(STRATEGY_NAMES))
        raise ValueError(f"Unknown strategy '{name}'. Known strategies: {known}")
    if fam is None:
        raise ValueError(f"Strategy '{name}' needs a family")
    if name == "into-h":
        return strat_I_into_H(fam, X, working_depth=working_depth, window=window)
    if name == "first-element":
        return strat_II_first_element(fam, working_depth=working_depth, window=window)
    if member is None:
        raise ValueError(f"Strategy '{name}' needs a member index")
    strat_i, strat_ii = strat_pair_into_Abar(member, fam, window=window)
    return strat_i if name == "abar" else strat_ii

