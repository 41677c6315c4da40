#!/usr/bin/env python
"""
Command-line interface module for the madvec package.

Every subcommand reads JSON inputs, writes one JSON result (to --output or
stdout) and, when an output file or --manifest is given, a manifest with the
input and output digests. Exit codes: 0 on success, 1 when a verification
fails, 2 on malformed input or an exhausted search.
"""

import argparse
import hashlib
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional

from madvec import __version__, codec
from madvec.config import FUEL, RunConfiguration, load_configuration
from madvec.echelon import intersect, sum_space
from madvec.errors import (
    ChainDescentError,
    DominationError,
    IllegalMoveError,
    InputFormatError,
    MadvecError,
    VerificationError,
)
from madvec.extension import extend_bound
from madvec.field_config import get_display_info, get_supported_fields, is_field_supported
from madvec.fin_bridge import bga_hypotheses, fin_ad_report, fin_family_from_streams, lift_supp
from madvec.games import STRATEGY_NAMES, GameKind, build_strategy, play, replay
from madvec.madlab import (
    NAMED_FAMILIES,
    ADFamily,
    diagonalize_under,
    domination_table,
    in_Abar,
    in_H,
    named_family,
    p_diagonalize,
    witness_nonmax_countable,
    witness_nonmax_finite,
)
from madvec.posets import (
    map_add_member,
    map_extend,
    q_add_pair,
    q_amalgamate,
    q_extend_level,
)
from madvec.streams import intersect_with_stream, make_stream
from madvec.verify import verify_artifact

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION = 1
EXIT_INPUT = 2

# Errors reported with EXIT_VERIFICATION; every other MadvecError is EXIT_INPUT
VERIFICATION_ERRORS = (VerificationError, DominationError, ChainDescentError, IllegalMoveError)

# verify flags: flag name -> artifact it reads; certificates are checked through their family
VERIFY_TARGETS: Dict[str, str] = {
    "witness": "witness",
    "transcript": "game transcript",
    "certificate": "family (with certificates)",
    "condition": "forcing condition",
}


@dataclass(frozen=True)
class CommandResult:
    """Result payload of a subcommand with the files it read."""

    payload: Any
    inputs: List[str] = field(default_factory=list)
    exit_code: int = EXIT_OK


@dataclass(frozen=True)
class RunManifest:
    """
    Provenance of one run, written next to the result.

    Attributes:
        command: Subcommand path, e.g. "witness nonmax"
        field: Field name
        inputs: sha256 digest of every input file
        outputs: sha256 digest of every output
        version: madvec version
        created: UTC timestamp
    """

    command: str
    field: str
    inputs: Dict[str, str]
    outputs: Dict[str, str]
    version: str = __version__
    created: str = ""

    def to_json(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "field": self.field,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "version": self.version,
            "created": self.created,
        }


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_file(path: str) -> str:
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()


def parse_args(args: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Args:
        args: Optional list of command-line arguments to parse. If None, sys.argv is used.

    Returns:
        Namespace containing the parsed arguments
    """
    if args is None:
        args = sys.argv[1:]

    parser = argparse.ArgumentParser(
        description="Exact linear algebra for almost disjoint families of subspaces."
    )
    parser.add_argument(
        "--list-fields", action="store_true", help="List the named coefficient fields"
    )
    parser.add_argument(
        "--list-families", action="store_true", help="List the built-in families"
    )
    parser.add_argument(
        "--list-strategies", action="store_true", help="List the built-in game strategies"
    )

    subparsers = parser.add_subparsers(dest="command", help="Sub-command to run")

    _add_rref_arguments(subparsers.add_parser("rref", help="Reduced echelon form of vectors"))
    _add_intersect_arguments(
        subparsers.add_parser("intersect", help="Intersect (or add) two subspaces")
    )
    _add_extend_bound_arguments(
        subparsers.add_parser("extend-bound", help="Extension bound of a family member")
    )
    _add_witness_arguments(subparsers.add_parser("witness", help="Non-maximality witnesses"))
    _add_diagonalize_arguments(
        subparsers.add_parser("diagonalize", help="Diagonalize under a dominating function")
    )
    _add_fin_arguments(subparsers.add_parser("fin", help="FIN block combinatorics"))
    _add_game_arguments(subparsers.add_parser("game", help="Play or replay games"))
    _add_poset_arguments(subparsers.add_parser("poset", help="Forcing condition operations"))
    _add_verify_arguments(subparsers.add_parser("verify", help="Re-verify an artifact"))

    parsed_args = parser.parse_args(args)

    if parsed_args.list_fields:
        _print_supported_fields()
        sys.exit(EXIT_OK)
    if parsed_args.list_families:
        _print_families()
        sys.exit(EXIT_OK)
    if parsed_args.list_strategies:
        _print_strategies()
        sys.exit(EXIT_OK)
    if not parsed_args.command:
        parser.print_help()
        sys.exit(EXIT_INPUT)

    if parsed_args.field is not None and not is_field_supported(parsed_args.field):
        sys.stderr.write(
            f"Error: Unsupported field '{parsed_args.field}'. "
            f"Named fields are: {', '.join(get_supported_fields())} (any gf<p> works)\n"
        )
        sys.exit(EXIT_INPUT)

    return parsed_args


def _print_supported_fields() -> None:
    """Print the named fields to stdout."""
    print("\nNamed coefficient fields:")
    print("-" * 40)
    for info in get_display_info():
        print(f"{info['code']:<6} - {info['name']}")
    print("\nUse --field NAME to pick one (e.g., --field gf3); gf<p> works for any prime p")


def _print_families() -> None:
    print("\nBuilt-in families (use --named NAME):")
    print("-" * 40)
    for name, (description, _) in sorted(NAMED_FAMILIES.items()):
        print(f"{name:<10} - {description}")


def _print_strategies() -> None:
    print("\nBuilt-in strategies:")
    print("-" * 40)
    for name, (player, kinds, description) in STRATEGY_NAMES.items():
        games = "/".join(k.value for k in kinds)
        print(f"{name:<14} {player.value:<3} {games:<18} {description}")


def _add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """
    Add the options every subcommand takes.

    Args:
        parser: ArgumentParser to add arguments to
    """
    parser.add_argument(
        "--field",
        "-f",
        type=str,
        default=None,
        help="Coefficient field: gf<p> or q (default: gf2, or the file's field)",
    )
    parser.add_argument("--output", "-o", type=str, help="Result file (default: stdout)")
    parser.add_argument(
        "--manifest",
        type=str,
        help="Manifest file (default: <output>.manifest.json when --output is given)",
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log progress to stderr")
    parser.add_argument(
        "--depth",
        type=int,
        default=None,
        help="Rows inspected when certifying pairs of a family (default: 16)",
    )
    parser.add_argument(
        "--window",
        type=int,
        default=None,
        help="Search window for common block searches (default: 64)",
    )
    parser.add_argument(
        "--no-verify",
        dest="verify",
        action="store_false",
        default=None,
        help="Skip re-verifying construction preconditions and results (default: verify)",
    )


def _add_family_arguments(parser: argparse.ArgumentParser, required: bool = True) -> None:
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--family", type=str, help="Family JSON file")
    group.add_argument(
        "--named",
        type=str,
        choices=sorted(NAMED_FAMILIES),
        help="Built-in family (see --list-families)",
    )


def _add_rref_arguments(parser: argparse.ArgumentParser) -> None:
    _add_common_arguments(parser)
    parser.add_argument("vectors", type=str, help='Vectors JSON file ({"basis": [...]})')


def _add_intersect_arguments(parser: argparse.ArgumentParser) -> None:
    _add_common_arguments(parser)
    parser.add_argument("--left", type=str, required=True, help="Basis JSON file")
    right = parser.add_mutually_exclusive_group(required=True)
    right.add_argument("--right", type=str, help="Basis JSON file")
    right.add_argument("--preset", type=str, help="Preset JSON file of an infinite subspace")
    parser.add_argument(
        "--sum", action="store_true", help="Compute the sum instead (with --right only)"
    )


def _add_extend_bound_arguments(parser: argparse.ArgumentParser) -> None:
    _add_common_arguments(parser)
    _add_family_arguments(parser)
    parser.add_argument("--member", type=int, required=True, help="Member index")
    parser.add_argument("--k", type=int, required=True, help="Support bound K of the sequence")


def _add_witness_arguments(parser: argparse.ArgumentParser) -> None:
    kinds = parser.add_subparsers(dest="witness_kind", required=True)
    for name, help_text in (
        ("nonmax", "Block sequence missing every member of a finite family"),
        ("countable", "Block sequence meeting member n exactly in <x_n>"),
        ("chain", "Diagonalize a descending chain of subspaces"),
    ):
        sub = kinds.add_parser(name, help=help_text)
        _add_common_arguments(sub)
        _add_family_arguments(sub)
        sub.add_argument("--len", type=int, required=True, help="Length of the sequence")
        if name == "chain":
            sub.add_argument("--chain", type=str, required=True, help="JSON list of presets")
            sub.add_argument(
                "--working-depth",
                type=int,
                default=None,
                help="Depth of the in_H certificates (default: 3)",
            )


def _add_diagonalize_arguments(parser: argparse.ArgumentParser) -> None:
    _add_common_arguments(parser)
    _add_family_arguments(parser)
    parser.add_argument("--len", type=int, required=True, help="Members in the enumeration")
    parser.add_argument(
        "--h", type=str, help="JSON list h(0), h(1), ... (default: computed dominating table)"
    )
    parser.add_argument(
        "--upto",
        type=int,
        default=1024,
        help="Arguments tabulated when h is computed (default: 1024)",
    )


def _add_fin_arguments(parser: argparse.ArgumentParser) -> None:
    actions = parser.add_subparsers(dest="fin_action", required=True)
    report = actions.add_parser("report", help="Common finite unions of two block sequences")
    _add_common_arguments(report)
    report.add_argument("--a", type=str, required=True, help="Block sequence JSON file")
    report.add_argument("--b", type=str, required=True, help="Block sequence JSON file")
    report.add_argument("--cutoff", type=int, required=True, help="Elements must be below this")

    lift = actions.add_parser("lift", help="Realize a FIN block sequence inside <X>")
    _add_common_arguments(lift)
    lift.add_argument("--vectors", type=str, required=True, help="Block sequence X JSON file")
    lift.add_argument("--blocks", type=str, required=True, help="Block sequence A JSON file")

    bga = actions.add_parser("bga", help="Singleton-set report of a family's supports")
    _add_common_arguments(bga)
    _add_family_arguments(bga)
    bga.add_argument("--len", type=int, default=16, help="Blocks per member (default: 16)")
    bga.add_argument("--cutoff", type=int, default=64, help="Report window (default: 64)")


def _add_game_arguments(parser: argparse.ArgumentParser) -> None:
    actions = parser.add_subparsers(dest="game_action", required=True)
    play_parser = actions.add_parser("play", help="Play a truncated game")
    _add_common_arguments(play_parser)
    _add_family_arguments(play_parser, required=False)
    play_parser.add_argument(
        "--kind", type=str, choices=[k.value for k in GameKind], default="gowers"
    )
    play_parser.add_argument("--arena", type=str, required=True, help="Preset JSON file of X")
    play_parser.add_argument("--strat-i", type=str, required=True, help="Strategy of I")
    play_parser.add_argument("--strat-ii", type=str, required=True, help="Strategy of II")
    play_parser.add_argument("--rounds", type=int, required=True, help="Number of rounds")
    play_parser.add_argument("--member", type=int, help="Member for the abar strategies")
    play_parser.add_argument("--seed", type=int, default=0, help="Seed of random strategies")
    play_parser.add_argument(
        "--working-depth", type=int, default=None, help="Depth of in_H analysis (default: 3)"
    )

    replay_parser = actions.add_parser("replay", help="Re-validate a transcript")
    _add_common_arguments(replay_parser)
    replay_parser.add_argument("transcript", type=str, help="Transcript JSON file")


def _add_poset_arguments(parser: argparse.ArgumentParser) -> None:
    actions = parser.add_subparsers(dest="poset_action", required=True)

    map_extend_parser = actions.add_parser("map-extend", help="Extend s of an (s, F) condition")
    map_add = actions.add_parser("map-add", help="Add a member to F of an (s, F) condition")
    for sub in (map_extend_parser, map_add):
        _add_common_arguments(sub)
        _add_family_arguments(sub)
        sub.add_argument("--condition", type=str, required=True, help="Condition JSON file")
    map_add.add_argument("--member", type=int, required=True, help="Member index")

    q_extend = actions.add_parser("q-extend", help="Add one level to a Q condition")
    q_pair = actions.add_parser("q-add-pair", help="Add a pair to a Q condition")
    q_amal = actions.add_parser("q-amalgamate", help="Union of two agreeing Q conditions")
    for sub in (q_extend, q_pair, q_amal):
        _add_common_arguments(sub)
        sub.add_argument("--condition", type=str, required=True, help="Condition JSON file")
    q_extend.add_argument("--min", type=int, required=True, help="New vectors lie above this")
    q_extend.add_argument(
        "--width",
        type=int,
        default=1,
        help="Basis vectors summed into each new vector (default: 1)",
    )
    q_pair.add_argument("--label", type=str, required=True, help="Label alpha")
    q_pair.add_argument("--beta", type=int, required=True, help="Index beta")
    q_amal.add_argument("--other", type=str, required=True, help="Second condition JSON file")


def _add_verify_arguments(parser: argparse.ArgumentParser) -> None:
    _add_common_arguments(parser)
    target = parser.add_mutually_exclusive_group(required=True)
    target.add_argument("artifact", nargs="?", type=str, help="Artifact JSON file")
    for kind, what in VERIFY_TARGETS.items():
        target.add_argument(f"--{kind}", dest=f"{kind}_file", type=str, help=f"{what} JSON file")


def _configuration(args: argparse.Namespace) -> RunConfiguration:
    config = load_configuration()
    return config.with_overrides(
        field_name=args.field,
        depth=getattr(args, "depth", None),
        search_window=getattr(args, "window", None),
        working_depth=getattr(args, "working_depth", None),
        verify=getattr(args, "verify", None),
    )


def _load_family(args: argparse.Namespace, config: RunConfiguration) -> ADFamily:
    if getattr(args, "named", None):
        return named_family(args.named, config.spec, config.depth)
    return codec.family_from_json(codec.read_json(args.family), config.depth)


def _family_inputs(args: argparse.Namespace) -> List[str]:
    return [args.family] if getattr(args, "family", None) else []


def _basis_file(path: str, config: RunConfiguration) -> Any:
    data = codec.read_json(path)
    if isinstance(data, list):
        data = {"basis": data}
    return codec.basis_from_json(data, config.spec)


def cmd_rref(args: argparse.Namespace, config: RunConfiguration) -> CommandResult:
    B = _basis_file(args.vectors, config)
    return CommandResult(codec.basis_to_json(B), [args.vectors])


def cmd_intersect(args: argparse.Namespace, config: RunConfiguration) -> CommandResult:
    U = _basis_file(args.left, config)
    if args.preset:
        if args.sum:
            raise InputFormatError("--sum needs a finite-dimensional --right")
        Y = make_stream(codec.preset_from_json(codec.read_json(args.preset)), config.spec)
        meet = intersect_with_stream(U, Y)
        return CommandResult(codec.basis_to_json(meet), [args.left, args.preset])
    V = _basis_file(args.right, config)
    result = sum_space(U, V) if args.sum else intersect(U, V)
    return CommandResult(codec.basis_to_json(result), [args.left, args.right])


def cmd_extend_bound(args: argparse.Namespace, config: RunConfiguration) -> CommandResult:
    fam = _load_family(args, config)
    M = extend_bound(fam.stream(args.member), args.k)
    return CommandResult({"M": M}, _family_inputs(args))


def cmd_witness(args: argparse.Namespace, config: RunConfiguration) -> CommandResult:
    fam = _load_family(args, config)
    inputs = _family_inputs(args)
    if args.witness_kind == "nonmax":
        witness = witness_nonmax_finite(fam, args.len, verify=config.verify)
    elif args.witness_kind == "countable":
        witness = witness_nonmax_countable(fam, args.len, verify=config.verify)
    else:
        data = codec.read_json(args.chain)
        presets = [codec.preset_from_json(p) for p in (data if isinstance(data, list) else [data])]
        witness = p_diagonalize(
            presets,
            fam,
            args.len,
            working_depth=config.working_depth,
            window=config.search_window,
            verify=config.verify,
        )
        inputs.append(args.chain)
    return CommandResult(codec.witness_to_json(witness, fam), inputs)


def cmd_diagonalize(args: argparse.Namespace, config: RunConfiguration) -> CommandResult:
    fam = _load_family(args, config)
    inputs = _family_inputs(args)
    if args.h:
        h = codec.read_json(args.h)
        if not isinstance(h, list) or not all(isinstance(n, int) for n in h):
            raise InputFormatError("h must be a JSON list of integers")
        inputs.append(args.h)
    else:
        h = [int(n) for n in domination_table(fam, args.len, args.upto)["h"]]
    witness = diagonalize_under(fam, h, args.len, verify=config.verify)
    return CommandResult(codec.witness_to_json(witness, fam), inputs)


def _records(frame: Any) -> Any:
    return json.loads(frame.to_json(orient="records"))


def cmd_fin(args: argparse.Namespace, config: RunConfiguration) -> CommandResult:
    if args.fin_action == "report":
        A = codec.blockseq_from_json(codec.read_json(args.a))
        B = codec.blockseq_from_json(codec.read_json(args.b))
        common = fin_ad_report(A, B, args.cutoff)
        payload = {"cutoff": args.cutoff, "common": [list(c.elements) for c in common]}
        return CommandResult(payload, [args.a, args.b])
    if args.fin_action == "lift":
        data = codec.read_json(args.vectors)
        rows = data.get("basis") if isinstance(data, dict) else data
        X = codec.vectors_from_json(rows, config.spec)
        A = codec.blockseq_from_json(codec.read_json(args.blocks))
        payload = {"lifted": codec.vectors_to_json(lift_supp(X, A))}
        return CommandResult(payload, [args.vectors, args.blocks])
    fam = _load_family(args, config)
    images = fin_family_from_streams(fam.streams(), args.len)
    report = bga_hypotheses(images, args.cutoff)
    payload = {
        "depth": report.depth,
        "supports": [codec.blockseq_to_json(A) for A in images],
        "density": _records(report.density),
        "overlaps": _records(report.overlaps),
    }
    return CommandResult(payload, _family_inputs(args))


def _strategy(name: str, player: str, args: argparse.Namespace, **kwargs: Any) -> Any:
    if name not in STRATEGY_NAMES:
        raise InputFormatError(
            f"Unknown strategy '{name}'. Known strategies: {', '.join(sorted(STRATEGY_NAMES))}"
        )
    owner, kinds, _ = STRATEGY_NAMES[name]
    if owner.value != player or GameKind(args.kind) not in kinds:
        raise InputFormatError(f"Strategy '{name}' is not a strategy of {player} in {args.kind}")
    return build_strategy(name, **kwargs)


def cmd_game(args: argparse.Namespace, config: RunConfiguration) -> CommandResult:
    if args.game_action == "replay":
        transcript = codec.transcript_from_json(codec.read_json(args.transcript))
        report = replay(transcript)
        payload = {
            "ok": report.ok,
            "round": report.round_index,
            "player": report.player,
            "rule": report.rule,
            "message": report.message,
        }
        code = EXIT_OK if report.ok else EXIT_VERIFICATION
        return CommandResult(payload, [args.transcript], code)

    inputs = [args.arena] + _family_inputs(args)
    fam = _load_family(args, config) if (args.family or args.named) else None
    X = make_stream(codec.preset_from_json(codec.read_json(args.arena)), config.spec)
    options: Dict[str, Any] = {
        "fam": fam,
        "X": X,
        "member": args.member,
        "working_depth": config.working_depth,
        "window": config.search_window,
    }
    strat_i = _strategy(args.strat_i, "I", args, rng_seed=args.seed, **options)
    strat_ii = _strategy(args.strat_ii, "II", args, rng_seed=args.seed + 1, **options)
    transcript = play(GameKind(args.kind), X, strat_i, strat_ii, args.rounds)
    payload = codec.transcript_to_json(transcript)
    if fam is not None:
        outcome = transcript.outcome
        cert = in_H(outcome, fam, config.working_depth)
        payload["analysis"] = {
            "family": codec.family_to_json(fam),
            "in_h": codec.h_certificate_to_json(cert),
            "in_abar": in_Abar(outcome, fam),
        }
    return CommandResult(payload, inputs)


def cmd_poset(args: argparse.Namespace, config: RunConfiguration) -> CommandResult:
    data = codec.read_json(args.condition)
    inputs = [args.condition]
    if args.poset_action in ("map-extend", "map-add"):
        fam = _load_family(args, config)
        inputs += _family_inputs(args)
        p = codec.map_condition_from_json(data, fam.spec)
        if args.poset_action == "map-extend":
            q = map_extend(p, fam, verify=config.verify)
        else:
            q = map_add_member(p, args.member, fam)
        payload = codec.map_condition_to_json(q)
        payload["family"] = codec.family_to_json(fam)
        payload["extends"] = codec.map_condition_to_json(p)
        return CommandResult(payload, inputs)

    qp = codec.q_condition_from_json(data, config.spec)
    if args.poset_action == "q-extend":
        qq = q_extend_level(qp, args.min, width=args.width)
    elif args.poset_action == "q-add-pair":
        qq = q_add_pair(qp, (args.label, args.beta))
    else:
        other = codec.q_condition_from_json(codec.read_json(args.other), config.spec)
        qq = q_amalgamate(qp, other)
        inputs.append(args.other)
    payload = codec.q_condition_to_json(qq)
    payload["extends"] = codec.q_condition_to_json(qp)
    return CommandResult(payload, inputs)


def cmd_verify(args: argparse.Namespace, config: RunConfiguration) -> CommandResult:
    path = args.artifact or next(
        getattr(args, f"{kind}_file")
        for kind in VERIFY_TARGETS
        if getattr(args, f"{kind}_file")
    )
    report = verify_artifact(codec.read_json(path))
    for failure in report.failures:
        sys.stderr.write(f"Failed check: {failure}\n")
    payload = {"artifact": report.artifact, "ok": report.ok, "failures": list(report.failures)}
    return CommandResult(payload, [path], EXIT_OK if report.ok else EXIT_VERIFICATION)


COMMANDS: Dict[str, Callable[[argparse.Namespace, RunConfiguration], CommandResult]] = {
    "rref": cmd_rref,
    "intersect": cmd_intersect,
    "extend-bound": cmd_extend_bound,
    "witness": cmd_witness,
    "diagonalize": cmd_diagonalize,
    "fin": cmd_fin,
    "game": cmd_game,
    "poset": cmd_poset,
    "verify": cmd_verify,
}


def _command_name(args: argparse.Namespace) -> str:
    parts = [args.command]
    for attr in ("witness_kind", "fin_action", "game_action", "poset_action"):
        if getattr(args, attr, None):
            parts.append(getattr(args, attr))
    return " ".join(parts)


def write_outputs(
    args: argparse.Namespace, config: RunConfiguration, result: CommandResult
) -> None:
    """
    Write the result and, if requested, the manifest.

    The result is byte-identical across identical runs; only the manifest
    carries a timestamp.
    """
    text = codec.dumps(result.payload)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    manifest_path = args.manifest or (f"{args.output}.manifest.json" if args.output else None)
    if manifest_path is None:
        return
    manifest = RunManifest(
        command=_command_name(args),
        field=config.field_name,
        inputs={path: sha256_file(path) for path in result.inputs},
        outputs={args.output or "<stdout>": sha256_text(text)},
        created=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )
    with open(manifest_path, "w", encoding="utf-8") as f:
        f.write(codec.dumps(manifest.to_json()))


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run the subcommand and write its outputs.

    Returns:
        The exit code
    """
    args = parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = _configuration(args)
        if args.field is None:
            config = config.with_overrides(field_name=_file_field(args) or config.field_name)
        FUEL.reset(config.max_steps)
        result = COMMANDS[args.command](args, config)
        write_outputs(args, config, result)
    except VERIFICATION_ERRORS as e:
        sys.stderr.write(f"Error: {e}\n")
        return EXIT_VERIFICATION
    except (MadvecError, ValueError, IndexError, OSError) as e:
        sys.stderr.write(f"Error: {e}\n")
        return EXIT_INPUT
    logger.info("Done after %d stream pulls", FUEL.used)
    return result.exit_code


def _file_field(args: argparse.Namespace) -> Optional[str]:
    """The field recorded in the family or condition file, if any."""
    for attr in ("family", "condition"):
        path = getattr(args, attr, None)
        if path and os.path.exists(path):
            data = codec.read_json(path)
            if isinstance(data, dict) and isinstance(data.get("field"), str):
                return str(data["field"])
    return None


def main() -> None:
    """
    Main function for the CLI.

    This function parses command-line arguments, runs the sub-command and
    exits with its code.
    """
    sys.exit(run())


if __name__ == "__main__":
    main()
