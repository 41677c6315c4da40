#!/usr/bin/env python
"""
JSON encodings of every artifact the command line reads or writes.

Payloads are plain dicts and lists; `dumps` fixes key order and indentation so
that equal artifacts are byte-identical. Decoders raise InputFormatError on
anything malformed.
"""

import dataclasses
import json
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

from madvec.echelon import EchelonBasis, rref
from madvec.errors import InputFormatError
from madvec.extension import ADCertificate
from madvec.field import FieldSpec
from madvec.field_config import get_field_spec
from madvec.fin_bridge import FinBlockSeq
from madvec.games import GameKind, GameTranscript, Round
from madvec.madlab import ADFamily, HMembershipCertificate, HWitness, Witness, WitnessCheck
from madvec.posets import MAPCondition, QCondition
from madvec.streams import PRESET_KINDS, FamilyPreset
from madvec.vectors import SparseVector

JSONObject = Dict[str, Any]
T = TypeVar("T")


def dumps(payload: Any) -> str:
    """Serialize with sorted keys and two-space indentation, newline terminated."""
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFormatError(f"Not valid JSON: {e}")


def read_json(path: Union[str, Path]) -> Any:
    """
    Read a JSON file.

    Raises:
        InputFormatError: If the file is missing or not valid JSON
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputFormatError(f"Cannot read {path}: {e}")
    return loads(text)


def _require(data: Any, key: str, kind: type = object) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise InputFormatError(f"Missing key '{key}'")
    value = data[key]
    if not isinstance(value, kind) or (kind is int and isinstance(value, bool)):
        raise InputFormatError(f"Key '{key}' must be of type {kind.__name__}")
    return value


def _as_int(value: Any, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputFormatError(f"{what} must be an integer, got {value!r}")
    return value


def _as_list(value: Any, what: str) -> List[Any]:
    if not isinstance(value, list):
        raise InputFormatError(f"{what} must be a list")
    return value


def _decoding(what: str, build: Callable[[], T]) -> T:
    try:
        return build()
    except InputFormatError:
        raise
    except (ValueError, TypeError, KeyError, IndexError) as e:
        raise InputFormatError(f"Malformed {what}: {e}")


def field_from_json(data: Any) -> FieldSpec:
    name = _require(data, "field", str)
    try:
        return get_field_spec(name)
    except ValueError as e:
        raise InputFormatError(str(e))


def vector_to_json(v: SparseVector) -> JSONObject:
    return {"v": [[index, c.to_text()] for index, c in v.entries]}


def vector_from_json(data: Any, spec: FieldSpec) -> SparseVector:
    """
    Decode {"v": [[index, "coeff"], ...]}.

    Raises:
        InputFormatError: On bad shape, repeated or negative indices, or bad coefficients
    """
    coords = {}
    for term in _as_list(_require(data, "v"), "Vector terms"):
        if not isinstance(term, list) or len(term) != 2:
            raise InputFormatError(f"Vector term must be [index, coeff], got {term!r}")
        index = _as_int(term[0], "Vector index")
        if index < 0 or index in coords:
            raise InputFormatError(f"Vector index {index} is negative or repeated")
        coords[index] = spec.parse(str(term[1]))
    return SparseVector.from_mapping(spec, coords)


def vectors_to_json(xs: Sequence[SparseVector]) -> List[JSONObject]:
    return [vector_to_json(x) for x in xs]


def vectors_from_json(
    data: Any, spec: FieldSpec, what: str = "Vector list"
) -> Tuple[SparseVector, ...]:
    return tuple(vector_from_json(item, spec) for item in _as_list(data, what))


def basis_to_json(B: EchelonBasis) -> JSONObject:
    return {"basis": vectors_to_json(B.rows)}


def basis_from_json(data: Any, spec: FieldSpec) -> EchelonBasis:
    """Decode a basis and bring it to reduced echelon form."""
    return rref(list(vectors_from_json(_require(data, "basis"), spec, "Basis")), spec)


def _to_plain(value: Any) -> Any:
    if isinstance(value, FamilyPreset):
        return preset_to_json(value)
    if isinstance(value, tuple):
        return [_to_plain(item) for item in value]
    return value


def _from_plain(value: Any) -> Any:
    if isinstance(value, dict):
        return preset_from_json(value)
    if isinstance(value, list):
        return tuple(_from_plain(item) for item in value)
    return value


def preset_to_json(preset: FamilyPreset) -> JSONObject:
    payload: JSONObject = {"kind": preset.kind}
    for f in dataclasses.fields(preset):  # type: ignore[arg-type]
        payload[f.name] = _to_plain(getattr(preset, f.name))
    return payload


def preset_from_json(data: Any) -> FamilyPreset:
    """
    Decode a preset such as {"kind": "diagonal-residue", "r": 0, "m": 2}.

    Nested presets (tail, amended, intersection) are decoded recursively.

    Raises:
        InputFormatError: On an unknown kind, unknown fields or an inconsistent preset
    """
    kind = _require(data, "kind", str)
    if kind not in PRESET_KINDS:
        known = ", ".join(sorted(PRESET_KINDS))
        raise InputFormatError(f"Unknown preset kind '{kind}'. Known kinds: {known}")
    cls = PRESET_KINDS[kind]
    fields = {key: _from_plain(value) for key, value in data.items() if key != "kind"}
    preset: FamilyPreset = _decoding(f"{kind} preset", lambda: cls(**fields))
    _decoding(f"{kind} preset", preset.validate)
    return preset


def certificate_to_json(cert: ADCertificate) -> JSONObject:
    return {"pair": [cert.i, cert.j], "bound": cert.bound, "depth": cert.depth, "dim": cert.dim}


def certificate_from_json(data: Any) -> ADCertificate:
    pair = _as_list(_require(data, "pair"), "Certificate pair")
    if len(pair) != 2:
        raise InputFormatError("Certificate pair must have two indices")
    return ADCertificate(
        _as_int(pair[0], "Certificate index"),
        _as_int(pair[1], "Certificate index"),
        _require(data, "bound", int),
        _require(data, "depth", int),
        _as_int(data.get("dim", 0), "Certificate dim"),
    )


def family_to_json(fam: ADFamily) -> JSONObject:
    return {
        "field": fam.spec.name,
        "members": [preset_to_json(p) for p in fam.members],
        "certs": [certificate_to_json(c) for c in fam.certs],
    }


def family_from_json(data: Any, depth: int = 16) -> ADFamily:
    """
    Decode a family; certificates are computed at `depth` when the file has none.

    The decoded certificates are taken as given; `verify` re-checks them.
    """
    spec = field_from_json(data)
    members = [preset_from_json(p) for p in _as_list(_require(data, "members"), "Members")]
    if "certs" not in data:
        return _decoding("family", lambda: ADFamily.build(spec, members, depth))
    certs = tuple(certificate_from_json(c) for c in _as_list(data["certs"], "Certificates"))
    return ADFamily(spec, tuple(members), certs)


def witness_to_json(witness: Witness, fam: ADFamily) -> JSONObject:
    """Witness with the family it refers to, so the file verifies on its own."""
    return {
        "kind": witness.kind,
        "family": family_to_json(fam),
        "xs": vectors_to_json(witness.xs),
        "checks": [
            {"k": c.k, "kind": c.kind, "start": c.start, "stop": c.stop} for c in witness.checks
        ],
        "hits": [list(hit) for hit in witness.hits],
        "h": list(witness.h),
        **({"chain": [preset_to_json(p) for p in witness.chain]} if witness.chain else {}),
    }


def _hit_from_json(item: Any) -> Tuple[int, int]:
    pair = _as_list(item, "Hit")
    if len(pair) != 2:
        raise InputFormatError(f"Hits are [round, member] pairs, got {item!r}")
    return _as_int(pair[0], "Hit round"), _as_int(pair[1], "Hit member")


def witness_from_json(data: Any) -> Tuple[Witness, ADFamily]:
    fam = family_from_json(_require(data, "family", dict))
    xs = vectors_from_json(_require(data, "xs"), fam.spec, "Witness vectors")
    checks = []
    for item in _as_list(_require(data, "checks"), "Checks"):
        checks.append(
            WitnessCheck(
                _require(item, "k", int),
                _require(item, "kind", str),
                _as_int(item.get("start", 0), "Check start"),
                _as_int(item.get("stop", len(xs)), "Check stop"),
            )
        )
    hits = tuple(_hit_from_json(hit) for hit in _as_list(data.get("hits", []), "Hits"))
    h = tuple(_as_int(n, "h value") for n in _as_list(data.get("h", []), "h"))
    chain = tuple(preset_from_json(p) for p in _as_list(data.get("chain", []), "Chain"))
    kind = _require(data, "kind", str)
    return Witness(kind, xs, tuple(checks), hits, h, chain), fam


def h_certificate_to_json(cert: HMembershipCertificate) -> JSONObject:
    return {
        "depth": cert.depth,
        "complete": cert.complete,
        "witnesses": [
            {"member": w.member, "vectors": vectors_to_json(w.vectors)} for w in cert.witnesses
        ],
    }


def h_certificate_from_json(data: Any, spec: FieldSpec) -> HMembershipCertificate:
    witnesses = tuple(
        HWitness(_require(w, "member", int), vectors_from_json(_require(w, "vectors"), spec))
        for w in _as_list(_require(data, "witnesses"), "H witnesses")
    )
    depth = _require(data, "depth", int)
    return HMembershipCertificate(depth, witnesses, bool(data.get("complete")))


def transcript_to_json(transcript: GameTranscript) -> JSONObject:
    rounds = []
    for r in transcript.rounds:
        move_i: Any = r.move_i if isinstance(r.move_i, int) else preset_to_json(r.move_i)
        rounds.append({"i": move_i, "ii": vector_to_json(r.move_ii)})
    return {
        "game": transcript.kind.value,
        "field": transcript.spec.name,
        "arena": preset_to_json(transcript.arena),
        "rounds": rounds,
    }


def transcript_from_json(data: Any) -> GameTranscript:
    try:
        kind = GameKind(_require(data, "game", str))
    except ValueError:
        raise InputFormatError(f"Unknown game '{data.get('game')}'")
    spec = field_from_json(data)
    arena = preset_from_json(_require(data, "arena", dict))
    rounds = []
    for item in _as_list(_require(data, "rounds"), "Rounds"):
        raw_i = _require(item, "i")
        move_i = preset_from_json(raw_i) if isinstance(raw_i, dict) else _as_int(raw_i, "Move of I")
        rounds.append(Round(move_i, vector_from_json(_require(item, "ii"), spec)))
    return GameTranscript(kind, spec, arena, tuple(rounds))


def map_condition_to_json(p: MAPCondition) -> JSONObject:
    return {"s": vectors_to_json(p.s), "F": sorted(p.F)}


def map_condition_from_json(data: Any, spec: FieldSpec) -> MAPCondition:
    s = vectors_from_json(_require(data, "s"), spec, "Condition s")
    F = frozenset(_as_int(i, "Member index") for i in _as_list(_require(data, "F"), "Condition F"))
    return _decoding("condition", lambda: MAPCondition(s, F))


def _pair_key(alpha: str, beta: int) -> str:
    return f"{alpha},{beta}"


def _parse_pair_key(key: str) -> Tuple[str, int]:
    alpha, sep, beta = key.rpartition(",")
    if not sep:
        raise InputFormatError(f"Row key '{key}' is not of the form 'alpha,beta'")
    try:
        return alpha, int(beta)
    except ValueError:
        raise InputFormatError(f"Row key '{key}' has a non-integer beta")


def q_condition_to_json(p: QCondition) -> JSONObject:
    return {
        "field": p.spec.name,
        "F": [[alpha, beta] for (alpha, beta), _ in p.table],
        "n": p.n,
        "rows": {_pair_key(*pair): vectors_to_json(row) for pair, row in p.table},
    }


def q_condition_from_json(data: Any, spec: Optional[FieldSpec] = None) -> QCondition:
    """
    Decode {"F": [["a1", 0], ...], "n": 2, "rows": {"a1,0": [vec, vec], ...}}.

    The field is taken from the file when present, otherwise from `spec`.
    """
    if isinstance(data, dict) and "field" in data:
        spec = field_from_json(data)
    if spec is None:
        raise InputFormatError("Condition has no field")
    n = _require(data, "n", int)
    rows_data = _require(data, "rows", dict)
    pairs = []
    for item in _as_list(_require(data, "F"), "Condition F"):
        if not isinstance(item, list) or len(item) != 2 or not isinstance(item[0], str):
            raise InputFormatError(f"Pair must be [label, index], got {item!r}")
        pairs.append((item[0], _as_int(item[1], "Pair index")))
    keys = {_parse_pair_key(key) for key in rows_data}
    if keys != set(pairs):
        raise InputFormatError("Rows must be given for exactly the pairs in F")
    rows = {
        _parse_pair_key(key): vectors_from_json(value, spec, f"Row {key}")
        for key, value in rows_data.items()
    }
    if len(pairs) != len(set(pairs)):
        raise InputFormatError("A pair appears twice in F")
    field_spec: FieldSpec = spec
    return _decoding("condition", lambda: QCondition.from_rows(field_spec, n, rows))


def blockseq_to_json(A: FinBlockSeq) -> List[List[int]]:
    return [list(block.elements) for block in A.blocks]


def blockseq_from_json(data: Any) -> FinBlockSeq:
    blocks = _as_list(data, "Block sequence")
    for block in blocks:
        for n in _as_list(block, "Block"):
            _as_int(n, "Block element")
    return _decoding("block sequence", lambda: FinBlockSeq.of(blocks))
