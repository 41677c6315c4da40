#!/usr/bin/env python
"""
Independent re-verification of artifacts written by the command line.

Every artifact is decoded afresh and re-checked against new streams built from
its presets; nothing computed while producing it is trusted.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Any, List, Tuple

from madvec import codec
from madvec.errors import InputFormatError, MissingCertificateError
from madvec.extension import certificate_index, verify_certificate
from madvec.games import replay
from madvec.madlab import ADFamily, WitnessCheck, in_Abar, verify_h_certificate, verify_witness
from madvec.posets import map_leq, q_leq

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VerifyReport:
    """
    Outcome of verifying one artifact.

    Attributes:
        artifact: Detected artifact type
        failures: Descriptions of the failing checks, empty when the artifact holds
    """

    artifact: str
    failures: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


def detect_artifact(data: Any) -> str:
    """
    Tell the artifact type from the keys of a decoded JSON document.

    Raises:
        InputFormatError: If the document is not a known artifact
    """
    if not isinstance(data, dict):
        raise InputFormatError("Artifacts are JSON objects")
    if "game" in data:
        return "transcript"
    if "xs" in data and "family" in data:
        return "witness"
    if "rows" in data and "n" in data:
        return "q-condition"
    if "s" in data and "F" in data:
        return "map-condition"
    if "members" in data:
        return "family"
    if "pair" in data and "bound" in data:
        raise InputFormatError(
            "A bare certificate names its members by index; verify the family file carrying it"
        )
    raise InputFormatError(
        "Unrecognized artifact; expected a witness, transcript, family or condition"
    )


def verify_family(fam: ADFamily) -> List[str]:
    """Recompute every certificate and report uncovered or wrong ones."""
    failures = []
    table = certificate_index(fam.certs)
    streams = fam.streams()
    for i, j in itertools.combinations(range(len(fam)), 2):
        cert = table.get((i, j))
        if cert is None:
            failures.append(f"pair ({i}, {j}) has no certificate")
        elif not verify_certificate(cert, streams[i], streams[j]):
            failures.append(f"certificate for pair ({i}, {j}) does not match the intersection")
    for i, j in table:
        if not (0 <= i < j < len(fam)):
            failures.append(f"certificate for pair ({i}, {j}) names no pair of members")
    return failures


def describe_failure(failing: WitnessCheck, kind: str) -> str:
    """A one-line description of a failing witness check."""
    if failing.kind == "block":
        return "block check fails: xs is not a block sequence of nonzero vectors"
    if failing.kind == "kind":
        return f"kind check fails: '{kind}' is not a witness kind"
    if failing.kind == "checks":
        return f"checks do not match those required of a {kind} witness of this length"
    if failing.kind == "above":
        return f"above check fails: xs[{failing.start}] does not start above the recorded h"
    if failing.kind == "support":
        return f"support check fails: xs[{failing.start}] starts below {failing.start}"
    if failing.kind == "domination":
        return f"domination check fails for member {failing.k} at h({failing.start})"
    return (
        f"{failing.kind} check fails for member {failing.k} "
        f"on xs[{failing.start}:{failing.stop}]"
    )


def _verify_witness(data: Any) -> List[str]:
    witness, fam = codec.witness_from_json(data)
    failures = verify_family(fam)
    if any(a > b for a, b in zip(witness.h, witness.h[1:])):
        failures.append("h table is not nondecreasing")
    try:
        failing = verify_witness(witness, fam)
    except MissingCertificateError as e:
        return failures + [f"domination cannot be checked: {e}"]
    if failing is not None:
        failures.append(describe_failure(failing, witness.kind))
    return failures


def _verify_transcript(data: Any) -> List[str]:
    transcript = codec.transcript_from_json(data)
    report = replay(transcript)
    failures = [] if report.ok else [f"illegal move: {report.message} (rule {report.rule})"]
    analysis = data.get("analysis")
    if isinstance(analysis, dict):
        fam = codec.family_from_json(analysis.get("family"))
        failures += verify_family(fam)
        outcome = transcript.outcome
        if "in_h" in analysis:
            cert = codec.h_certificate_from_json(analysis["in_h"], fam.spec)
            if not verify_h_certificate(cert, outcome, fam):
                failures.append("in_H certificate does not hold for the outcome")
        if "in_abar" in analysis and in_Abar(outcome, fam) != analysis["in_abar"]:
            failures.append(f"outcome is not first contained in member {analysis['in_abar']}")
    return failures


def _verify_q_condition(data: Any) -> List[str]:
    q = codec.q_condition_from_json(data)
    if "extends" not in data:
        return []
    p = codec.q_condition_from_json(data["extends"], q.spec)
    return [] if q_leq(q, p) else ["condition does not extend the recorded one"]


def _verify_map_condition(data: Any) -> List[str]:
    fam = codec.family_from_json(data.get("family"))
    q = codec.map_condition_from_json(data, fam.spec)
    failures = verify_family(fam)
    if "extends" in data:
        p = codec.map_condition_from_json(data["extends"], fam.spec)
        if not map_leq(q, p, fam):
            failures.append("condition does not extend the recorded one")
    return failures


def verify_artifact(data: Any) -> VerifyReport:
    """
    Re-check a decoded artifact.

    Raises:
        InputFormatError: If the artifact is malformed
    """
    artifact = detect_artifact(data)
    if artifact == "witness":
        failures = _verify_witness(data)
    elif artifact == "transcript":
        failures = _verify_transcript(data)
    elif artifact == "q-condition":
        failures = _verify_q_condition(data)
    elif artifact == "map-condition":
        failures = _verify_map_condition(data)
    else:
        failures = verify_family(codec.family_from_json(data))
    logger.info("Verified %s: %d failing checks", artifact, len(failures))
    return VerifyReport(artifact, tuple(failures))
