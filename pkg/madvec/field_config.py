"""
Field configuration module for the madvec package.

This module maps the names accepted by the `--field` option to field
descriptions, and provides helpers for listing and validating them.
"""

import re
from typing import Dict, List, Optional

from madvec.field import MAX_PRIME, FieldSpec, is_prime

# Named fields offered in listings; any gf<p> with p prime below 2^16 is also accepted
FIELD_MAPPINGS: Dict[str, str] = {
    "gf2": "GF(2)",  # default
    "gf3": "GF(3)",
    "gf5": "GF(5)",
    "gf7": "GF(7)",
    "gf11": "GF(11)",
    "gf13": "GF(13)",
    "q": "Rational numbers",
}

# Field used when no --field option is given
DEFAULT_FIELD_NAME: str = "gf2"

_GF_PATTERN = re.compile(r"^gf(\d+)$")


def get_supported_fields() -> List[str]:
    """
    Get the list of named fields shown by `--list-fields`.

    Returns:
        Field names in a stable order (prime fields by characteristic, then q)
    """
    named = [name for name in FIELD_MAPPINGS if name != "q"]
    return sorted(named, key=lambda n: int(n[2:])) + ["q"]


def is_field_supported(field_name: Optional[str]) -> bool:
    """
    Check whether a field name can be used.

    Args:
        field_name: Name such as "gf5" or "q"

    Returns:
        True if the name denotes a supported field, False otherwise
    """
    if not field_name:
        return False
    if field_name == "q":
        return True
    match = _GF_PATTERN.match(field_name)
    if match is None:
        return False
    p = int(match.group(1))
    return p < MAX_PRIME and is_prime(p)


def get_field_spec(field_name: Optional[str] = None) -> FieldSpec:
    """
    Get the field for a name.

    Args:
        field_name: Field name; DEFAULT_FIELD_NAME is used when None or empty

    Returns:
        The corresponding FieldSpec

    Raises:
        ValueError: If the name is not supported
    """
    name = field_name or DEFAULT_FIELD_NAME
    if not is_field_supported(name):
        raise ValueError(
            f"Unsupported field '{name}'. Use gf<p> for a prime p < {MAX_PRIME}, or q."
        )
    if name == "q":
        return FieldSpec.rationals()
    return FieldSpec.prime(int(name[2:]))


def get_field_display_name(field_name: str) -> str:
    """
    Get a readable name for a field.

    Args:
        field_name: Field name such as "gf5"

    Returns:
        Display name, or "Unknown" if the name is not supported
    """
    if field_name in FIELD_MAPPINGS:
        return FIELD_MAPPINGS[field_name]
    if is_field_supported(field_name):
        return f"GF({field_name[2:]})"
    return "Unknown"


def get_display_info() -> List[Dict[str, str]]:
    """
    Get displayable information about the named fields.

    Returns:
        List of dictionaries with 'code' and 'name' keys for each named field
    """
    return [
        {"code": code, "name": get_field_display_name(code)} for code in get_supported_fields()
    ]
