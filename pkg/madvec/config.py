#!/usr/bin/env python
"""
Run configuration for the madvec package.

This module defines the immutable run configuration, its loading from the
environment, and the process-wide fuel gauge that caps stream pulls.
"""

import logging
import os
import threading
from dataclasses import dataclass, replace
from typing import Mapping, Optional

from madvec.errors import ConfigurationError, FuelExhaustedError
from madvec.field import FieldSpec
from madvec.field_config import DEFAULT_FIELD_NAME, get_field_spec

logger = logging.getLogger(__name__)

MAX_STEPS_ENV = "MADVEC_MAX_STEPS"
DEPTH_ENV = "MADVEC_DEPTH"
WINDOW_ENV = "MADVEC_WINDOW"
VERIFY_ENV = "MADVEC_VERIFY"


@dataclass(frozen=True)
class RunConfiguration:
    """
    Configuration shared by the library entry points and the CLI.

    Attributes:
        field_name: Name of the coefficient field (see field_config)
        depth: Number of rows inspected when certifying almost disjointness
        search_window: How far past a bound intersection searches may look
        working_depth: Depth requested from H(A) certificates by the game strategies
        verify: Whether construction preconditions are re-verified before use
        max_steps: Global cap on stream pulls, or None for no cap
    """

    field_name: str = DEFAULT_FIELD_NAME
    depth: int = 16
    search_window: int = 64
    working_depth: int = 3
    verify: bool = True
    max_steps: Optional[int] = None

    @property
    def spec(self) -> FieldSpec:
        return get_field_spec(self.field_name)

    def with_overrides(self, **changes: object) -> "RunConfiguration":
        """Return a copy with the given (non-None) fields replaced."""
        kept = {k: v for k, v in changes.items() if v is not None}
        return replace(self, **kept)  # type: ignore[arg-type]


def _positive_int(environ: Mapping[str, str], key: str) -> Optional[int]:
    raw = environ.get(key)
    if raw is None or raw == "":
        return None
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"{key} must be an integer, got '{raw}'")
    if value < 1:
        raise ConfigurationError(f"{key} must be at least 1, got {value}")
    return value


def _flag(environ: Mapping[str, str], key: str) -> Optional[bool]:
    raw = environ.get(key)
    if raw is None or raw == "":
        return None
    if raw.lower() in ("1", "true", "yes", "on"):
        return True
    if raw.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"{key} must be 0 or 1, got '{raw}'")


def load_configuration(environ: Optional[Mapping[str, str]] = None) -> RunConfiguration:
    """
    Build a RunConfiguration from environment variables.

    Args:
        environ: Mapping to read from; os.environ is used when None

    Returns:
        RunConfiguration with MADVEC_MAX_STEPS, MADVEC_DEPTH, MADVEC_WINDOW and
        MADVEC_VERIFY applied

    Raises:
        ConfigurationError: If a variable is present but malformed
    """
    env = os.environ if environ is None else environ
    config = RunConfiguration()
    return config.with_overrides(
        max_steps=_positive_int(env, MAX_STEPS_ENV),
        depth=_positive_int(env, DEPTH_ENV),
        search_window=_positive_int(env, WINDOW_ENV),
        verify=_flag(env, VERIFY_ENV),
    )


class FuelGauge:
    """
    Thread-safe counter of stream pulls with an optional limit.

    Every stream charges one unit per produced row or consumed raw vector.
    """

    def __init__(self, limit: Optional[int] = None) -> None:
        self._lock = threading.Lock()
        self._limit = limit
        self._used = 0

    @property
    def used(self) -> int:
        return self._used

    @property
    def limit(self) -> Optional[int]:
        return self._limit

    def reset(self, limit: Optional[int] = None) -> None:
        with self._lock:
            self._limit = limit
            self._used = 0

    def consume(self, units: int = 1) -> None:
        """
        Charge pulls against the budget.

        Raises:
            FuelExhaustedError: If the limit is exceeded
        """
        with self._lock:
            self._used += units
            if self._limit is not None and self._used > self._limit:
                raise FuelExhaustedError(
                    f"Stream pull budget of {self._limit} exhausted ({MAX_STEPS_ENV})"
                )


# Reset by the CLI from RunConfiguration.max_steps
FUEL = FuelGauge()
