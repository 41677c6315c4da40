"""Tests for run configuration and the fuel gauge."""

import pytest

from madvec.config import (
    DEPTH_ENV,
    MAX_STEPS_ENV,
    VERIFY_ENV,
    WINDOW_ENV,
    FuelGauge,
    RunConfiguration,
    load_configuration,
)
from madvec.errors import ConfigurationError, FuelExhaustedError
from madvec.field import FieldSpec


class TestRunConfiguration:
    """Test suite for RunConfiguration."""

    def test_defaults(self) -> None:
        config = RunConfiguration()
        assert config.field_name == "gf2"
        assert config.spec == FieldSpec.prime(2)
        assert config.depth == 16
        assert config.max_steps is None

    def test_overrides_skip_none(self) -> None:
        config = RunConfiguration().with_overrides(field_name="gf3", depth=None)
        assert config.field_name == "gf3"
        assert config.depth == 16

    def test_load_from_environment(self) -> None:
        config = load_configuration({MAX_STEPS_ENV: "500", DEPTH_ENV: "8", WINDOW_ENV: ""})
        assert config.max_steps == 500
        assert config.depth == 8
        assert config.search_window == 64

    @pytest.mark.parametrize("raw", ["ten", "0", "-3"])
    def test_malformed_environment(self, raw: str) -> None:
        with pytest.raises(ConfigurationError):
            load_configuration({MAX_STEPS_ENV: raw})

    @pytest.mark.parametrize(
        "raw, expected", [("0", False), ("off", False), ("1", True), ("", True)]
    )
    def test_verify_flag(self, raw: str, expected: bool) -> None:
        assert RunConfiguration().verify
        assert load_configuration({VERIFY_ENV: raw}).verify is expected

    def test_malformed_verify_flag(self) -> None:
        with pytest.raises(ConfigurationError, match=VERIFY_ENV):
            load_configuration({VERIFY_ENV: "sometimes"})


class TestFuelGauge:
    """Test suite for the stream pull budget."""

    def test_unlimited(self) -> None:
        gauge = FuelGauge()
        gauge.consume(10_000)
        assert gauge.used == 10_000

    def test_limit_is_enforced(self) -> None:
        gauge = FuelGauge(3)
        gauge.consume(3)
        with pytest.raises(FuelExhaustedError):
            gauge.consume()

    def test_reset(self) -> None:
        gauge = FuelGauge(1)
        gauge.consume()
        gauge.reset(5)
        assert gauge.used == 0
        assert gauge.limit == 5
