"""Tests for exact scalar arithmetic and field configuration."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from madvec.errors import InputFormatError, SpecMismatchError, ZeroDivisionFieldError
from madvec.field import FieldScalar, FieldSpec, is_prime, scalar_arith, scalar_inv
from madvec.field_config import (
    DEFAULT_FIELD_NAME,
    get_display_info,
    get_field_display_name,
    get_field_spec,
    get_supported_fields,
    is_field_supported,
)

GF7 = FieldSpec.prime(7)
Q = FieldSpec.rationals()


class TestFieldSpec:
    """Test suite for field descriptions."""

    def test_prime_fields_need_a_prime(self) -> None:
        """Only primes below 2^16 are accepted as characteristics."""
        assert FieldSpec.prime(65521).p == 65521
        for bad in (0, 1, 4, 65536, 65537):
            with pytest.raises(ValueError):
                FieldSpec.prime(bad)

    def test_names(self) -> None:
        assert GF7.name == "gf7"
        assert Q.name == "q"
        assert str(GF7) == "GF(7)"
        assert str(Q) == "Q"
        assert GF7.is_finite and not Q.is_finite

    def test_is_prime(self) -> None:
        assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]

    def test_parse_and_text(self) -> None:
        """Text encodings are decimal residues and reduced fractions."""
        assert GF7.parse("10").to_text() == "3"
        assert GF7.parse("-1").to_text() == "6"
        assert Q.parse("6/4").to_text() == "3/2"
        assert Q.parse("-4/2").to_text() == "-2"

    def test_parse_rejects_bad_text(self) -> None:
        for spec, text in ((GF7, "1/2"), (GF7, "x"), (Q, "1/0"), (Q, "")):
            with pytest.raises(InputFormatError):
                spec.parse(text)

    def test_fractions_map_into_prime_fields(self) -> None:
        assert GF7.scalar(Fraction(1, 2)) == GF7.scalar(4)
        with pytest.raises(ZeroDivisionFieldError):
            GF7.scalar(Fraction(1, 7))


class TestScalarArithmetic:
    """Test suite for scalar_arith and scalar_inv."""

    def test_examples(self) -> None:
        assert scalar_arith(GF7.scalar(5), GF7.scalar(4), "add") == GF7.scalar(2)
        assert scalar_arith(GF7.scalar(3), GF7.scalar(5), "div") == GF7.scalar(2)
        difference = scalar_arith(Q.scalar(Fraction(1, 2)), Q.scalar(Fraction(1, 3)), "sub")
        assert difference.to_text() == "1/6"
        assert scalar_inv(GF7.scalar(3)) == GF7.scalar(5)
        assert scalar_inv(Q.scalar(Fraction(-2, 3))).to_text() == "-3/2"

    def test_division_by_zero(self) -> None:
        with pytest.raises(ZeroDivisionFieldError):
            scalar_arith(GF7.one(), GF7.zero(), "div")

    def test_scalars_are_normalized(self) -> None:
        gf5 = FieldSpec.prime(5)
        assert FieldScalar(gf5, 7) == gf5.scalar(2)
        assert FieldScalar(gf5, -1).value == 4
        assert FieldScalar(Q, Fraction(2, 4)).to_text() == "1/2"
        with pytest.raises(ZeroDivisionFieldError):
            scalar_inv(Q.zero())

    def test_mixed_fields_rejected(self) -> None:
        with pytest.raises(SpecMismatchError):
            GF7.one() + FieldSpec.prime(5).one()

    def test_unknown_operation(self) -> None:
        with pytest.raises(ValueError):
            scalar_arith(GF7.one(), GF7.one(), "pow")  # type: ignore[arg-type]

    @given(st.integers(1, 6))
    def test_inverse_law_gf7(self, a: int) -> None:
        x = GF7.scalar(a)
        assert x * scalar_inv(x) == GF7.one()

    @given(st.fractions().filter(lambda f: f != 0), st.fractions())
    def test_field_laws_over_q(self, a: Fraction, b: Fraction) -> None:
        x, y = Q.scalar(a), Q.scalar(b)
        assert (x + y) - y == x
        assert (x * y) / x == y
        assert x * (y + x) == x * y + x * x

    @given(st.integers(0, 10), st.integers(0, 10), st.integers(0, 10))
    def test_distributivity_gf11(self, a: int, b: int, c: int) -> None:
        spec = FieldSpec.prime(11)
        x, y, z = spec.scalar(a), spec.scalar(b), spec.scalar(c)
        assert x * (y + z) == x * y + x * z
        assert -(-x) == x


class TestFieldConfig:
    """Test suite for the field name registry."""

    def test_supported_fields(self) -> None:
        fields = get_supported_fields()
        assert fields[0] == "gf2"
        assert fields[-1] == "q"
        assert "gf13" in fields

    def test_is_field_supported(self) -> None:
        assert is_field_supported("gf2") is True
        assert is_field_supported("gf65521") is True
        assert is_field_supported("q") is True
        assert is_field_supported("gf4") is False
        assert is_field_supported("gf") is False
        assert is_field_supported("") is False
        assert is_field_supported(None) is False

    def test_get_field_spec(self) -> None:
        assert get_field_spec("gf5") == FieldSpec.prime(5)
        assert get_field_spec("q") == Q
        assert get_field_spec(None).name == DEFAULT_FIELD_NAME
        with pytest.raises(ValueError):
            get_field_spec("gf9")

    def test_display(self) -> None:
        assert get_field_display_name("gf2") == "GF(2)"
        assert get_field_display_name("gf17") == "GF(17)"
        assert get_field_display_name("r") == "Unknown"
        codes = [info["code"] for info in get_display_info()]
        assert codes == get_supported_fields()
