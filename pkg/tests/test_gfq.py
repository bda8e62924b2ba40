"""Tests for finite-field parameters and GF(q) arithmetic."""

import itertools

import pytest

from lfwave import (
    FieldParams,
    FieldParamsError,
    default_modulus,
    field_tables,
    gf_add,
    gf_from_index,
    gf_index,
    gf_inv,
    gf_mul,
    gf_neg,
    gf_sub,
    gf_trace,
)
from lfwave.gfq import digits_to_index, index_to_digits


class TestFieldParams:
    """Test validation of field parameters."""

    def test_prime_field(self):
        """GF(p) gets the modulus x."""
        params = FieldParams(5)
        assert params.q == 5
        assert params.modulus == (0, 1)
        assert str(params) == "GF(5)"

    def test_default_modulus(self):
        """Default modulus is the smallest monic irreducible, low degree first."""
        assert default_modulus(2, 2) == (1, 1, 1)
        assert default_modulus(2, 3) == (1, 1, 0, 1)
        assert FieldParams(2, 2).modulus == (1, 1, 1)

    def test_explicit_modulus(self):
        """An irreducible modulus is accepted as given."""
        params = FieldParams(3, 2, (1, 0, 1))
        assert params.q == 9
        assert params.modulus == (1, 0, 1)

    def test_prime_field_modulus(self):
        """GF(p) accepts only the modulus x."""
        assert FieldParams(5, 1, (0, 1)).modulus == (0, 1)
        with pytest.raises(FieldParamsError):
            FieldParams(5, 1, (3, 1))
        with pytest.raises(FieldParamsError):
            FieldParams(2, 1, (1, 1))

    def test_non_prime(self):
        """p must be prime."""
        with pytest.raises(FieldParamsError):
            FieldParams(4)

    def test_order_too_large(self):
        """q is capped at MAX_FIELD_ORDER."""
        with pytest.raises(FieldParamsError):
            FieldParams(2, 9)

    def test_reducible_modulus(self):
        """x^2 + 1 = (x + 1)^2 over GF(2) is rejected."""
        with pytest.raises(FieldParamsError):
            FieldParams(2, 2, (1, 0, 1))

    def test_malformed_modulus(self):
        """Non-monic or wrong-degree moduli are rejected."""
        with pytest.raises(FieldParamsError):
            FieldParams(2, 2, (1, 1, 0))
        with pytest.raises(FieldParamsError):
            FieldParams(2, 2, (1, 1))
        with pytest.raises(FieldParamsError):
            FieldParams(3, 2, (1, 5, 1))

    def test_error_is_value_error(self):
        """FieldParamsError is a ValueError."""
        assert issubclass(FieldParamsError, ValueError)


class TestDigits:
    """Test the digit-index encoding."""

    def test_round_trip(self, field):
        """index_to_digits and digits_to_index are inverse."""
        for n in range(field.q):
            digits = index_to_digits(field, n)
            assert len(digits) == field.c
            assert digits_to_index(field, digits) == n

    def test_invalid_digits(self, gf4):
        """Digit vectors of the wrong length or range are rejected."""
        with pytest.raises(FieldParamsError):
            digits_to_index(gf4, (1,))
        with pytest.raises(FieldParamsError):
            digits_to_index(gf4, (2, 0))


class TestArithmetic:
    """Test field axioms exhaustively."""

    def test_additive_group(self, field):
        """Addition is commutative with identity 0 and inverses."""
        zero = gf_from_index(field, 0)
        for a, b in itertools.product(range(field.q), repeat=2):
            x, y = gf_from_index(field, a), gf_from_index(field, b)
            assert gf_add(x, y) == gf_add(y, x)
            assert gf_sub(gf_add(x, y), y) == x
        for a in range(field.q):
            x = gf_from_index(field, a)
            assert gf_add(x, zero) == x
            assert gf_add(x, gf_neg(x)) == zero

    def test_distributive(self, field):
        """a(b + c) = ab + ac."""
        elems = [gf_from_index(field, n) for n in range(field.q)]
        for a, b, c in itertools.product(elems, repeat=3):
            assert gf_mul(a, gf_add(b, c)) == gf_add(gf_mul(a, b), gf_mul(a, c))

    def test_inverse(self, field):
        """Every nonzero element has an inverse."""
        one = gf_from_index(field, 1)
        for n in range(1, field.q):
            x = gf_from_index(field, n)
            assert gf_mul(x, gf_inv(x)) == one

    def test_inverse_of_zero(self, field):
        """Zero has no inverse."""
        with pytest.raises(FieldParamsError):
            gf_inv(gf_from_index(field, 0))

    def test_gf4_multiplication(self, gf4):
        """With modulus x^2 + x + 1, x * x = x + 1."""
        x = gf_from_index(gf4, 2)
        assert gf_index(gf_mul(x, x)) == 3

    def test_characteristic(self, field):
        """p * a = 0."""
        for n in range(field.q):
            x = gf_from_index(field, n)
            total = gf_from_index(field, 0)
            for _ in range(field.p):
                total = gf_add(total, x)
            assert gf_index(total) == 0

    def test_index_out_of_range(self, gf3):
        """Element indices must lie in [0, q)."""
        with pytest.raises(FieldParamsError):
            gf_from_index(gf3, 3)

    def test_mixed_fields(self, gf2, gf3):
        """Elements of different fields cannot be combined."""
        with pytest.raises(FieldParamsError):
            gf_add(gf_from_index(gf2, 1), gf_from_index(gf3, 1))


class TestTrace:
    """Test the absolute trace."""

    def test_additive(self, field):
        """Tr(a + b) = Tr(a) + Tr(b) mod p."""
        for a, b in itertools.product(range(field.q), repeat=2):
            x, y = gf_from_index(field, a), gf_from_index(field, b)
            assert gf_trace(gf_add(x, y)) == (gf_trace(x) + gf_trace(y)) % field.p

    def test_nontrivial(self, field):
        """The trace is onto GF(p)."""
        values = {gf_trace(gf_from_index(field, n)) for n in range(field.q)}
        assert values == set(range(field.p))

    def test_prime_field_identity(self, gf5):
        """Over GF(p) the trace is the identity."""
        assert field_tables(gf5).trace == (0, 1, 2, 3, 4)

    def test_tables_cached(self, gf4):
        """Tables are built once per field."""
        assert field_tables(gf4) is field_tables(FieldParams(2, 2))
