"""
Elements of the local field K = GF(q)((t)).

A LaurentNumber is a finite Laurent polynomial sum(c_l * t^l) with digits c_l in GF(q), stored
sparsely as sorted (exponent, digit index) pairs with no zero digits. The prime element is t
itself, so multiplication by a power of the prime is an exponent shift.

Provides:
- LaurentNumber: ring arithmetic, valuation, absolute value, integer/fractional parts
- parse_laurent(): read the `2*t^-1 + t^0` literal syntax used by scripts
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .gfq import FieldParams, FieldParamsError, GFqElem, field_tables

_TERM_RE = re.compile(r"^(?:(\d+)\s*\*\s*)?t(?:\s*\^\s*(-?\d+))?$")


@dataclass(frozen=True)
class LaurentNumber:
    """A finite Laurent polynomial over GF(q) in the prime element t."""

    field: FieldParams
    terms: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_terms(
        cls, field: FieldParams, terms: Mapping[int, int] | Iterable[tuple[int, int]]
    ) -> LaurentNumber:
        """
        Build a canonical element from (exponent, digit index) pairs.

        Repeated exponents are added in GF(q); zero digits are dropped.
        """
        add = field_tables(field).add
        acc: dict[int, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exponent, digit in items:
            if not 0 <= digit < field.q:
                raise FieldParamsError(f"digit {digit} outside [0, {field.q})")
            acc[exponent] = add[acc.get(exponent, 0)][digit]
        return cls(field, tuple(sorted((e, d) for e, d in acc.items() if d)))

    @classmethod
    def zero(cls, field: FieldParams) -> LaurentNumber:
        return cls(field)

    @classmethod
    def monomial(cls, field: FieldParams, digit: int, exponent: int) -> LaurentNumber:
        """digit * t^exponent."""
        return cls.from_terms(field, [(exponent, digit)])

    @classmethod
    def prime_power(cls, field: FieldParams, k: int) -> LaurentNumber:
        """The element t^k."""
        return cls.monomial(field, 1, k)

    @cached_property
    def digit_map(self) -> dict[int, int]:
        return dict(self.terms)

    def digit(self, exponent: int) -> int:
        """Digit index at the given exponent (0 when absent)."""
        return self.digit_map.get(exponent, 0)

    def digit_elem(self, exponent: int) -> GFqElem:
        return GFqElem(self.field, self.digit(exponent))

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def valuation(self) -> int | float:
        """Smallest exponent with a nonzero digit; math.inf for zero."""
        return self.terms[0][0] if self.terms else math.inf

    @property
    def max_exponent(self) -> int | float:
        return self.terms[-1][0] if self.terms else -math.inf

    def abs_exponent(self) -> int | float:
        """k with |x| = q^k; -math.inf for zero."""
        return -self.valuation

    def abs_value(self) -> Fraction:
        """|x| = q^(-valuation) as an exact rational, 0 for x = 0."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.field.q) ** (-self.terms[0][0])

    def _check(self, other: LaurentNumber) -> None:
        if other.field != self.field:
            raise FieldParamsError(f"cannot combine elements of {self.field} and {other.field}")

    def __add__(self, other: LaurentNumber) -> LaurentNumber:
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        return LaurentNumber.from_terms(self.field, self.terms + other.terms)

    def __neg__(self) -> LaurentNumber:
        neg = field_tables(self.field).neg
        return LaurentNumber(self.field, tuple((e, neg[d]) for e, d in self.terms))

    def __sub__(self, other: LaurentNumber) -> LaurentNumber:
        return self + (-other)

    def __mul__(self, other: LaurentNumber) -> LaurentNumber:
        self._check(other)
        mul = field_tables(self.field).mul
        return LaurentNumber.from_terms(
            self.field,
            [(e1 + e2, mul[d1][d2]) for e1, d1 in self.terms for e2, d2 in other.terms],
        )

    def scale_digit(self, digit: int) -> LaurentNumber:
        """Multiply every digit by the GF(q) element with the given index."""
        row = field_tables(self.field).mul[digit]
        return LaurentNumber.from_terms(self.field, [(e, row[d]) for e, d in self.terms])

    def shift(self, k: int) -> LaurentNumber:
        """Multiply by t^k."""
        if k == 0:
            return self
        return LaurentNumber(self.field, tuple((e + k, d) for e, d in self.terms))

    def reduce(self, level: int) -> LaurentNumber:
        """Drop digits at exponents >= level (reduction modulo the ideal of that level)."""
        if not self.terms or self.terms[-1][0] < level:
            return self
        return LaurentNumber(self.field, tuple((e, d) for e, d in self.terms if e < level))

    def high_part(self, level: int) -> LaurentNumber:
        """Keep only digits at exponents >= level."""
        if not self.terms or self.terms[0][0] >= level:
            return self
        return LaurentNumber(self.field, tuple((e, d) for e, d in self.terms if e >= level))

    def fractional_part(self) -> LaurentNumber:
        """Digits at exponents <= -1; always an element of the translation lattice."""
        return self.reduce(0)

    def integer_part(self) -> LaurentNumber:
        """x - frac(x), an element of the ring of integers."""
        return self.high_part(0)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, d in self.terms:
            if e == 0:
                parts.append(str(d))
            elif d == 1:
                parts.append(f"t^{e}")
            else:
                parts.append(f"{d}*t^{e}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LaurentNumber({self})"


def parse_laurent(field: FieldParams, text: str) -> LaurentNumber:
    """
    Parse a literal such as `t^-2 + 2*t^-1 + 1`.

    Args:
        field: Field the digits belong to
        text: Terms separated by `+`; each is `d`, `t^e` or `d*t^e` with d a digit index

    Returns:
        The parsed element

    Raises:
        ValueError: If a term is malformed or a digit is out of range
    """
    terms = []
    for raw in text.split("+"):
        term = raw.strip()
        if term.isdigit():
            terms.append((0, int(term)))
            continue
        match = _TERM_RE.match(term)
        if not match:
            raise ValueError(f"Invalid Laurent term: {term!r}")
        digit = int(match.group(1)) if match.group(1) else 1
        exponent = int(match.group(2)) if match.group(2) is not None else 1
        terms.append((exponent, digit))
    return LaurentNumber.from_terms(field, terms)


def lf_add(x: LaurentNumber, y: LaurentNumber) -> LaurentNumber:
    return x + y


def lf_mul(x: LaurentNumber, y: LaurentNumber) -> LaurentNumber:
    return x * y


def lf_valuation(x: LaurentNumber) -> int | float:
    return x.valuation


def lf_abs(x: LaurentNumber) -> Fraction:
    return x.abs_value()


def lf_fractional_part(x: LaurentNumber) -> LaurentNumber:
    return x.fractional_part()


def lf_neg(x: LaurentNumber) -> LaurentNumber:
    return -x


def lf_sub(x: LaurentNumber, y: LaurentNumber) -> LaurentNumber:
    return x - y


def lf_shift(x: LaurentNumber, k: int) -> LaurentNumber:
    return x.shift(k)


def lf_reduce(x: LaurentNumber, level: int) -> LaurentNumber:
    return x.reduce(level)


def lf_integer_part(x: LaurentNumber) -> LaurentNumber:
    return x.integer_part()
