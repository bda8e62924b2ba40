"""
Exact arithmetic in the cyclotomic field Q(zeta_p) and the fixed additive character of K.

CycloNumber stores coordinates in the basis 1, zeta, ..., zeta^(p-2), using
zeta^(p-1) = -(1 + zeta + ... + zeta^(p-2)) to keep the representation unique. The character
is chi(x) = zeta^Tr(c_-1(x)), where c_-1(x) is the digit of x at exponent -1: it is trivial on O
and nontrivial on the ideal of level -1.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from loguru import logger

from .gfq import field_tables
from .locfield import LaurentNumber


class CycloError(ValueError):
    """Invalid cyclotomic operation (mismatched p, division by zero)."""

    pass


class NonRationalValueError(CycloError):
    """An order comparison was requested for a value that is not rational."""

    pass


class CharacterDomainError(ValueError):
    """Character level requested for the zero element."""

    pass


Scalar = int | Fraction


@dataclass(frozen=True, eq=False)
class CycloNumber:
    """An exact element of Q(zeta_p)."""

    p: int
    coeffs: tuple[Fraction, ...]

    @classmethod
    def from_rational(cls, p: int, value: Scalar) -> CycloNumber:
        return cls(p, (Fraction(value),) + (Fraction(0),) * (p - 2))

    @classmethod
    def zero(cls, p: int) -> CycloNumber:
        return cls.from_rational(p, 0)

    @classmethod
    def one(cls, p: int) -> CycloNumber:
        return cls.from_rational(p, 1)

    @classmethod
    def root(cls, p: int, k: int) -> CycloNumber:
        """zeta^k."""
        full = [Fraction(0)] * p
        full[k % p] = Fraction(1)
        return cls._reduced(p, full)

    @classmethod
    def _reduced(cls, p: int, full: Sequence[Fraction]) -> CycloNumber:
        top = full[p - 1]
        return cls(p, tuple(full[i] - top for i in range(p - 1)))

    def _full(self) -> list[Fraction]:
        return [*self.coeffs, Fraction(0)]

    def _coerce(self, other: CycloNumber | Scalar) -> CycloNumber:
        if isinstance(other, CycloNumber):
            if other.p != self.p:
                raise CycloError(f"cannot combine Q(zeta_{self.p}) and Q(zeta_{other.p})")
            return other
        if isinstance(other, int | Fraction):
            return CycloNumber.from_rational(self.p, other)
        return NotImplemented

    def __add__(self, other: CycloNumber | Scalar) -> CycloNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return CycloNumber(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs, strict=True)))

    __radd__ = __add__

    def __neg__(self) -> CycloNumber:
        return CycloNumber(self.p, tuple(-a for a in self.coeffs))

    def __sub__(self, other: CycloNumber | Scalar) -> CycloNumber:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> CycloNumber:
        return (-self) + other

    def __mul__(self, other: CycloNumber | Scalar) -> CycloNumber:
        if isinstance(other, int | Fraction):
            return CycloNumber(self.p, tuple(a * other for a in self.coeffs))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = self.p
        full = [Fraction(0)] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        full[(i + j) % p] += a * b
        return CycloNumber._reduced(p, full)

    __rmul__ = __mul__

    def __truediv__(self, other: CycloNumber | Scalar) -> CycloNumber:
        if isinstance(other, int | Fraction):
            if other == 0:
                raise CycloError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def galois(self, k: int) -> CycloNumber:
        """Image under the automorphism zeta -> zeta^k (k prime to p)."""
        p = self.p
        full = [Fraction(0)] * p
        for i, a in enumerate(self.coeffs):
            full[(i * k) % p] += a
        return CycloNumber._reduced(p, full)

    def conj(self) -> CycloNumber:
        """Complex conjugate, zeta -> zeta^(p-1)."""
        return self.galois(self.p - 1)

    def abs_sq(self) -> CycloNumber:
        """z * conj(z), a real element."""
        return self * self.conj()

    def norm(self) -> Fraction:
        """Field norm down to Q: the product of all Galois conjugates."""
        product = CycloNumber.one(self.p)
        for k in range(1, self.p):
            product = product * self.galois(k)
        return product.coeffs[0]

    def inverse(self) -> CycloNumber:
        """Multiplicative inverse via the conjugates other than the identity."""
        if self.is_zero():
            raise CycloError("division by zero")
        product = CycloNumber.one(self.p)
        for k in range(2, self.p):
            product = product * self.galois(k)
        return product * (1 / self.norm())

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_real(self) -> bool:
        return self == self.conj()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        """
        The value as a rational number.

        Raises:
            NonRationalValueError: If the value does not lie in Q
        """
        if not self.is_rational():
            raise NonRationalValueError(f"{self} is not rational; order comparison is undefined")
        return self.coeffs[0]

    def approx(self) -> complex:
        """Floating-point value in the embedding zeta = exp(2 pi i / p); diagnostic only."""
        return sum(
            (complex(float(a)) * cmath.exp(2j * math.pi * i / self.p) for i, a in enumerate(self.coeffs) if a),
            complex(0),
        )

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CycloNumber):
            return self.p == other.p and self.coeffs == other.coeffs
        if isinstance(other, int | Fraction):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.p, self.coeffs))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __lt__(self, other: CycloNumber | Scalar) -> bool:
        return self.to_fraction() < _as_fraction(other)

    def __le__(self, other: CycloNumber | Scalar) -> bool:
        return self.to_fraction() <= _as_fraction(other)

    def __gt__(self, other: CycloNumber | Scalar) -> bool:
        return self.to_fraction() > _as_fraction(other)

    def __ge__(self, other: CycloNumber | Scalar) -> bool:
        return self.to_fraction() >= _as_fraction(other)

    @cached_property
    def _text(self) -> str:
        parts: list[tuple[bool, str]] = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            magnitude = abs(a)
            if i == 0:
                body = str(magnitude)
            else:
                power = "zeta" if i == 1 else f"zeta^{i}"
                body = power if magnitude == 1 else f"{magnitude}*{power}"
            parts.append((a < 0, body))
        if not parts:
            return "0"
        negative, body = parts[0]
        text = f"-{body}" if negative else body
        for negative, body in parts[1:]:
            text += f" - {body}" if negative else f" + {body}"
        return text

    def __str__(self) -> str:
        return self._text

    def __repr__(self) -> str:
        return f"CycloNumber(p={self.p}, {self._text})"


def _as_fraction(value: CycloNumber | Scalar) -> Fraction:
    if isinstance(value, CycloNumber):
        return value.to_fraction()
    return Fraction(value)


@dataclass(frozen=True)
class CharValue:
    """A p-th root of unity zeta^exponent."""

    p: int
    exponent: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.p)

    def __mul__(self, other: CharValue) -> CharValue:
        return CharValue(self.p, self.exponent + other.exponent)

    def conj(self) -> CharValue:
        return CharValue(self.p, -self.exponent)

    def is_trivial(self) -> bool:
        return self.exponent == 0

    def to_cyclo(self) -> CycloNumber:
        return CycloNumber.root(self.p, self.exponent)

    def __str__(self) -> str:
        return str(self.to_cyclo())


def chi(x: LaurentNumber) -> CharValue:
    """The character chi(x) = zeta^Tr(c_-1(x))."""
    tables = field_tables(x.field)
    return CharValue(x.field.p, tables.trace[x.digit(-1)])


def chi_product(a: LaurentNumber, x: LaurentNumber) -> CharValue:
    """
    chi(a * x), reading only the digits of the product at exponent -1.

    The digit of a*x at -1 is sum(a_e * x_(-1-e)), so the full product is never formed.
    """
    tables = field_tables(a.field)
    acc = 0
    for e, d in a.terms:
        dx = x.digit(-1 - e)
        if dx:
            acc = tables.add[acc][tables.mul[d][dx]]
    return CharValue(a.field.p, tables.trace[acc])


def chi_y(y: LaurentNumber, x: LaurentNumber) -> CharValue:
    """The character chi_y(x) = chi(y x)."""
    return chi_product(y, x)


def char_level(y: LaurentNumber) -> int:
    """
    Smallest k such that chi_y is constant on cosets of the ideal of level k.

    Raises:
        CharacterDomainError: If y is zero
    """
    if y.is_zero():
        raise CharacterDomainError("chi_0 is constant; it has no finite level")
    return 1 - int(y.valuation)


def cy_rank(rows: Sequence[Sequence[CycloNumber]]) -> int:
    """
    Exact rank of a matrix over Q(zeta_p) by Gaussian elimination.

    Args:
        rows: Matrix rows; all entries share p

    Returns:
        The rank
    """
    m = [list(row) for row in rows]
    if not m:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    piv_r = 0
    for piv_c in range(n_cols):
        for i_row in range(piv_r, n_rows):
            if not m[i_row][piv_c].is_zero():
                break
        else:
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
        fp_inv = m[piv_r][piv_c].inverse()
        for r in range(piv_r + 1, n_rows):
            fr = m[r][piv_c]
            if fr.is_zero():
                continue
            frp = fr * fp_inv
            for c in range(piv_c, n_cols):
                m[r][c] = m[r][c] - m[piv_r][c] * frp
        piv_r += 1
        if piv_r == n_rows:
            break
    logger.debug(f"Fiber matrix {n_rows}x{n_cols} has rank {piv_r}")
    return piv_r


def cy_add(a: CycloNumber, b: CycloNumber) -> CycloNumber:
    return a + b


def cy_mul(a: CycloNumber, b: CycloNumber) -> CycloNumber:
    return a * b


def cy_conj(a: CycloNumber) -> CycloNumber:
    return a.conj()


def cy_abs_sq(a: CycloNumber) -> CycloNumber:
    return a.abs_sq()


def cy_is_zero(a: CycloNumber) -> bool:
    return a.is_zero()


def cy_is_real(a: CycloNumber) -> bool:
    return a.is_real()
