"""
Finite field GF(q), q = p^c.

Elements are identified with their digit index n = sum(a_k * p^k), where (a_k) are the
coordinates of the element in the power basis 1, x, ..., x^(c-1) of GF(p)[x]/(modulus).
The index doubles as the digit alphabet of local-field expansions and as the base-q digit of
lattice indices.

The field itself is built with galois; arithmetic afterwards runs on small lookup tables that
are computed once per field.
"""

from dataclasses import dataclass
from functools import lru_cache

import galois
import numpy as np
from loguru import logger

MAX_FIELD_ORDER = 256


class FieldParamsError(ValueError):
    """Invalid or mismatched finite-field parameters."""

    pass


def default_modulus(p: int, c: int) -> tuple[int, ...]:
    """
    Lexicographically smallest monic irreducible polynomial of degree c over GF(p).

    Args:
        p: Prime characteristic
        c: Extension degree

    Returns:
        Coefficients, low degree first (the leading 1 is the last entry)
    """
    if c == 1:
        return (0, 1)
    poly = galois.irreducible_poly(p, c, method="min")
    # galois lists coefficients high degree first
    return tuple(int(a) for a in reversed(poly.coeffs))


@dataclass(frozen=True)
class FieldParams:
    """
    Parameters of GF(q): characteristic p, degree c and the defining modulus.

    The modulus is stored low degree first. When omitted it defaults to
    `default_modulus(p, c)`.
    """

    p: int
    c: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        if not galois.is_prime(self.p):
            raise FieldParamsError(f"p={self.p} is not prime")
        if self.c < 1:
            raise FieldParamsError(f"c={self.c} must be positive")
        if self.p**self.c > MAX_FIELD_ORDER:
            raise FieldParamsError(f"q={self.p}^{self.c} exceeds the supported order {MAX_FIELD_ORDER}")

        if not self.modulus:
            object.__setattr__(self, "modulus", default_modulus(self.p, self.c))
            return

        modulus = tuple(int(a) for a in self.modulus)
        object.__setattr__(self, "modulus", modulus)
        if len(modulus) != self.c + 1 or modulus[-1] != 1:
            raise FieldParamsError(f"modulus {list(modulus)} is not monic of degree {self.c}")
        if any(not 0 <= a < self.p for a in modulus):
            raise FieldParamsError(f"modulus {list(modulus)} has coefficients outside [0, {self.p})")
        if self.c == 1 and modulus != (0, 1):
            # digits of GF(p) are the residues themselves
            raise FieldParamsError(f"modulus {list(modulus)} for GF({self.p}): a prime field takes only x (0,1)")
        if self.c > 1:
            poly = galois.Poly(list(reversed(modulus)), field=galois.GF(self.p))
            if not poly.is_irreducible():
                raise FieldParamsError(f"modulus {list(modulus)} is reducible over GF({self.p})")

    @property
    def q(self) -> int:
        """Field order p^c."""
        return self.p**self.c

    def __str__(self) -> str:
        return f"GF({self.p}^{self.c})" if self.c > 1 else f"GF({self.p})"


@dataclass(frozen=True)
class FieldTables:
    """Operation tables of one field, indexed by digit index."""

    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    inv: tuple[int, ...]
    trace: tuple[int, ...]


def _as_rows(arr) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(row) for row in arr.view(np.ndarray).tolist())


@lru_cache(maxsize=None)
def field_tables(params: FieldParams) -> FieldTables:
    """
    Build (once) the addition, multiplication, negation, inverse and trace tables.

    galois represents an element by the integer whose base-p digits are its power-basis
    coordinates, which is exactly our digit index, so tables read off directly.
    """
    logger.debug(f"Building operation tables for {params} with modulus {list(params.modulus)}")
    if params.c == 1:
        gf = galois.GF(params.p)
    else:
        irreducible = galois.Poly(list(reversed(params.modulus)), field=galois.GF(params.p))
        gf = galois.GF(params.q, irreducible_poly=irreducible)

    elements = gf.elements
    add = _as_rows(elements[:, np.newaxis] + elements[np.newaxis, :])
    mul = _as_rows(elements[:, np.newaxis] * elements[np.newaxis, :])
    neg = tuple((-elements).view(np.ndarray).tolist())
    if params.c == 1:
        trace = tuple(range(params.p))
    else:
        trace = tuple(elements.field_trace().view(np.ndarray).tolist())

    inv = [0] * params.q
    for a in range(1, params.q):
        inv[a] = mul[a].index(1)

    return FieldTables(add=add, mul=mul, neg=neg, inv=tuple(inv), trace=trace)


@dataclass(frozen=True)
class GFqElem:
    """An element of GF(q), stored by digit index."""

    field: FieldParams
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.field.q:
            raise FieldParamsError(f"index {self.index} outside [0, {self.field.q})")

    @property
    def digits(self) -> tuple[int, ...]:
        """Power-basis coordinates (a_0, ..., a_{c-1})."""
        return index_to_digits(self.field, self.index)

    def is_zero(self) -> bool:
        return self.index == 0

    def _check(self, other: "GFqElem") -> None:
        if other.field != self.field:
            raise FieldParamsError(f"cannot combine elements of {self.field} and {other.field}")

    def __add__(self, other: "GFqElem") -> "GFqElem":
        self._check(other)
        return GFqElem(self.field, field_tables(self.field).add[self.index][other.index])

    def __sub__(self, other: "GFqElem") -> "GFqElem":
        return self + (-other)

    def __neg__(self) -> "GFqElem":
        return GFqElem(self.field, field_tables(self.field).neg[self.index])

    def __mul__(self, other: "GFqElem") -> "GFqElem":
        self._check(other)
        return GFqElem(self.field, field_tables(self.field).mul[self.index][other.index])

    def inverse(self) -> "GFqElem":
        if self.index == 0:
            raise FieldParamsError("zero has no multiplicative inverse")
        return GFqElem(self.field, field_tables(self.field).inv[self.index])

    def trace(self) -> int:
        """Absolute trace down to the prime field, as an integer in [0, p)."""
        return field_tables(self.field).trace[self.index]

    def __str__(self) -> str:
        return str(self.index)


def index_to_digits(params: FieldParams, n: int) -> tuple[int, ...]:
    """Base-p digits of n, low first, padded to length c."""
    digits = []
    for _ in range(params.c):
        n, a = divmod(n, params.p)
        digits.append(a)
    return tuple(digits)


def digits_to_index(params: FieldParams, digits: tuple[int, ...] | list[int]) -> int:
    """Inverse of index_to_digits."""
    if len(digits) != params.c or any(not 0 <= a < params.p for a in digits):
        raise FieldParamsError(f"invalid digit vector {list(digits)} for {params}")
    return sum(a * params.p**k for k, a in enumerate(digits))


def gf_from_index(params: FieldParams, n: int) -> GFqElem:
    """Element with digit index n, 0 <= n < q."""
    return GFqElem(params, n)


def gf_index(a: GFqElem) -> int:
    """Digit index of a."""
    return a.index


def gf_add(a: GFqElem, b: GFqElem) -> GFqElem:
    return a + b


def gf_mul(a: GFqElem, b: GFqElem) -> GFqElem:
    return a * b


def gf_trace(a: GFqElem) -> int:
    return a.trace()


def gf_neg(a: GFqElem) -> GFqElem:
    return -a


def gf_sub(a: GFqElem, b: GFqElem) -> GFqElem:
    return a - b


def gf_inv(a: GFqElem) -> GFqElem:
    return a.inverse()
