"""
Exact calculus of Schwartz-Bruhat functions on K.

An SBFunction is a finite sum of ball indicators with cyclotomic coefficients. Dilations
introduce the scale q^(1/2); it is carried as a half-power tag so every value is
`coefficient * q^(half/2)` with half in {0, 1}, and squared quantities stay rational.

A StepFn holds real (or, when asked, cyclotomic) values on finitely many balls. With
`periodic_on_O` set it stands for the integral-periodic extension of its restriction to O;
otherwise it vanishes off its cells.

Provides:
- SBFunction: arithmetic, inner products, translation, dilation, Fourier transform
- StepFn: periodization weights, multiplicity, spectral and filter functions
- check_character_laws(): orthonormality of the characters chi_u(n) on O
"""

from __future__ import annotations

from collections.abc import Callable, Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from loguru import logger

from .charcyclo import CycloNumber, char_level, chi_product
from .gfq import FieldParams, FieldParamsError
from .locfield import LaurentNumber
from .setalg import Ball, ESet, fold_ball, merge_cells, refine
from .ztrans import DEFAULT_WINDOW, u_add, u_neg, u_of_index

Coefficient = CycloNumber | int | Fraction


class ScaleMismatchError(ValueError):
    """Values carry different powers of q^(1/2), or a scalar result would be irrational."""

    pass


@lru_cache(maxsize=None)
def _root(p: int, exponent: int) -> CycloNumber:
    return CycloNumber.root(p, exponent)


def _as_cyclo(field: FieldParams, value: Coefficient) -> CycloNumber:
    if isinstance(value, CycloNumber):
        if value.p != field.p:
            raise FieldParamsError(f"coefficient in Q(zeta_{value.p}) for a field of characteristic {field.p}")
        return value
    return CycloNumber.from_rational(field.p, value)


def _half_shift(half: int, j: int, q: int) -> tuple[int, Fraction]:
    """Absorb q^(j/2) into a value tagged `half`; returns the new tag and the rational factor."""
    total = half + j
    new_half = total % 2
    return new_half, Fraction(q) ** ((total - new_half) // 2)


def _overlay(
    first: Iterable[tuple[Ball, CycloNumber]], second: Iterable[tuple[Ball, CycloNumber]]
) -> list[tuple[Ball, tuple[CycloNumber | None, CycloNumber | None]]]:
    """Common refinement of two disjoint cell lists; each cell carries (first value, second value)."""

    def combine(a, b):
        return (a[0] if a[0] is not None else b[0], a[1] if a[1] is not None else b[1])

    items = [(ball, (v, None)) for ball, v in first] + [(ball, (None, v)) for ball, v in second]
    return refine(items, combine)


def _canonical(cells: Iterable[tuple[Ball, CycloNumber]]) -> tuple[tuple[Ball, CycloNumber], ...]:
    """Sum overlapping cells, drop zeros and merge sibling families."""
    summed = refine(cells)
    return tuple(merge_cells((ball, v) for ball, v in summed if not v.is_zero()))


def _modulate(
    cells: Iterable[tuple[Ball, CycloNumber]], y: LaurentNumber
) -> list[tuple[Ball, CycloNumber]]:
    """Multiply by xi -> chi(y xi), splitting cells until the character is constant on each."""
    if y.is_zero():
        return list(cells)
    level = char_level(y)
    p = y.field.p
    out = []
    for ball, v in cells:
        for piece in ball.split_to(level) if ball.level < level else [ball]:
            out.append((piece, v * _root(p, chi_product(y, piece.center).exponent)))
    return out


@dataclass(frozen=True)
class SBFunction:
    """
    A finite linear combination of ball indicators; the value on a cell is
    `coefficient * q^(half/2)`.
    """

    field: FieldParams
    cells: tuple[tuple[Ball, CycloNumber], ...] = ()
    half: int = 0

    @classmethod
    def from_cells(
        cls, field: FieldParams, cells: Iterable[tuple[Ball, Coefficient]], half: int = 0
    ) -> SBFunction:
        """Build the canonical function; overlapping cells add."""
        cells = _canonical((ball, _as_cyclo(field, v)) for ball, v in cells)
        return cls(field, cells, half if cells else 0)

    @classmethod
    def zero(cls, field: FieldParams) -> SBFunction:
        return cls(field)

    @classmethod
    def indicator(cls, e: ESet, coeff: Coefficient = 1) -> SBFunction:
        """coeff * ind(E)."""
        return cls.from_cells(e.field, ((ball, coeff) for ball in e.balls))

    def is_zero(self) -> bool:
        return not self.cells

    def _check(self, other: SBFunction) -> None:
        if other.field != self.field:
            raise FieldParamsError(f"cannot combine functions over {self.field} and {other.field}")

    def support(self) -> ESet:
        return ESet._from_disjoint(self.field, (ball for ball, _ in self.cells))

    def coefficient_at(self, x: LaurentNumber) -> CycloNumber:
        """Coefficient of the cell containing x (zero off the support); the half tag is not applied."""
        for ball, v in self.cells:
            if ball.contains_point(x):
                return v
        return CycloNumber.zero(self.field.p)

    def evaluate(self, x: LaurentNumber) -> CycloNumber:
        """
        f(x).

        Raises:
            ScaleMismatchError: If the value involves q^(1/2)
        """
        v = self.coefficient_at(x)
        if self.half and not v.is_zero():
            raise ScaleMismatchError(f"f({x}) = ({v}) * q^(1/2) is not in Q(zeta_{self.field.p})")
        return v

    def __add__(self, other: SBFunction) -> SBFunction:
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.half != self.half:
            raise ScaleMismatchError("cannot add functions with different q^(1/2) scale tags")
        return SBFunction.from_cells(self.field, self.cells + other.cells, self.half)

    def __neg__(self) -> SBFunction:
        return self.scale(-1)

    def __sub__(self, other: SBFunction) -> SBFunction:
        return self + (-other)

    def scale(self, c: Coefficient) -> SBFunction:
        c = _as_cyclo(self.field, c)
        return SBFunction.from_cells(self.field, ((ball, v * c) for ball, v in self.cells), self.half)

    def __mul__(self, other: SBFunction) -> SBFunction:
        """Pointwise product."""
        self._check(other)
        half, factor = _half_shift(self.half, other.half, self.field.q)
        cells = [
            (ball, a * b * factor)
            for ball, (a, b) in _overlay(self.cells, other.cells)
            if a is not None and b is not None
        ]
        return SBFunction.from_cells(self.field, cells, half)

    def conj(self) -> SBFunction:
        return SBFunction(self.field, tuple((ball, v.conj()) for ball, v in self.cells), self.half)

    def restrict(self, e: ESet) -> SBFunction:
        """f * ind(E)."""
        return self * SBFunction.indicator(e)

    def map_cells(self, fn: Callable[[Ball], Ball]) -> SBFunction:
        return SBFunction.from_cells(self.field, ((fn(ball), v) for ball, v in self.cells), self.half)

    def __str__(self) -> str:
        if not self.cells:
            return "0"
        scale = "q^(1/2)*" if self.half else ""
        return " + ".join(f"{scale}({v})*ind({ball})" for ball, v in self.cells)

    def to_json(self) -> dict:
        return {
            "half_power": self.half,
            "cells": {str(ball): str(v) for ball, v in self.cells},
        }


# =============================================================================
# Arithmetic and integrals
# =============================================================================


def sb_indicator(e: ESet, coeff: Coefficient = 1) -> SBFunction:
    return SBFunction.indicator(e, coeff)


def sb_add(f: SBFunction, g: SBFunction) -> SBFunction:
    return f + g


def sb_scale(f: SBFunction, c: Coefficient) -> SBFunction:
    return f.scale(c)


def sb_mul(f: SBFunction, g: SBFunction) -> SBFunction:
    return f * g


def sb_conj(f: SBFunction) -> SBFunction:
    return f.conj()


def sb_support(f: SBFunction) -> ESet:
    return f.support()


def sb_restrict(f: SBFunction, e: ESet) -> SBFunction:
    return f.restrict(e)


def sb_evaluate(f: SBFunction, x: LaurentNumber) -> CycloNumber:
    return f.evaluate(x)


def _rational_scalar(total: CycloNumber, half: int, q: int, what: str) -> CycloNumber:
    """total * q^(half/2) for half in {0, 1, 2}; q^(1/2) survives only on a zero total."""
    if half == 2:
        return total * q
    if half == 1 and not total.is_zero():
        raise ScaleMismatchError(f"{what} = ({total}) * q^(1/2) is not in Q(zeta_p)")
    return total


def sb_inner(f: SBFunction, g: SBFunction) -> CycloNumber:
    """<f, g> = integral of f * conj(g)."""
    f._check(g)
    total = CycloNumber.zero(f.field.p)
    for ball, (a, b) in _overlay(f.cells, g.cells):
        if a is not None and b is not None:
            total = total + a * b.conj() * ball.measure()
    return _rational_scalar(total, f.half + g.half, f.field.q, "<f, g>")


def sb_norm_sq(f: SBFunction) -> CycloNumber:
    """||f||^2, an exact real number."""
    total = sum((v.abs_sq() * ball.measure() for ball, v in f.cells), CycloNumber.zero(f.field.p))
    return total * f.field.q if f.half else total


def sb_integral_over(f: SBFunction, e: ESet) -> CycloNumber:
    """Integral of f over E."""
    total = CycloNumber.zero(f.field.p)
    for ball, (a, b) in _overlay(f.cells, ((ball, CycloNumber.one(f.field.p)) for ball in e.balls)):
        if a is not None and b is not None:
            total = total + a * ball.measure()
    return _rational_scalar(total, f.half, f.field.q, "integral")


def sb_integral(f: SBFunction) -> CycloNumber:
    total = sum((v * ball.measure() for ball, v in f.cells), CycloNumber.zero(f.field.p))
    return _rational_scalar(total, f.half, f.field.q, "integral")


# =============================================================================
# Translation, dilation and the Fourier transform
# =============================================================================


def sb_translate(f: SBFunction, k: int) -> SBFunction:
    """T_k f(x) = f(x - u(k))."""
    shift = u_of_index(f.field, k)
    return f.map_cells(lambda ball: ball.translate(shift))


def sb_rescale(f: SBFunction, j: int) -> SBFunction:
    """xi -> f(p^-j xi), with no normalizing factor: cell c + P^k goes to p^j c + P^(k+j)."""
    return f.map_cells(lambda ball: ball.dilate(j))


def sb_dilate(f: SBFunction, j: int) -> SBFunction:
    """D^j f(x) = q^(j/2) f(p^-j x)."""
    half, factor = _half_shift(f.half, j, f.field.q)
    rescaled = sb_rescale(f, j)
    return SBFunction.from_cells(f.field, ((ball, v * factor) for ball, v in rescaled.cells), half)


def _transform(f: SBFunction, sign: int) -> SBFunction:
    """
    Cell rule: ind(a + P^k) -> xi -> q^-k chi(sign * a * xi) ind(P^-k)(xi).

    The character is expanded at level 1 - v(a), where it becomes constant per cell.
    """
    cells = []
    for ball, v in f.cells:
        base = [(Ball.ideal(f.field, -ball.level), v * ball.measure())]
        y = ball.center if sign > 0 else -ball.center
        cells.extend(_modulate(base, y))
    result = SBFunction.from_cells(f.field, cells, f.half)
    logger.debug(f"Fourier transform: {len(f.cells)} cells -> {len(result.cells)} cells")
    return result


def sb_fourier(f: SBFunction) -> SBFunction:
    """f^(xi) = integral of f(x) chi(-xi x) dx."""
    return _transform(f, -1)


def sb_inv_fourier(f_hat: SBFunction) -> SBFunction:
    """f(x) = integral of f^(xi) chi(x xi) dxi."""
    return _transform(f_hat, 1)


def sb_modulate(f: SBFunction, y: LaurentNumber) -> SBFunction:
    """xi -> chi(y xi) f(xi)."""
    return SBFunction.from_cells(f.field, _modulate(f.cells, y), f.half)


def sb_hat_affine(f_hat: SBFunction, j: int, k: int) -> SBFunction:
    """
    Transform side of D^j T_k f, computed from f^ directly:
    xi -> q^(-j/2) chi(-u(k) p^j xi) f^(p^j xi).
    """
    field = f_hat.field
    pulled = sb_rescale(f_hat, -j)
    y = -u_of_index(field, k).shift(j)
    half, factor = _half_shift(f_hat.half, -j, field.q)
    cells = [(ball, v * factor) for ball, v in _modulate(pulled.cells, y)]
    return SBFunction.from_cells(field, cells, half)


def sb_fold(f: SBFunction) -> SBFunction:
    """
    Restriction to O of the lattice periodization xi -> sum_k f(xi + u(k)).
    """
    cells = []
    for ball, v in f.cells:
        image, multiplicity = fold_ball(ball)
        cells.append((image, v * multiplicity))
    return SBFunction.from_cells(f.field, cells, f.half)


# =============================================================================
# Step functions
# =============================================================================


@dataclass(frozen=True)
class StepFn:
    """
    Finitely many disjoint cells with exact values.

    Values are real unless `complex_values` is set. With `periodic_on_O` every cell lies in O
    and the function is the integral-periodic extension of that restriction.
    """

    field: FieldParams
    cells: tuple[tuple[Ball, CycloNumber], ...] = ()
    periodic_on_O: bool = False
    complex_values: bool = False

    def __post_init__(self):
        if not self.complex_values:
            for ball, v in self.cells:
                if not v.is_real():
                    raise ValueError(f"step function value {v} on {ball} is not real")
        if self.periodic_on_O:
            for ball, _ in self.cells:
                if ball.level < 0 or not ball.center.integer_part() == ball.center:
                    raise ValueError(f"periodic step function has a cell {ball} outside O")

    @classmethod
    def from_cells(
        cls,
        field: FieldParams,
        cells: Iterable[tuple[Ball, Coefficient]],
        periodic_on_O: bool = False,
        complex_values: bool = False,
    ) -> StepFn:
        cells = _canonical((ball, _as_cyclo(field, v)) for ball, v in cells)
        return cls(field, cells, periodic_on_O, complex_values)

    @classmethod
    def constant(cls, field: FieldParams, value: Coefficient) -> StepFn:
        """The integral-periodic constant function."""
        return cls.from_cells(field, [(Ball.ideal(field, 0), value)], periodic_on_O=True)

    @classmethod
    def indicator(cls, e: ESet, value: Coefficient = 1, periodic_on_O: bool = False) -> StepFn:
        return cls.from_cells(e.field, ((ball, value) for ball in e.balls), periodic_on_O)

    def is_zero(self) -> bool:
        return not self.cells

    def _check(self, other: StepFn) -> None:
        if other.field != self.field:
            raise FieldParamsError(f"cannot combine step functions over {self.field} and {other.field}")
        if other.periodic_on_O != self.periodic_on_O:
            raise ValueError("cannot combine a periodic step function with a compactly supported one")

    def support(self) -> ESet:
        return ESet._from_disjoint(self.field, (ball for ball, _ in self.cells))

    def evaluate(self, x: LaurentNumber) -> CycloNumber:
        if self.periodic_on_O:
            x = x.integer_part()
        for ball, v in self.cells:
            if ball.contains_point(x):
                return v
        return CycloNumber.zero(self.field.p)

    def __add__(self, other: StepFn) -> StepFn:
        self._check(other)
        return StepFn.from_cells(
            self.field,
            self.cells + other.cells,
            self.periodic_on_O,
            self.complex_values or other.complex_values,
        )

    def __neg__(self) -> StepFn:
        return self.scale(-1)

    def __sub__(self, other: StepFn) -> StepFn:
        return self + (-other)

    def scale(self, c: Coefficient) -> StepFn:
        c = _as_cyclo(self.field, c)
        return StepFn.from_cells(
            self.field,
            ((ball, v * c) for ball, v in self.cells),
            self.periodic_on_O,
            self.complex_values or not c.is_real(),
        )

    def restrict(self, e: ESet) -> StepFn:
        one = CycloNumber.one(self.field.p)
        cells = [
            (ball, a)
            for ball, (a, b) in _overlay(self.cells, ((ball, one) for ball in e.balls))
            if a is not None and b is not None
        ]
        return StepFn.from_cells(self.field, cells, self.periodic_on_O, self.complex_values)

    def pieces_on(self, e: ESet) -> list[tuple[Ball, CycloNumber]]:
        """Partition of E into cells with the function's value on each (zero where uncovered)."""
        zero = CycloNumber.zero(self.field.p)
        cells = [
            (ball, a if a is not None else zero)
            for ball, (a, b) in _overlay(self.cells, ((ball, zero) for ball in e.balls))
            if b is not None
        ]
        return merge_cells(cells)

    def integral(self) -> CycloNumber:
        """Integral over K, or over O for a periodic function."""
        return sum((v * ball.measure() for ball, v in self.cells), CycloNumber.zero(self.field.p))

    def values(self) -> set[CycloNumber]:
        return {v for _, v in self.cells}

    def is_constant(self, value: Coefficient) -> bool:
        """True when a periodic function equals `value` everywhere."""
        value = _as_cyclo(self.field, value)
        if value.is_zero():
            return self.is_zero()
        return self.periodic_on_O and self.cells == ((Ball.ideal(self.field, 0), value),)

    def __str__(self) -> str:
        body = ", ".join(f"{ball}: {v}" for ball, v in self.cells)
        return "{" + body + "}"

    def to_json(self) -> dict:
        return {str(ball): str(v) for ball, v in self.cells}

    def approx_json(self) -> dict:
        return {str(ball): v.approx().real if v.is_real() else str(v.approx()) for ball, v in self.cells}


def sb_modulus_sq(f: SBFunction) -> StepFn:
    """xi -> |f(xi)|^2."""
    factor = f.field.q if f.half else 1
    return StepFn.from_cells(f.field, ((ball, v.abs_sq() * factor) for ball, v in f.cells))


def sb_periodize(F: StepFn) -> StepFn:
    """
    xi -> sum_k F(xi + u(k)), as a periodic step function.

    A cell of negative level holds q^-level cosets of O and folds onto O with that multiplicity.
    """
    if F.periodic_on_O:
        return F
    cells = []
    for ball, v in F.cells:
        image, multiplicity = fold_ball(ball)
        cells.append((image, v * multiplicity))
    return StepFn.from_cells(F.field, cells, periodic_on_O=True, complex_values=F.complex_values)


def sb_is_integral_periodic(F: StepFn) -> bool:
    """
    Whether F(x + u(l)) = F(x) for all l.

    A compactly supported step function is integral periodic only when it vanishes: the
    translates of any nonzero cell eventually leave the support.
    """
    if F.periodic_on_O:
        return True
    return F.is_zero()


def st_add(a: StepFn, b: StepFn) -> StepFn:
    return a + b


def st_scale(a: StepFn, c: Coefficient) -> StepFn:
    return a.scale(c)


def st_restrict(a: StepFn, e: ESet) -> StepFn:
    return a.restrict(e)


def st_evaluate(a: StepFn, x: LaurentNumber) -> CycloNumber:
    return a.evaluate(x)


def st_pieces_on(a: StepFn, e: ESet) -> list[tuple[Ball, CycloNumber]]:
    return a.pieces_on(e)


# =============================================================================
# Character system
# =============================================================================


def sb_character_on(field: FieldParams, y: LaurentNumber, ball: Ball | None = None) -> SBFunction:
    """xi -> chi(y xi) restricted to a ball (O by default)."""
    ball = ball or Ball.ideal(field, 0)
    return SBFunction.from_cells(field, _modulate([(ball, CycloNumber.one(field.p))], y))


def check_character_laws(params: FieldParams, window: int = DEFAULT_WINDOW - 1) -> dict:
    """
    Exhaustively check the character system for indices below q^window.

    Checks orthonormality of chi_u(n) on O (the integral of chi_u(n) conj(chi_u(m)) over O is
    1 when n = m and 0 otherwise) and that chi_u(k)(u(l)) = 1.

    Returns:
        Report dict with case counts and the first failure (or None)
    """
    size = params.q**window
    report: dict = {"window": window, "indices": size, "laws": {}, "first_failure": None}
    integrals: dict[int, CycloNumber] = {}

    def integral_of(d: int) -> CycloNumber:
        if d not in integrals:
            integrals[d] = sb_integral(sb_character_on(params, u_of_index(params, d)))
        return integrals[d]

    def fail(law: str, detail: str) -> None:
        if report["first_failure"] is None:
            report["first_failure"] = {"law": law, "detail": detail}
            logger.warning(f"Character law {law} fails: {detail}")

    negated = [u_neg(params, m) for m in range(size)]
    for n in range(size):
        for m in range(size):
            value = integral_of(u_add(params, n, negated[m]))
            if value != (1 if n == m else 0):
                fail("orthonormality", f"n={n}, m={m}, integral={value}")
    report["laws"]["orthonormality"] = size * size

    lattice = [u_of_index(params, n) for n in range(size)]
    for k in range(size):
        for l in range(size):
            if not chi_product(lattice[k], lattice[l]).is_trivial():
                fail("lattice-triviality", f"k={k}, l={l}")
    report["laws"]["lattice-triviality"] = size * size

    report["ok"] = report["first_failure"] is None
    logger.debug(f"Character laws for {params}, window {window}: ok={report['ok']}")
    return report
