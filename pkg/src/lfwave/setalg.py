"""
Elementary subsets of K: finite unions of ultrametric balls in canonical form.

A Ball is center + P^k with the center reduced modulo the level. Any two balls are disjoint
or nested, so a family of balls is a prefix-closed set of digit strings: everything here runs
on a digit trie (`refine`) that turns an arbitrary weighted family of balls into disjoint
cells carrying summed weights.

Provides:
- Ball, ESet: canonical balls and sets (maximally merged, sorted)
- refine(), merge_cells(): common refinement and sibling merging
- Folding into O and the translation/dilation partition decisions
"""

from __future__ import annotations

import itertools
import operator
from collections.abc import Callable, Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, TypeVar

from loguru import logger

from .gfq import FieldParams, FieldParamsError
from .locfield import LaurentNumber
from .verdict import Verdict, Witness

V = TypeVar("V")


class RefinementError(ValueError):
    """A ball cannot be split to the requested level."""

    pass


@dataclass(frozen=True)
class Ball:
    """The ball center + P^level; the center is stored reduced modulo the level."""

    center: LaurentNumber
    level: int

    def __post_init__(self):
        object.__setattr__(self, "center", self.center.reduce(self.level))

    @classmethod
    def ideal(cls, field: FieldParams, level: int) -> Ball:
        """P^level, the ball of that level around 0."""
        return cls(LaurentNumber.zero(field), level)

    @property
    def field(self) -> FieldParams:
        return self.center.field

    @property
    def key(self) -> tuple[int, tuple[tuple[int, int], ...]]:
        return (self.level, self.center.terms)

    def measure(self) -> Fraction:
        return Fraction(self.field.q) ** (-self.level)

    def is_zero_centered(self) -> bool:
        """True when the ball contains 0."""
        return self.center.is_zero()

    def contains_point(self, x: LaurentNumber) -> bool:
        return x.reduce(self.level) == self.center

    def contains(self, other: Ball) -> bool:
        return other.level >= self.level and other.center.reduce(self.level) == self.center

    def parent(self) -> Ball:
        return Ball(self.center, self.level - 1)

    def children(self) -> list[Ball]:
        return [
            Ball(self.center + LaurentNumber.monomial(self.field, d, self.level), self.level + 1)
            for d in range(self.field.q)
        ]

    def split_to(self, level: int) -> list[Ball]:
        """
        Partition into the q^(level - self.level) sub-balls of the given level.

        Raises:
            RefinementError: If the ball is finer than the target level
        """
        if level < self.level:
            raise RefinementError(f"cannot split {self} (level {self.level}) to level {level}")
        q = self.field.q
        exponents = range(self.level, level)
        balls = []
        for digits in itertools.product(range(q), repeat=level - self.level):
            extra = LaurentNumber.from_terms(self.field, zip(exponents, digits, strict=True))
            balls.append(Ball(self.center + extra, level))
        return balls

    def translate(self, x: LaurentNumber) -> Ball:
        return Ball(self.center + x, self.level)

    def dilate(self, j: int) -> Ball:
        """Image under multiplication by t^j."""
        return Ball(self.center.shift(j), self.level + j)

    def annulus_normal(self) -> Ball:
        """
        Rescale a ball not containing 0 into the unit annulus O \\ P.

        Every point of such a ball has the valuation v of its center; multiplying by t^-v
        maps it into O \\ P.
        """
        return self.dilate(-int(self.center.valuation))

    def folded(self) -> Ball:
        """Translate a ball of level >= 0 into O by removing the fractional part of its center."""
        return Ball(self.center.integer_part(), self.level)

    def __str__(self) -> str:
        ideal = "O" if self.level == 0 else f"P^{self.level}"
        if self.center.is_zero():
            return ideal
        return f"{self.center} + {ideal}"

    def __repr__(self) -> str:
        return f"Ball({self})"


def ball_sort_key(ball: Ball) -> tuple:
    return ball.key


# =============================================================================
# Common refinement
# =============================================================================


@dataclass
class _TrieNode:
    """Node of the digit trie; `weight` applies to the node's whole ball."""

    weight: Any = None
    children: dict[int, _TrieNode] = field(default_factory=dict)


def _floor_level(balls: Iterable[Ball]) -> int:
    floor = None
    for ball in balls:
        low = ball.level
        if ball.center.terms:
            low = min(low, ball.center.terms[0][0])
        floor = low if floor is None else min(floor, low)
    return 0 if floor is None else floor


def refine(
    items: Iterable[tuple[Ball, V]], add: Callable[[V, V], V] = operator.add
) -> list[tuple[Ball, V]]:
    """
    Common refinement of a weighted family of balls.

    Args:
        items: (ball, weight) pairs; balls may overlap
        add: How to combine weights of overlapping balls

    Returns:
        Pairwise disjoint cells covering the union of the input balls; the weight of a cell
        is the combination of the weights of all input balls containing it.
    """
    items = list(items)
    if not items:
        return []
    field_params = items[0][0].field
    q = field_params.q
    floor = _floor_level(ball for ball, _ in items)

    root = _TrieNode()
    for ball, weight in items:
        if ball.field != field_params:
            raise FieldParamsError(f"cannot refine balls over {field_params} and {ball.field}")
        node = root
        for e in range(floor, ball.level):
            node = node.children.setdefault(ball.center.digit(e), _TrieNode())
        node.weight = weight if node.weight is None else add(node.weight, weight)

    cells: list[tuple[Ball, V]] = []

    def emit(path: list[tuple[int, int]], level: int, weight: V) -> None:
        cells.append((Ball(LaurentNumber(field_params, tuple(path)), level), weight))

    def walk(node: _TrieNode, path: list[tuple[int, int]], level: int, acc: V | None) -> None:
        if node.weight is not None:
            acc = node.weight if acc is None else add(acc, node.weight)
        if not node.children:
            if acc is not None:
                emit(path, level, acc)
            return
        for d in range(q):
            child_path = path + [(level, d)] if d else path
            child = node.children.get(d)
            if child is not None:
                walk(child, child_path, level + 1, acc)
            elif acc is not None:
                emit(child_path, level + 1, acc)

    walk(root, [], floor, None)
    return cells


def merge_cells(
    cells: Iterable[tuple[Ball, V]], same: Callable[[V, V], bool] = operator.eq
) -> list[tuple[Ball, V]]:
    """
    Merge complete sibling families carrying the same weight into their parent, bottom-up.

    Args:
        cells: Pairwise disjoint weighted cells
        same: Weight equality

    Returns:
        Maximally merged cells sorted canonically
    """
    buckets: dict[int, dict[tuple, tuple[Ball, V]]] = {}
    for ball, weight in cells:
        buckets.setdefault(ball.level, {})[ball.key] = (ball, weight)
    if not buckets:
        return []
    q = next(iter(next(iter(buckets.values())).values()))[0].field.q

    # a merged parent can merge again one level coarser, so min(buckets) moves during the walk
    level = max(buckets)
    while level >= min(buckets):
        families: dict[tuple, list[tuple[Ball, V]]] = {}
        for ball, weight in buckets.get(level, {}).values():
            parent = ball.parent()
            families.setdefault(parent.key, []).append((ball, weight))
        for family in families.values():
            if len(family) < q:
                continue
            weight = family[0][1]
            if all(same(weight, w) for _, w in family[1:]):
                parent = family[0][0].parent()
                for ball, _ in family:
                    del buckets[level][ball.key]
                buckets.setdefault(level - 1, {})[parent.key] = (parent, weight)
        level -= 1

    merged = [cell for bucket in buckets.values() for cell in bucket.values()]
    merged.sort(key=lambda cell: cell[0].key)
    return merged


# =============================================================================
# Canonical sets
# =============================================================================


@dataclass(frozen=True)
class ESet:
    """A finite union of balls, stored as maximally merged disjoint balls in canonical order."""

    field: FieldParams
    balls: tuple[Ball, ...] = ()

    @classmethod
    def from_balls(cls, field: FieldParams, balls: Iterable[Ball]) -> ESet:
        """Normalize an arbitrary (possibly overlapping) list of balls."""
        cells = refine((ball, 1) for ball in balls)
        return cls._from_disjoint(field, (ball for ball, _ in cells))

    @classmethod
    def _from_disjoint(cls, field: FieldParams, balls: Iterable[Ball]) -> ESet:
        merged = merge_cells((ball, True) for ball in balls)
        return cls(field, tuple(ball for ball, _ in merged))

    @classmethod
    def empty(cls, field: FieldParams) -> ESet:
        return cls(field)

    @classmethod
    def ideal(cls, field: FieldParams, k: int) -> ESet:
        """P^k."""
        return cls(field, (Ball.ideal(field, k),))

    @classmethod
    def annulus(cls, field: FieldParams, k: int) -> ESet:
        """P^k \\ P^(k+1)."""
        return cls.ideal(field, k).subtract(cls.ideal(field, k + 1))

    def __iter__(self) -> Iterator[Ball]:
        return iter(self.balls)

    def __len__(self) -> int:
        return len(self.balls)

    def is_empty(self) -> bool:
        return not self.balls

    def measure(self) -> Fraction:
        return sum((ball.measure() for ball in self.balls), Fraction(0))

    def contains_point(self, x: LaurentNumber) -> bool:
        return any(ball.contains_point(x) for ball in self.balls)

    def _combine(self, other: ESet, keep: Callable[[int], bool]) -> ESet:
        if other.field != self.field:
            raise FieldParamsError(f"cannot combine sets over {self.field} and {other.field}")
        cells = refine([(b, 1) for b in self.balls] + [(b, 2) for b in other.balls])
        return ESet._from_disjoint(self.field, (ball for ball, mark in cells if keep(mark)))

    def union(self, other: ESet) -> ESet:
        return self._combine(other, lambda mark: mark > 0)

    def intersect(self, other: ESet) -> ESet:
        return self._combine(other, lambda mark: mark == 3)

    def subtract(self, other: ESet) -> ESet:
        return self._combine(other, lambda mark: mark == 1)

    def issubset(self, other: ESet) -> bool:
        return self.subtract(other).is_empty()

    def translate(self, x: LaurentNumber) -> ESet:
        return ESet._from_disjoint(self.field, (ball.translate(x) for ball in self.balls))

    def dilate(self, j: int) -> ESet:
        """Image under multiplication by t^j."""
        return ESet(self.field, tuple(ball.dilate(j) for ball in self.balls))

    def split_to_level(self, k: int) -> list[Ball]:
        return [sub for ball in self.balls for sub in ball.split_to(k)]

    def __or__(self, other: ESet) -> ESet:
        return self.union(other)

    def __and__(self, other: ESet) -> ESet:
        return self.intersect(other)

    def __sub__(self, other: ESet) -> ESet:
        return self.subtract(other)

    def __str__(self) -> str:
        if not self.balls:
            return "{}"
        return " | ".join(str(ball) for ball in self.balls)

    def to_json(self) -> list[str]:
        return [str(ball) for ball in self.balls]


def es_normalize(field: FieldParams, balls: Iterable[Ball]) -> ESet:
    return ESet.from_balls(field, balls)


def es_union(a: ESet, b: ESet) -> ESet:
    return a.union(b)


def es_intersect(a: ESet, b: ESet) -> ESet:
    return a.intersect(b)


def es_subtract(a: ESet, b: ESet) -> ESet:
    return a.subtract(b)


def es_translate(a: ESet, x: LaurentNumber) -> ESet:
    return a.translate(x)


def es_split_to_level(a: ESet, k: int) -> list[Ball]:
    return a.split_to_level(k)


# =============================================================================
# Folding and tiling decisions
# =============================================================================


def fold_ball(ball: Ball) -> tuple[Ball, int]:
    """
    Image of a ball in O under the lattice translations, with multiplicity.

    A ball of level k < 0 is a union of q^-k cosets of O, so it folds onto O with
    multiplicity q^-k.
    """
    if ball.level < 0:
        return Ball.ideal(ball.field, 0), ball.field.q ** (-ball.level)
    return ball.folded(), 1


def es_fold(a: ESet) -> list[tuple[Ball, int]]:
    """
    Fold a set into O, counting how many lattice translates cover each point.

    Returns:
        Disjoint cells of O with their multiplicities (only covered cells)
    """
    return merge_cells(refine(fold_ball(ball) for ball in a.balls))


def es_is_translation_partition(a: ESet, mode: str = "subset") -> Verdict:
    """
    Decide whether the lattice translates of A are pairwise disjoint (mode `subset`), and
    in mode `all_of_K` also cover K.

    Returns:
        Verdict with an overlapping cell (multiplicity >= 2) or an uncovered cell of O
    """
    if mode not in ("subset", "all_of_K"):
        raise ValueError(f"unknown translation-partition mode {mode!r}")
    folded = es_fold(a)
    report = {"mode": mode, "folded_measure": sum((b.measure() * m for b, m in folded), Fraction(0))}
    for ball, multiplicity in folded:
        if multiplicity > 1:
            note = "translates overlap"
            coarse = next((b for b in a.balls if b.level < 0), None)
            if coarse is not None:
                note = f"ball {coarse} of negative level contains {multiplicity} translates of a cell"
            logger.debug(f"Translation partition fails at {ball}: multiplicity {multiplicity}")
            return Verdict(False, "translation-disjoint", Witness(ball, multiplicity, note), report)
    if mode == "all_of_K":
        covered = ESet._from_disjoint(a.field, (ball for ball, _ in folded))
        uncovered = ESet.ideal(a.field, 0).subtract(covered)
        if not uncovered.is_empty():
            ball = uncovered.balls[0]
            return Verdict(
                False, "translation-cover", Witness(ball, 0, "cell of O reached by no translate"), report
            )
    return Verdict(True, "translation-partition", None, report)


def es_dilation_cover(sets: Iterable[ESet]) -> Verdict:
    """
    Decide whether the dilates t^j W (j in Z) of the disjoint union W of the given sets
    partition K up to measure zero.

    A point lies in exactly one dilate iff its unit part lies in exactly one annulus-normalized
    ball; a ball containing 0 meets infinitely many of its own dilates.
    """
    sets = list(sets)
    balls = [ball for s in sets for ball in s.balls]
    if not balls:
        return Verdict(False, "dilation-cover", Witness(None, 0, "empty family covers nothing"))
    field_params = sets[0].field
    for ball in balls:
        if ball.is_zero_centered():
            return Verdict(
                False, "dilation-zero-ball", Witness(ball, 0, "contains 0; its dilates overlap")
            )
    normalized = merge_cells(refine((ball.annulus_normal(), 1) for ball in balls))
    for ball, count in normalized:
        if count > 1:
            logger.debug(f"Dilation partition fails: unit cell {ball} covered {count} times")
            return Verdict(
                False, "dilation-disjoint", Witness(ball, count, "unit cell covered by several dilates")
            )
    covered = ESet._from_disjoint(field_params, (ball for ball, _ in normalized))
    uncovered = ESet.annulus(field_params, 0).subtract(covered)
    if not uncovered.is_empty():
        return Verdict(
            False, "dilation-cover", Witness(uncovered.balls[0], 0, "unit cell reached by no dilate")
        )
    return Verdict(True, "dilation-partition", None, {"unit_cells": len(normalized)})


def es_is_dilation_partition(w: ESet) -> Verdict:
    return es_dilation_cover([w])


def es_measure(a: ESet) -> Fraction:
    return a.measure()


def es_contains(a: ESet, x: LaurentNumber) -> bool:
    return a.contains_point(x)


def es_complement_in(a: ESet, b: ESet) -> ESet:
    """B \\ A."""
    return b.subtract(a)
