"""Shared fixtures: fields and seeded generators of random elements, balls, sets and functions."""

import random
from fractions import Fraction

import pytest

from lfwave import Ball, CycloNumber, ESet, FieldParams, LaurentNumber, SBFunction

# (p, c) for q = 2, 3, 4, 5; q = 4 exercises an extension field
FIELD_PARAMS = [(2, 1), (3, 1), (2, 2), (5, 1)]


class RandomObjects:
    """Seeded source of random test objects over one field."""

    def __init__(self, field: FieldParams, seed: int = 0):
        self.field = field
        self.rng = random.Random(seed)

    def digit(self) -> int:
        return self.rng.randrange(self.field.q)

    def laurent(self, low: int = -3, high: int = 3) -> LaurentNumber:
        """Element with digits at exponents low..high-1."""
        return LaurentNumber.from_terms(self.field, [(e, self.digit()) for e in range(low, high)])

    def ball(self, low: int = -2, high: int = 3) -> Ball:
        level = self.rng.randint(low, high)
        return Ball(self.laurent(level - 2, level), level)

    def annular_ball(self, low: int = -2, high: int = 2) -> Ball:
        """A ball not containing 0, at valuation between low and high."""
        valuation = self.rng.randint(low, high)
        center = LaurentNumber.monomial(self.field, self.rng.randrange(1, self.field.q), valuation)
        depth = self.rng.randint(1, 2)
        extra = self.laurent(valuation + 1, valuation + depth)
        return Ball(center + extra, valuation + depth)

    def eset(self, size: int = 3) -> ESet:
        return ESet.from_balls(self.field, [self.ball() for _ in range(size)])

    def rational(self) -> Fraction:
        return Fraction(self.rng.randint(-4, 4), self.rng.randint(1, 4))

    def coeff(self) -> CycloNumber:
        p = self.field.p
        value = CycloNumber.from_rational(p, self.rational())
        for k in range(1, p):
            if self.rng.random() < 0.5:
                value = value + CycloNumber.root(p, k) * self.rational()
        return value

    def sbfunction(self, size: int = 3) -> SBFunction:
        return SBFunction.from_cells(self.field, [(self.ball(), self.coeff()) for _ in range(size)])


@pytest.fixture(params=FIELD_PARAMS, ids=lambda pc: f"q={pc[0] ** pc[1]}")
def field(request) -> FieldParams:
    p, c = request.param
    return FieldParams(p, c)


@pytest.fixture
def gf2() -> FieldParams:
    return FieldParams(2)


@pytest.fixture
def gf3() -> FieldParams:
    return FieldParams(3)


@pytest.fixture
def gf4() -> FieldParams:
    return FieldParams(2, 2)


@pytest.fixture
def gf5() -> FieldParams:
    return FieldParams(5)


@pytest.fixture
def rand(field) -> RandomObjects:
    return RandomObjects(field, seed=field.q)
