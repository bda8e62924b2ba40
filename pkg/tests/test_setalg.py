"""Tests for balls, elementary sets and the tiling decisions."""

from fractions import Fraction

import pytest

from lfwave import Ball, ESet, LaurentNumber, RefinementError, parse_laurent, u_of_index
from lfwave.setalg import (
    es_complement_in,
    es_contains,
    es_dilation_cover,
    es_fold,
    es_intersect,
    es_is_dilation_partition,
    es_is_translation_partition,
    es_measure,
    es_normalize,
    es_split_to_level,
    es_subtract,
    es_translate,
    es_union,
    merge_cells,
    refine,
)


def ball(field, text: str, level: int) -> Ball:
    return Ball(parse_laurent(field, text), level)


def brute_force_dilation_partition(w: ESet, depth: int, span: int) -> bool:
    """Count, for every unit cell at the given depth, the dilates t^j (|j| <= span) landing in W."""
    unit_cells = ESet.annulus(w.field, 0).split_to_level(depth)
    for cell in unit_cells:
        hits = sum(
            1 for j in range(-span, span + 1) if any(b.contains(cell.dilate(j)) for b in w.balls)
        )
        if hits != 1:
            return False
    return True


class TestBall:
    """Test canonical balls."""

    def test_center_reduced(self, gf3):
        """The center is reduced modulo the level."""
        b = ball(gf3, "t^-1 + 2 + t^2", 1)
        assert b.center == parse_laurent(gf3, "t^-1 + 2")
        assert b == ball(gf3, "t^-1 + 2 + t", 1)

    def test_str(self, gf3):
        """Balls print as O, P^k or c + P^k."""
        assert str(Ball.ideal(gf3, 0)) == "O"
        assert str(Ball.ideal(gf3, 2)) == "P^2"
        assert str(ball(gf3, "t^-1", 0)) == "t^-1 + O"

    def test_measure(self, gf3):
        """|c + P^k| = q^-k."""
        assert Ball.ideal(gf3, -1).measure() == 3
        assert Ball.ideal(gf3, 2).measure() == Fraction(1, 9)

    def test_containment(self, gf2):
        """Balls are nested or disjoint."""
        outer = Ball.ideal(gf2, 0)
        inner = ball(gf2, "1", 1)
        assert outer.contains(inner)
        assert not inner.contains(outer)
        assert inner.contains_point(parse_laurent(gf2, "1 + t^3"))
        assert not inner.contains_point(parse_laurent(gf2, "t"))

    def test_children_partition(self, field):
        """The q children of a ball partition it."""
        b = Ball.ideal(field, 1)
        children = b.children()
        assert len(children) == field.q
        assert sum(c.measure() for c in children) == b.measure()
        assert all(b.contains(c) for c in children)
        assert all(c.parent() == b for c in children)

    def test_split(self, field):
        """Splitting d levels down gives q^d balls."""
        b = Ball.ideal(field, -1)
        assert len(b.split_to(1)) == field.q**2
        with pytest.raises(RefinementError):
            b.split_to(-2)

    def test_dilate(self, gf3):
        """t^j (c + P^k) = t^j c + P^(k+j)."""
        b = ball(gf3, "t^-1", 0).dilate(2)
        assert b == ball(gf3, "t", 2)
        assert b.measure() == Fraction(1, 9)

    def test_annulus_normal(self, gf3):
        """A ball off 0 rescales into the unit annulus."""
        b = ball(gf3, "2*t^-2 + t^-1", 0)
        assert b.annulus_normal() == ball(gf3, "2 + t", 2)

    def test_folded(self, gf2):
        """Folding drops the fractional part of the center."""
        assert ball(gf2, "t^-2 + 1", 1).folded() == ball(gf2, "1", 1)


class TestRefine:
    """Test the common refinement engine."""

    def test_nested_weights_add(self, gf3):
        """A cell inside two balls carries both weights."""
        cells = dict(refine([(Ball.ideal(gf3, 0), 1), (Ball.ideal(gf3, 1), 2)]))
        assert cells[Ball.ideal(gf3, 1)] == 3
        assert cells[ball(gf3, "1", 1)] == 1
        assert cells[ball(gf3, "2", 1)] == 1
        assert len(cells) == 3

    def test_disjoint_cells(self, rand):
        """Refined cells are pairwise disjoint and preserve total measure with multiplicity."""
        for _ in range(20):
            balls = [rand.ball() for _ in range(4)]
            cells = refine((b, 1) for b in balls)
            for i, (a, _) in enumerate(cells):
                for b, _ in cells[i + 1 :]:
                    assert not a.contains(b) and not b.contains(a)
            weighted = sum(c.measure() * w for c, w in cells)
            assert weighted == sum(b.measure() for b in balls)

    def test_merge_siblings(self, field):
        """A complete sibling family with equal values merges into its parent."""
        children = [(c, 7) for c in Ball.ideal(field, 0).children()]
        assert merge_cells(children) == [(Ball.ideal(field, 0), 7)]

    def test_no_merge_on_different_values(self, gf2):
        """Siblings with different values stay apart."""
        children = Ball.ideal(gf2, 0).children()
        merged = merge_cells([(children[0], 1), (children[1], 2)])
        assert len(merged) == 2


class TestESet:
    """Test canonical sets and the set algebra."""

    def test_canonical_merge(self, field):
        """The children of O normalize to O."""
        assert ESet.from_balls(field, Ball.ideal(field, 0).children()) == ESet.ideal(field, 0)

    def test_annulus(self, field):
        """|P^k \\ P^(k+1)| = q^-k (1 - 1/q)."""
        q = field.q
        for k in (-1, 0, 2):
            assert es_measure(ESet.annulus(field, k)) == Fraction(q) ** (-k) * (1 - Fraction(1, q))

    def test_union_order_independent(self, rand):
        """A | B = B | A in canonical form."""
        for _ in range(20):
            a, b = rand.eset(), rand.eset()
            assert (a | b) == (b | a)

    def test_inclusion_exclusion(self, rand):
        """|A | B| + |A & B| = |A| + |B|."""
        for _ in range(30):
            a, b = rand.eset(), rand.eset()
            assert (a | b).measure() + (a & b).measure() == a.measure() + b.measure()

    def test_difference(self, rand):
        """A - (A - B) = A & B and (A - B) & B is empty."""
        for _ in range(30):
            a, b = rand.eset(), rand.eset()
            assert a - (a - b) == a & b
            assert ((a - b) & b).is_empty()
            assert (a & b).issubset(a)

    def test_complement(self, field):
        """O \\ P is the unit annulus."""
        assert es_complement_in(ESet.ideal(field, 1), ESet.ideal(field, 0)) == ESet.annulus(field, 0)

    def test_contains(self, gf3):
        """Membership of points."""
        s = ESet.from_balls(gf3, [ball(gf3, "t^-1", 0), Ball.ideal(gf3, 2)])
        assert es_contains(s, parse_laurent(gf3, "t^-1 + 2"))
        assert es_contains(s, parse_laurent(gf3, "t^5"))
        assert not es_contains(s, parse_laurent(gf3, "1"))

    def test_translate_and_dilate(self, rand):
        """Translation preserves measure; t^j scales it by q^-j."""
        for _ in range(20):
            a = rand.eset()
            x = rand.laurent()
            assert a.translate(x).measure() == a.measure()
            assert a.dilate(2).measure() == a.measure() / rand.field.q**2
            assert a.dilate(2).dilate(-2) == a

    def test_split_to_level(self, gf2):
        """Splitting a set lists its sub-balls of one level."""
        assert len(ESet.ideal(gf2, 0).split_to_level(3)) == 8

    def test_to_json(self, gf3):
        """Sets serialize as lists of ball strings."""
        assert ESet.annulus(gf3, 0).to_json() == ["1 + P^1", "2 + P^1"]


class TestTranslationPartition:
    """Test folding and the translation tiling decision."""

    def test_fold(self, field):
        """P^-1 covers each point of O q times."""
        assert es_fold(ESet.ideal(field, -1)) == [(Ball.ideal(field, 0), field.q)]

    def test_unit_ball_tiles(self, field):
        """The translates of O tile K."""
        assert es_is_translation_partition(ESet.ideal(field, 0), "all_of_K").ok

    def test_coarse_ball_overlaps(self, field):
        """P^-1 overlaps its translates, with multiplicity q as witness."""
        verdict = es_is_translation_partition(ESet.ideal(field, -1))
        assert not verdict.ok
        assert verdict.condition == "translation-disjoint"
        assert verdict.witness.value == field.q

    def test_subset_versus_all(self, field):
        """P packs but does not tile."""
        s = ESet.ideal(field, 1)
        assert es_is_translation_partition(s, "subset").ok
        verdict = es_is_translation_partition(s, "all_of_K")
        assert not verdict.ok
        assert verdict.condition == "translation-cover"

    def test_translated_cosets(self, gf3):
        """t^-1 + P and 1 + P are disjoint after folding; t^-1 + P and P are not."""
        good = ESet.from_balls(gf3, [ball(gf3, "t^-1", 1), ball(gf3, "1", 1)])
        bad = ESet.from_balls(gf3, [ball(gf3, "t^-1", 1), Ball.ideal(gf3, 1)])
        assert es_is_translation_partition(good).ok
        assert not es_is_translation_partition(bad).ok

    def test_unknown_mode(self, gf2):
        """Modes are subset and all_of_K."""
        with pytest.raises(ValueError):
            es_is_translation_partition(ESet.ideal(gf2, 0), "some")


class TestDilationPartition:
    """Test the dilation tiling decision."""

    def test_unit_annulus(self, field):
        """The dilates of O \\ P tile K \\ {0}."""
        assert es_is_dilation_partition(ESet.annulus(field, 0)).ok
        assert es_is_dilation_partition(ESet.annulus(field, -3)).ok

    def test_zero_ball(self, field):
        """A set containing 0 overlaps its own dilates."""
        verdict = es_is_dilation_partition(ESet.ideal(field, 0))
        assert not verdict.ok
        assert verdict.condition == "dilation-zero-ball"
        assert verdict.witness.ball.is_zero_centered()

    def test_overlap(self, field):
        """Two annuli overlap after dilation."""
        w = ESet.annulus(field, 0) | ESet.annulus(field, 2)
        verdict = es_is_dilation_partition(w)
        assert not verdict.ok
        assert verdict.condition == "dilation-disjoint"

    def test_gap(self, gf3):
        """1 + P alone misses the dilates of 2 + P."""
        verdict = es_is_dilation_partition(ESet(gf3, (ball(gf3, "1", 1),)))
        assert not verdict.ok
        assert verdict.condition == "dilation-cover"
        assert verdict.witness.ball == ball(gf3, "2", 1)

    def test_empty_family(self, field):
        """No sets, or only empty ones, cover nothing."""
        for sets in ([], [ESet.empty(field)]):
            verdict = es_dilation_cover(sets)
            assert not verdict.ok
            assert verdict.condition == "dilation-cover"
            assert verdict.witness.ball is None

    def test_split_across_sets(self, gf3):
        """Pieces at different valuations can tile jointly."""
        pieces = [ESet(gf3, (ball(gf3, "t^-1", 0),)), ESet(gf3, (ball(gf3, "2*t", 2),))]
        assert es_dilation_cover(pieces).ok
        assert not es_dilation_cover(pieces[:1]).ok

    def test_brute_force_agreement(self, rand):
        """The decision agrees with counting dilates of fine unit cells."""
        for _ in range(25):
            w = ESet.from_balls(rand.field, [rand.annular_ball() for _ in range(rand.rng.randint(1, 3))])
            depth = max(b.annulus_normal().level for b in w.balls)
            assert es_is_dilation_partition(w).ok == brute_force_dilation_partition(w, depth, 4)

    def test_brute_force_on_tilings(self, rand):
        """Rearranged unit annuli tile and the brute force agrees."""
        field = rand.field
        for _ in range(10):
            cells = ESet.annulus(field, 0).split_to_level(2)
            balls = [c.dilate(rand.rng.randint(-2, 2)) for c in cells]
            w = ESet.from_balls(field, balls)
            assert es_is_dilation_partition(w).ok
            assert brute_force_dilation_partition(w, 2, 4)

    def test_origin_in_ideals(self, gf2):
        """The origin lies in every ideal."""
        assert Ball.ideal(gf2, 7).contains_point(LaurentNumber.zero(gf2))


class TestFunctionalForms:
    """Test the module-level set operations."""

    def test_normalize(self, field):
        """The q children of O merge back into O."""
        children = [Ball(LaurentNumber.from_terms(field, [(0, d)]), 1) for d in range(field.q)]
        assert es_normalize(field, children) == ESet.ideal(field, 0)

    def test_boolean_operations(self, field):
        """Union, intersection and difference of P, O and O \\ P."""
        o, p = ESet.ideal(field, 0), ESet.ideal(field, 1)
        assert es_union(p, ESet.annulus(field, 0)) == o
        assert es_intersect(o, p) == p
        assert es_subtract(o, p) == ESet.annulus(field, 0)

    def test_translate_and_split(self, field):
        """P + u(1) contains u(1); O splits into q^2 cells at level 2."""
        moved = es_translate(ESet.ideal(field, 1), u_of_index(field, 1))
        assert es_contains(moved, u_of_index(field, 1))
        assert not es_contains(moved, LaurentNumber.zero(field))
        assert len(es_split_to_level(ESet.ideal(field, 0), 2)) == field.q**2
