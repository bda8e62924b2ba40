"""Tests for the example catalog and the bundled scripts."""

import pytest

from lfwave import (
    ESet,
    ScriptRunner,
    example_46_scaling,
    example_315a,
    family,
    parse,
    verify_scaling_function,
    verify_scaling_set,
)
from lfwave.cli import bundled_scripts

BUNDLED = bundled_scripts()


class TestCatalog:
    """Test the example constructors."""

    def test_family_orders(self, gf3):
        """Shannon and the coset family have q - 1 generators, the annulus family one."""
        assert family(gf3, "shannon").order == 2
        assert family(gf3, "ex315b", 2).order == 2
        assert family(gf3, "ex315a").order == 1
        assert family(gf3, "ex315a").name == "ex315a"

    def test_unknown_family(self, gf2):
        """Unknown names are rejected."""
        with pytest.raises(ValueError):
            family(gf2, "haar")

    def test_level_must_be_positive(self, gf2):
        """m starts at 1."""
        with pytest.raises(ValueError):
            example_315a(gf2, 0)
        with pytest.raises(ValueError):
            family(gf2, "ex315b", 0)

    def test_scaling_variants(self, gf2):
        """Variants are A, B and C, in either case."""
        assert example_46_scaling(gf2, "b").variant == "B"
        with pytest.raises(ValueError):
            example_46_scaling(gf2, "D")

    @pytest.mark.parametrize("m", [1, 2])
    def test_scaling_sets(self, field, m):
        """A is O, B is P^(m+1) and C is P^m."""
        assert example_46_scaling(field, "A", m).scaling_set == ESet.ideal(field, 0)
        assert example_46_scaling(field, "B", m).scaling_set == ESet.ideal(field, m + 1)
        assert example_46_scaling(field, "C", m).scaling_set == ESet.ideal(field, m)


class TestScalingPairs:
    """Each scaling set produces the wavelet set of the multiwavelet it is paired with."""

    @pytest.mark.parametrize("variant", ["A", "B", "C"])
    @pytest.mark.parametrize("m", [1, 2])
    def test_wavelet_set_matches(self, field, variant, m):
        """W = p^-1 S \\ S is the union of the paired supports."""
        example = example_46_scaling(field, variant, m)
        verdict, w = verify_scaling_set(example.scaling_set, "parseval")
        assert verdict.ok
        supports = ESet.empty(field)
        for psi in example.wavelets.hat_psis:
            supports = supports | psi.support()
        assert w == supports

    @pytest.mark.parametrize("variant", ["A", "B", "C"])
    def test_scaling_function(self, field, variant):
        """ind(S)^ is a Parseval scaling function."""
        verdict, m0 = verify_scaling_function(example_46_scaling(field, variant).phi_hat)
        assert verdict.ok
        assert m0.periodic_on_O

    def test_only_unit_ball_orthonormal(self, gf3):
        """Only O tiles under translation."""
        assert verify_scaling_set(example_46_scaling(gf3, "A").scaling_set, "orthonormal")[0].ok
        assert not verify_scaling_set(example_46_scaling(gf3, "B").scaling_set, "orthonormal")[0].ok
        assert not verify_scaling_set(example_46_scaling(gf3, "C").scaling_set, "orthonormal")[0].ok


class TestBundledScripts:
    """Run every bundled script."""

    def test_names(self):
        """The bundled scripts are installed with the package."""
        assert set(BUNDLED) == {"controls", "deeper", "ex315a", "ex315b", "laws", "shannon"}

    @pytest.mark.parametrize("name", sorted(BUNDLED))
    def test_runs_clean(self, name):
        """Every check meets its expectation and nothing raises."""
        runner = ScriptRunner(parse(BUNDLED[name]))
        records = list(runner.run())
        assert records
        assert [r["command"] for r in records if r["failed"]] == []
        assert all("error" not in r for r in records)
        assert runner.exit_code == 0

    def test_controls_all_fail(self):
        """Negative controls fail with witnesses."""
        records = list(ScriptRunner(parse(BUNDLED["controls"])).run())
        checks = [r for r in records if r["kind"] == "check"]
        assert len(checks) == 4
        for record in checks:
            assert record["ok"] is False
            assert record["expect"] == "fail"
            assert record["result"]["witness"] is not None

    def test_shannon_multiplicity(self):
        """The Shannon script reports m_V = 1 on O."""
        records = {r["command"]: r for r in ScriptRunner(parse(BUNDLED["shannon"])).run()}
        result = records["compute multiplicity shannon"]["result"]
        assert result["negative_dilates"]["multiplicity"] == {"O": "1"}
        assert result["negative_dilates"]["integral"] == "1"
        assert records["check mra shannon"]["ok"] is True

    def test_annulus_multiplicity(self):
        """The annulus script reports m_V = ind(P^2)."""
        records = {r["command"]: r for r in ScriptRunner(parse(BUNDLED["ex315a"])).run()}
        result = records["compute multiplicity ex315a"]["result"]
        assert result["negative_dilates"]["multiplicity"] == {"P^2": "1"}
        assert result["negative_dilates"]["integral"] == "1/4"
