"""Tests for the script language parser and printer."""

from fractions import Fraction

import pytest

from lfwave import (
    CycloNumber,
    FieldParams,
    ScriptError,
    parse,
    parse_laurent,
    print_script,
    u_of_index,
)
from lfwave.cli import bundled_scripts
from lfwave.dsl import (
    AnnulusAtom,
    BallAtom,
    Builtin,
    Check,
    Compute,
    FuncDef,
    IdealAtom,
    NameRef,
    SetDef,
    builtin_bindings,
    tokenize,
)

EXAMPLE = """\
# every statement form once
field p=3 c=1
set W = annulus(-1)
set A = ball(t^-1 + 2; 1) | W | ideal(2)
func f = 1/2 * ind(ideal(0)) + (1 - zeta) * ind(A)
builtin shannon
builtin ex46(C, 2)
check wavelet-set W order 2 mode orthonormal
check consistency shannon L 2 mode equality expect pass
check scaling-function ex46C_phi
compute spectral shannon
compute multiplicity f generators
"""


def error_of(text: str) -> ScriptError:
    with pytest.raises(ScriptError) as exc_info:
        parse(text)
    return exc_info.value


class TestTokenizer:
    """Test tokenization."""

    def test_hyphenated_names(self):
        """Command names may contain hyphens; exponents may not."""
        kinds = [(t.kind, t.text) for t in tokenize("parseval-wavelet t^-1")]
        assert kinds[:4] == [("NAME", "parseval-wavelet"), ("NAME", "t"), ("OP", "^"), ("OP", "-")]

    def test_comments_dropped(self):
        """Comments and blanks produce no tokens."""
        kinds = [t.kind for t in tokenize("# comment\nfield")]
        assert kinds == ["NEWLINE", "NAME", "NEWLINE", "EOF"]

    def test_positions(self):
        """Tokens record line and column."""
        tokens = list(tokenize("field p=2\n  set"))
        token = next(t for t in tokens if t.text == "set")
        assert (token.line, token.column) == (2, 3)


class TestParser:
    """Test parsing of every statement form."""

    def test_example(self):
        """The example script parses into the expected statements."""
        script = parse(EXAMPLE)
        gf3 = FieldParams(3)
        assert script.field_params == gf3
        s = script.statements
        assert s[0] == SetDef("W", (AnnulusAtom(-1),))
        assert s[1] == SetDef(
            "A", (BallAtom(parse_laurent(gf3, "t^-1 + 2"), 1), NameRef("W"), IdealAtom(2))
        )
        assert isinstance(s[2], FuncDef)
        assert s[3] == Builtin("shannon")
        assert s[4] == Builtin("ex46", 2, "C")
        assert s[5] == Check("wavelet-set", ("W",), order=2, mode="orthonormal")
        assert s[6] == Check("consistency", ("shannon",), mode="equality", bound=2)
        assert s[7] == Check("scaling-function", ("ex46C_phi",))
        assert s[8] == Compute("spectral", ("shannon",))
        assert s[9] == Compute("multiplicity", ("f",), generators=True)

    def test_locations(self):
        """Statements remember their line."""
        script = parse(EXAMPLE)
        assert script.header.loc == (2, 1)
        assert script.statements[0].loc == (3, 1)

    def test_coefficients(self):
        """Coefficients are exact elements of Q(zeta_p)."""
        script = parse("field p=3\nfunc f = (1 - zeta) * ind(ideal(0)) + -zeta^2 * ind(ideal(1)) + zeta * 2 * ind(ideal(2))\n")
        terms = script.statements[0].terms
        zeta = CycloNumber.root(3, 1)
        assert terms[0].coeff == 1 - zeta
        assert terms[1].coeff == -CycloNumber.root(3, 2)
        assert terms[2].coeff == zeta * 2

    def test_rational_coefficients(self):
        """a/b coefficients and bare indicators."""
        terms = parse("field p=5\nfunc f = 3/4 * ind(ideal(0)) + ind(ideal(1))\n").statements[0].terms
        assert terms[0].coeff == Fraction(3, 4)
        assert terms[1].coeff == 1

    def test_poly_header(self):
        """The header may name the modulus of GF(p^c)."""
        script = parse("field p=2 c=2 poly=1,1,1\n")
        assert script.header.poly == (1, 1, 1)
        assert script.field_params.q == 4

    def test_builtin_bindings(self):
        """Builtins bind members, a family name or a set and its function."""
        assert builtin_bindings(Builtin("ex315a"), 3) == {"ex315a_1": "func", "ex315a": "family"}
        assert builtin_bindings(Builtin("shannon"), 4) == {
            "shannon_1": "func",
            "shannon_2": "func",
            "shannon_3": "func",
            "shannon": "family",
        }
        assert builtin_bindings(Builtin("ex46", variant="B"), 2) == {"ex46B": "set", "ex46B_phi": "func"}

    def test_builtin_text(self):
        """Builtins print with their arguments."""
        assert Builtin("ex46", 2, "C").text == "ex46(C, 2)"
        assert Builtin("ex46", None, "A").text == "ex46(A)"
        assert Builtin("ex315a", 2).text == "ex315a(2)"

    def test_lattice_points(self):
        """u(n) in a ball center is the lattice point u(n)."""
        gf3 = FieldParams(3)
        script = parse("field p=3\nset A = ball(u(5); 0) | ball(u(1) + t^-3; 0)\n")
        atoms = script.statements[0].atoms
        assert atoms[0].center == u_of_index(gf3, 5)
        assert atoms[1].center == u_of_index(gf3, 10)
        assert parse(print_script(script)) == script

    def test_blank_lines(self):
        """Blank lines and comments between statements are ignored."""
        script = parse("\n\nfield p=2\n\n# note\nset A = ideal(0)\n\n")
        assert len(script.statements) == 1


class TestErrors:
    """Test error positions and messages."""

    def test_missing_exponent(self):
        """A dangling ^ is reported where the integer should be."""
        error = error_of("field p=2\nset A = ball(t^; 0)\n")
        assert (error.line, error.column) == (2, 16)
        assert "expected int" in error.message
        assert str(error).startswith("line 2, column 16:")

    def test_undefined_name(self):
        """Names must be bound before use."""
        error = error_of("field p=2\ncheck parseval-wavelet f\n")
        assert "undefined name 'f'" in error.message
        assert (error.line, error.column) == (2, 24)

    def test_rebinding(self):
        """A name is bound once."""
        error = error_of("field p=2\nset A = ideal(0)\nset A = ideal(1)\n")
        assert "already bound" in error.message
        assert error.line == 3

    def test_builtin_rebinding(self):
        """Builtins bind names too."""
        error = error_of("field p=2\nset shannon = ideal(0)\nbuiltin shannon\n")
        assert "already bound" in error.message

    def test_wrong_kinds(self):
        """Sets and functions are not interchangeable."""
        assert "expected a set" in error_of("field p=2\nfunc f = ind(ideal(0))\ncheck scaling-set f mode parseval\n").message
        assert "expected a function" in error_of("field p=2\nset A = ideal(0)\ncheck parseval-wavelet A\n").message
        assert "expected a set" in error_of("field p=2\nfunc f = ind(ideal(0))\nset B = f\n").message

    def test_single_name(self):
        """Single-function checks reject families and lists."""
        assert "expected a single" in error_of("field p=2\nbuiltin shannon\ncheck scaling-function shannon\n").message
        text = "field p=2\nfunc f = ind(ideal(0))\nfunc g = ind(ideal(1))\ncheck translates f g\n"
        assert "expected a single" in error_of(text).message

    def test_digit_out_of_range(self):
        """Digits must lie in GF(q)."""
        error = error_of("field p=2\nset A = ball(2*t^-1; 0)\n")
        assert "digit 2 outside GF(2)" in error.message

    def test_negative_lattice_index(self):
        """Lattice indices are nonnegative."""
        error = error_of("field p=2\nset A = ball(u(-1); 0)\n")
        assert "nonnegative" in error.message
        assert (error.line, error.column) == (2, 16)

    def test_bad_field(self):
        """p must be prime."""
        error = error_of("field p=4\n")
        assert (error.line, error.column) == (1, 1)

    def test_missing_header(self):
        """Scripts start with a field header."""
        assert "field" in error_of("set A = ideal(0)\n").message
        assert "p=INT" in error_of("field c=2\n").message

    def test_duplicate_parameter(self):
        """Header parameters appear once."""
        assert "duplicate" in error_of("field p=2 p=3\n").message

    def test_unexpected_character(self):
        """Characters outside the language are rejected with their position."""
        error = error_of("field p=2\nset A = @\n")
        assert "'@'" in error.message
        assert (error.line, error.column) == (2, 9)

    def test_missing_mode(self):
        """Checks with modes require them."""
        error = error_of("field p=2\nset W = annulus(0)\ncheck wavelet-set W order 1\n")
        assert "end of line" in error.message

    def test_trailing_tokens(self):
        """A statement ends at the end of its line."""
        assert "end of statement" in error_of("field p=2\nset A = ideal(0) ideal(1)\n").message

    def test_zero_denominator(self):
        """1/0 is not a coefficient."""
        assert "zero denominator" in error_of("field p=2\nfunc f = 1/0 * ind(ideal(0))\n").message

    def test_unknown_variant(self):
        """Scaling variants are A, B and C."""
        assert "expected one of" in error_of("field p=2\nbuiltin ex46(D)\n").message


class TestPrinter:
    """Test canonical printing."""

    def test_example_text(self):
        """Printing normalizes coefficients and keeps every statement."""
        text = print_script(parse(EXAMPLE))
        lines = text.splitlines()
        assert lines[0] == "field p=3 c=1"
        assert lines[3] == "func f = 1/2 * ind(ideal(0)) + (1 - zeta) * ind(A)"
        assert lines[6] == "check wavelet-set W order 2 mode orthonormal"
        assert lines[7] == "check consistency shannon L 2 mode equality"
        assert lines[-1] == "compute multiplicity f generators"

    def test_round_trip(self):
        """Parsing printed text gives an equal script."""
        script = parse(EXAMPLE)
        assert parse(print_script(script)) == script

    @pytest.mark.parametrize("name", sorted(bundled_scripts()))
    def test_bundled_round_trip(self, name):
        """Every bundled script survives a print/parse round trip."""
        script = parse(bundled_scripts()[name])
        printed = print_script(script)
        assert parse(printed) == script
        assert print_script(parse(printed)) == printed

    def test_negative_coefficients(self):
        """Coefficients without spaces print bare and still reparse."""
        script = parse("field p=5\nfunc f = -1/2*zeta^2 * ind(ideal(0)) + (2 + zeta^3) * ind(ideal(-1))\n")
        assert parse(print_script(script)) == script

    def test_poly_round_trip(self):
        """The modulus is printed when given."""
        assert print_script(parse("field p=2 c=2 poly=1,1,1\n")) == "field p=2 c=2 poly=1,1,1\n"
