"""
The lfwave script language: tokenizer, syntax tree, recursive-descent parser and printer.

A script starts with a field header and continues with one statement per line:

    field p=2 c=1
    set W = annulus(-1)
    func f = 1/2 * ind(ideal(0)) + (1 - zeta) * ind(ball(t^-1; 0) | W)
    builtin shannon
    check wavelet-set W order 1 mode orthonormal
    compute multiplicity shannon

Ball centers are sums of `d*t^e` terms and lattice points `u(n)`. `#` starts a
comment. Every node records the line and column it was parsed from; the location
is not part of node equality, so printing and reparsing gives an equal script.
"""

from __future__ import annotations

import re
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction

from .catalog import FAMILIES, SCALING_VARIANTS
from .charcyclo import CycloNumber
from .gfq import FieldParams, FieldParamsError
from .locfield import LaurentNumber
from .ztrans import u_of_index

MODES = {
    "wavelet-set": ("parseval", "orthonormal"),
    "scaling-set": ("parseval", "orthonormal"),
    "consistency": ("inequality", "equality"),
}

# check kind -> kind of names it takes ("sets", "set", "funcs", "func" or None)
CHECK_ARGS = {
    "wavelet-set": "sets",
    "parseval-wavelet": "funcs",
    "orthonormal-wavelet": "funcs",
    "semi-orthogonal": "funcs",
    "scaling-set": "set",
    "scaling-function": "func",
    "mra": "funcs",
    "consistency": "funcs",
    "translates": "func",
    "lattice": None,
    "characters": None,
}

COMPUTE_ARGS = {
    "multiplicity": "funcs",
    "spectral": "funcs",
    "dimension": "funcs",
    "fourier": "func",
}

_TOKEN_RE = re.compile(
    r"(?P<SPACE>[ \t\r]+)|(?P<COMMENT>#[^\n]*)|(?P<NEWLINE>\n)"
    r"|(?P<NAME>[A-Za-z_][A-Za-z0-9_]*(?:-[A-Za-z][A-Za-z0-9_]*)*)"
    r"|(?P<INT>\d+)|(?P<OP>[()=;|+\-*/^,])"
)


class ScriptError(ValueError):
    """Syntax or name error in a script, with its position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> Iterator[Token]:
    """Split script text into tokens; comments and blanks are dropped, newlines kept."""
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise ScriptError(f"unexpected character {text[pos]!r}", line, column)
        kind = match.lastgroup
        if kind == "NEWLINE":
            yield Token("NEWLINE", "\n", line, column)
            line += 1
            line_start = match.end()
        elif kind not in ("SPACE", "COMMENT"):
            yield Token(kind, match.group(), line, column)
        pos = match.end()
    yield Token("NEWLINE", "\n", line, pos - line_start + 1)
    yield Token("EOF", "", line, pos - line_start + 1)


# =============================================================================
# Syntax tree
# =============================================================================

Location = tuple[int, int]


def _loc() -> Location:
    return field(default=(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class BallAtom:
    center: LaurentNumber
    level: int
    loc: Location = _loc()


@dataclass(frozen=True)
class AnnulusAtom:
    k: int
    loc: Location = _loc()


@dataclass(frozen=True)
class IdealAtom:
    k: int
    loc: Location = _loc()


@dataclass(frozen=True)
class NameRef:
    name: str
    loc: Location = _loc()


SetAtom = BallAtom | AnnulusAtom | IdealAtom | NameRef


@dataclass(frozen=True)
class FieldDecl:
    p: int
    c: int
    poly: tuple[int, ...] | None = None
    loc: Location = _loc()

    def params(self) -> FieldParams:
        return FieldParams(self.p, self.c, self.poly or ())


@dataclass(frozen=True)
class SetDef:
    name: str
    atoms: tuple[SetAtom, ...]
    loc: Location = _loc()


@dataclass(frozen=True)
class FuncTerm:
    coeff: CycloNumber
    atoms: tuple[SetAtom, ...]
    loc: Location = _loc()


@dataclass(frozen=True)
class FuncDef:
    name: str
    terms: tuple[FuncTerm, ...]
    loc: Location = _loc()


@dataclass(frozen=True)
class Builtin:
    family: str
    m: int | None = None
    variant: str | None = None
    loc: Location = _loc()

    @property
    def text(self) -> str:
        if self.family == "ex46":
            return f"ex46({self.variant})" if self.m is None else f"ex46({self.variant}, {self.m})"
        return self.family if self.m is None else f"{self.family}({self.m})"


@dataclass(frozen=True)
class Check:
    kind: str
    names: tuple[str, ...] = ()
    order: int | None = None
    mode: str | None = None
    bound: int | None = None
    expect: str = "pass"
    loc: Location = _loc()


@dataclass(frozen=True)
class Compute:
    kind: str
    names: tuple[str, ...] = ()
    generators: bool = False
    loc: Location = _loc()


Statement = SetDef | FuncDef | Builtin | Check | Compute


@dataclass(frozen=True)
class Script:
    header: FieldDecl
    statements: tuple[Statement, ...]

    @property
    def field_params(self) -> FieldParams:
        return self.header.params()


def builtin_bindings(stmt: Builtin, q: int) -> dict[str, str]:
    """Names bound by a builtin statement, with their kinds."""
    if stmt.family == "ex46":
        name = f"ex46{stmt.variant}"
        return {name: "set", f"{name}_phi": "func"}
    size = 1 if stmt.family == "ex315a" else q - 1
    bindings = {f"{stmt.family}_{i}": "func" for i in range(1, size + 1)}
    bindings[stmt.family] = "family"
    return bindings


# =============================================================================
# Parser
# =============================================================================


class Parser:
    """Single-pass recursive-descent parser; names must be bound before use."""

    def __init__(self, text: str):
        self.tokens = list(tokenize(text))
        self.pos = 0
        self.scope: dict[str, str] = {}
        self.params: FieldParams | None = None

    # -- token helpers -------------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.peek()
        self.pos += 1
        return token

    def at(self, kind: str, text: str | None = None) -> bool:
        token = self.peek()
        return token.kind == kind and (text is None or token.text == text)

    def error(self, message: str, token: Token | None = None) -> ScriptError:
        token = token or self.peek()
        return ScriptError(message, token.line, token.column)

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            found = self.peek()
            wanted = repr(text) if text else kind.lower()
            if found.kind == "EOF":
                shown = "end of input"
            elif found.kind == "NEWLINE":
                shown = "end of line"
            else:
                shown = repr(found.text)
            raise self.error(f"expected {wanted}, found {shown}")
        return self.advance()

    def keyword(self, *choices: str) -> Token:
        token = self.expect("NAME")
        if token.text not in choices:
            raise self.error(f"expected one of {', '.join(choices)}, found {token.text!r}", token)
        return token

    def integer(self) -> int:
        negative = False
        if self.at("OP", "-"):
            self.advance()
            negative = True
        value = int(self.expect("INT").text)
        return -value if negative else value

    def skip_newlines(self) -> None:
        while self.at("NEWLINE"):
            self.advance()

    def end_statement(self) -> None:
        if not self.at("NEWLINE"):
            raise self.error(f"unexpected {self.peek().text!r} at end of statement")
        self.skip_newlines()

    # -- grammar -------------------------------------------------------------

    def parse(self) -> Script:
        self.skip_newlines()
        header = self.parse_header()
        statements = []
        while not self.at("EOF"):
            statements.append(self.parse_statement())
        return Script(header, tuple(statements))

    def parse_header(self) -> FieldDecl:
        start = self.keyword("field")
        values: dict[str, object] = {}
        while self.at("NAME"):
            key = self.keyword("p", "c", "poly")
            if key.text in values:
                raise self.error(f"duplicate field parameter {key.text!r}", key)
            self.expect("OP", "=")
            if key.text == "poly":
                coeffs = [int(self.expect("INT").text)]
                while self.at("OP", ","):
                    self.advance()
                    coeffs.append(int(self.expect("INT").text))
                values["poly"] = tuple(coeffs)
            else:
                values[key.text] = int(self.expect("INT").text)
        if "p" not in values:
            raise self.error("field header needs p=INT", start)
        decl = FieldDecl(values["p"], values.get("c", 1), values.get("poly"), loc=(start.line, start.column))
        try:
            self.params = decl.params()
        except FieldParamsError as e:
            raise self.error(str(e), start) from e
        self.end_statement()
        return decl

    def parse_statement(self) -> Statement:
        token = self.keyword("set", "func", "builtin", "check", "compute")
        loc = (token.line, token.column)
        if token.text == "set":
            stmt = self.parse_set(loc)
        elif token.text == "func":
            stmt = self.parse_func(loc)
        elif token.text == "builtin":
            stmt = self.parse_builtin(loc)
        elif token.text == "check":
            stmt = self.parse_check(loc)
        else:
            stmt = self.parse_compute(loc)
        self.end_statement()
        return stmt

    def bind(self, token: Token, kind: str) -> None:
        if token.text in self.scope:
            raise self.error(f"name {token.text!r} is already bound", token)
        self.scope[token.text] = kind

    def parse_set(self, loc: Location) -> SetDef:
        name = self.expect("NAME")
        self.expect("OP", "=")
        atoms = self.parse_set_expr()
        self.bind(name, "set")
        return SetDef(name.text, atoms, loc=loc)

    def parse_set_expr(self) -> tuple[SetAtom, ...]:
        atoms = [self.parse_atom()]
        while self.at("OP", "|"):
            self.advance()
            atoms.append(self.parse_atom())
        return tuple(atoms)

    def parse_atom(self) -> SetAtom:
        token = self.expect("NAME")
        loc = (token.line, token.column)
        if token.text == "ball" and self.at("OP", "("):
            self.advance()
            center = self.parse_laurent()
            self.expect("OP", ";")
            level = self.integer()
            self.expect("OP", ")")
            return BallAtom(center, level, loc=loc)
        if token.text in ("annulus", "ideal") and self.at("OP", "("):
            self.advance()
            k = self.integer()
            self.expect("OP", ")")
            return AnnulusAtom(k, loc=loc) if token.text == "annulus" else IdealAtom(k, loc=loc)
        kind = self.scope.get(token.text)
        if kind is None:
            raise self.error(f"undefined name {token.text!r}", token)
        if kind != "set":
            raise self.error(f"{token.text!r} is a {kind}, expected a set", token)
        return NameRef(token.text, loc=loc)

    def parse_laurent(self) -> LaurentNumber:
        terms = self.parse_laurent_term()
        while self.at("OP", "+"):
            self.advance()
            terms += self.parse_laurent_term()
        return LaurentNumber.from_terms(self.params, terms)

    def parse_laurent_term(self) -> list[tuple[int, int]]:
        if self.at("NAME", "u") and self.peek(1).text == "(":
            self.advance()
            self.advance()
            n_token = self.peek()
            n = self.integer()
            self.expect("OP", ")")
            if n < 0:
                raise self.error("lattice index must be nonnegative", n_token)
            return list(u_of_index(self.params, n).terms)
        digit = 1
        if self.at("INT"):
            token = self.advance()
            digit = int(token.text)
            if digit >= self.params.q:
                raise self.error(f"digit {digit} outside GF({self.params.q})", token)
            if not self.at("OP", "*"):
                return [(0, digit)]
            self.advance()
        self.expect("NAME", "t")
        exponent = 1
        if self.at("OP", "^"):
            self.advance()
            exponent = self.integer()
        return [(exponent, digit)]

    def parse_func(self, loc: Location) -> FuncDef:
        name = self.expect("NAME")
        self.expect("OP", "=")
        terms = [self.parse_term()]
        while self.at("OP", "+"):
            self.advance()
            terms.append(self.parse_term())
        self.bind(name, "func")
        return FuncDef(name.text, tuple(terms), loc=loc)

    def parse_term(self) -> FuncTerm:
        start = self.peek()
        coeff = CycloNumber.one(self.params.p)
        if not self.at("NAME", "ind"):
            coeff = self.parse_coeff()
            self.expect("OP", "*")
        self.expect("NAME", "ind")
        self.expect("OP", "(")
        atoms = self.parse_set_expr()
        self.expect("OP", ")")
        return FuncTerm(coeff, atoms, loc=(start.line, start.column))

    def parse_coeff(self) -> CycloNumber:
        if self.at("OP", "("):
            self.advance()
            total = self.parse_signed_product()
            while self.at("OP", "+") or self.at("OP", "-"):
                sign = self.advance().text
                value = self.parse_product()
                total = total + value if sign == "+" else total - value
            self.expect("OP", ")")
            return total
        return self.parse_signed_product()

    def parse_signed_product(self) -> CycloNumber:
        if self.at("OP", "-"):
            self.advance()
            return -self.parse_product()
        return self.parse_product()

    def parse_product(self) -> CycloNumber:
        value = self.parse_factor()
        while self.at("OP", "*") and not (self.peek(1).kind == "NAME" and self.peek(1).text == "ind"):
            self.advance()
            value = value * self.parse_factor()
        return value

    def parse_factor(self) -> CycloNumber:
        p = self.params.p
        if self.at("NAME", "zeta"):
            self.advance()
            k = 1
            if self.at("OP", "^"):
                self.advance()
                k = self.integer()
            return CycloNumber.root(p, k)
        numerator = int(self.expect("INT").text)
        denominator = 1
        if self.at("OP", "/"):
            self.advance()
            token = self.expect("INT")
            denominator = int(token.text)
            if denominator == 0:
                raise self.error("zero denominator", token)
        return CycloNumber.from_rational(p, Fraction(numerator, denominator))

    def parse_builtin(self, loc: Location) -> Builtin:
        token = self.keyword(*FAMILIES, "ex46")
        m = variant = None
        if token.text == "ex46":
            self.expect("OP", "(")
            variant_token = self.keyword(*SCALING_VARIANTS)
            variant = variant_token.text
            if self.at("OP", ","):
                self.advance()
                m = self.positive()
            self.expect("OP", ")")
        elif self.at("OP", "("):
            self.advance()
            m = self.positive()
            self.expect("OP", ")")
        stmt = Builtin(token.text, m, variant, loc=loc)
        for name, kind in builtin_bindings(stmt, self.params.q).items():
            self.bind(Token("NAME", name, token.line, token.column), kind)
        return stmt

    def positive(self) -> int:
        token = self.expect("INT")
        if int(token.text) < 1:
            raise self.error("expected a positive integer", token)
        return int(token.text)

    def parse_names(self, wanted: str | None) -> tuple[str, ...]:
        if wanted is None:
            return ()
        names = []
        while self.at("NAME") and self.peek().text not in ("order", "mode", "L", "expect", "generators"):
            token = self.advance()
            kind = self.scope.get(token.text)
            if kind is None:
                raise self.error(f"undefined name {token.text!r}", token)
            expects_set = wanted.startswith("set")
            if expects_set and kind != "set":
                raise self.error(f"{token.text!r} is a {kind}, expected a set", token)
            if not expects_set and kind == "set":
                raise self.error(f"{token.text!r} is a set, expected a function", token)
            if wanted in ("set", "func") and (names or kind == "family"):
                raise self.error(f"expected a single {wanted} name", token)
            names.append(token.text)
        if not names:
            raise self.error(f"expected {'a set' if wanted.startswith('set') else 'a function'} name")
        return tuple(names)

    def parse_check(self, loc: Location) -> Check:
        kind = self.keyword(*CHECK_ARGS).text
        names = self.parse_names(CHECK_ARGS[kind])
        order = mode = bound = None
        if kind == "wavelet-set":
            self.keyword("order")
            order = self.positive()
        if kind == "consistency":
            self.keyword("L")
            bound = int(self.expect("INT").text)
        if kind in MODES:
            self.keyword("mode")
            mode = self.keyword(*MODES[kind]).text
        expect = "pass"
        if self.at("NAME", "expect"):
            self.advance()
            expect = self.keyword("pass", "fail").text
        return Check(kind, names, order, mode, bound, expect, loc=loc)

    def parse_compute(self, loc: Location) -> Compute:
        kind = self.keyword(*COMPUTE_ARGS).text
        names = self.parse_names(COMPUTE_ARGS[kind])
        generators = False
        if kind in ("multiplicity", "spectral") and self.at("NAME", "generators"):
            self.advance()
            generators = True
        return Compute(kind, names, generators, loc=loc)


def parse(text: str) -> Script:
    """
    Parse script text.

    Raises:
        ScriptError: On a syntax error, an undefined or rebound name, or a field mismatch
    """
    return Parser(text).parse()


# =============================================================================
# Printer
# =============================================================================


def format_coeff(value: CycloNumber) -> str:
    text = str(value)
    return f"({text})" if " " in text else text


def format_atoms(atoms: tuple[SetAtom, ...]) -> str:
    parts = []
    for atom in atoms:
        if isinstance(atom, BallAtom):
            parts.append(f"ball({atom.center}; {atom.level})")
        elif isinstance(atom, AnnulusAtom):
            parts.append(f"annulus({atom.k})")
        elif isinstance(atom, IdealAtom):
            parts.append(f"ideal({atom.k})")
        else:
            parts.append(atom.name)
    return " | ".join(parts)


def format_statement(stmt: Statement) -> str:
    if isinstance(stmt, SetDef):
        return f"set {stmt.name} = {format_atoms(stmt.atoms)}"
    if isinstance(stmt, FuncDef):
        terms = " + ".join(f"{format_coeff(t.coeff)} * ind({format_atoms(t.atoms)})" for t in stmt.terms)
        return f"func {stmt.name} = {terms}"
    if isinstance(stmt, Builtin):
        return f"builtin {stmt.text}"
    if isinstance(stmt, Check):
        words = ["check", stmt.kind, *stmt.names]
        if stmt.order is not None:
            words += ["order", str(stmt.order)]
        if stmt.bound is not None:
            words += ["L", str(stmt.bound)]
        if stmt.mode is not None:
            words += ["mode", stmt.mode]
        if stmt.expect != "pass":
            words += ["expect", stmt.expect]
        return " ".join(words)
    words = ["compute", stmt.kind, *stmt.names]
    if stmt.generators:
        words.append("generators")
    return " ".join(words)


def print_script(script: Script) -> str:
    """Canonical text of a script; parsing it again yields an equal Script."""
    header = script.header
    lines = [f"field p={header.p} c={header.c}"]
    if header.poly is not None:
        lines[0] += " poly=" + ",".join(str(a) for a in header.poly)
    lines += [format_statement(stmt) for stmt in script.statements]
    return "\n".join(lines) + "\n"
