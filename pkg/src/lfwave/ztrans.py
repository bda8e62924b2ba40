"""
The translation lattice u(0), u(1), u(2), ... of coset representatives of O in K.

Writing n = sum(b_k q^k) in base q, u(n) = sum(b_k t^-(k+1)), with each base-q digit b_k read
as a GF(q) element through its digit index. Every finite Laurent polynomial supported on
negative exponents is some u(n), so the lattice is closed under addition and negation even
though u(m + n) != u(m) + u(n) in general. Indices are combined only through their digit
vectors (u_add, u_neg), never by adding the integers.
"""

from loguru import logger

from .gfq import FieldParams, field_tables
from .locfield import LaurentNumber

DEFAULT_WINDOW = 4


class LatticeDomainError(ValueError):
    """Element or index outside the translation lattice."""

    pass


def index_digits(params: FieldParams, n: int) -> list[int]:
    """Base-q digits of n, least significant first (empty for n = 0)."""
    if n < 0:
        raise LatticeDomainError(f"lattice index must be nonnegative, got {n}")
    digits = []
    while n:
        n, b = divmod(n, params.q)
        digits.append(b)
    return digits


def u_of_index(params: FieldParams, n: int) -> LaurentNumber:
    """The lattice point u(n)."""
    return LaurentNumber(
        params, tuple((-(k + 1), b) for k, b in reversed(list(enumerate(index_digits(params, n)))) if b)
    )


def index_of_u(x: LaurentNumber) -> int:
    """
    Inverse of u_of_index.

    Raises:
        LatticeDomainError: If x has a digit at a nonnegative exponent
    """
    if x.terms and x.terms[-1][0] >= 0:
        raise LatticeDomainError(f"{x} is not a lattice point (digit at exponent {x.terms[-1][0]})")
    q = x.field.q
    return sum(d * q ** (-e - 1) for e, d in x.terms)


def u_add(params: FieldParams, m: int, n: int) -> int:
    """Index of u(m) + u(n)."""
    add = field_tables(params).add
    dm, dn = index_digits(params, m), index_digits(params, n)
    width = max(len(dm), len(dn))
    dm += [0] * (width - len(dm))
    dn += [0] * (width - len(dn))
    return _digits_to_int(params, [add[a][b] for a, b in zip(dm, dn, strict=True)])


def u_neg(params: FieldParams, n: int) -> int:
    """Index of -u(n)."""
    neg = field_tables(params).neg
    return _digits_to_int(params, [neg[b] for b in index_digits(params, n)])


def _digits_to_int(params: FieldParams, digits: list[int]) -> int:
    n = 0
    for b in reversed(digits):
        n = n * params.q + b
    return n


def lattice_level(params: FieldParams, n: int) -> int:
    """k with |u(n)| = q^k, i.e. the number of base-q digits of n (0 for n = 0)."""
    return len(index_digits(params, n))


def check_lattice_laws(params: FieldParams, window: int = DEFAULT_WINDOW) -> dict:
    """
    Exhaustively check the lattice laws for all indices below q^window.

    Checks that |u(n)| = q^k exactly when q^(k-1) <= n < q^k, that index_of_u inverts
    u_of_index, that negation permutes the window, that k -> u(l) + u(k) is injective with
    the expected values for l < q^2, and the splitting rule u(r q^k + s) = u(r) t^-k + u(s)
    for r, k <= 3 and s < q^k.

    Returns:
        Report dict with the number of cases per law and the first failure (or None)
    """
    q = params.q
    size = q**window
    report: dict = {"window": window, "indices": size, "laws": {}, "first_failure": None}

    def fail(law: str, detail: str) -> None:
        if report["first_failure"] is None:
            report["first_failure"] = {"law": law, "detail": detail}
            logger.warning(f"Lattice law {law} fails: {detail}")

    cases = 0
    for n in range(size):
        u = u_of_index(params, n)
        level = lattice_level(params, n)
        if (n == 0) != u.is_zero():
            fail("zero", f"n={n}")
        if n and not (q ** (level - 1) <= n < q**level and u.abs_exponent() == level):
            fail("absolute-value", f"n={n}")
        if index_of_u(u) != n:
            fail("round-trip", f"n={n}")
        cases += 1
    report["laws"]["absolute-value"] = cases

    negated = {u_neg(params, n) for n in range(size)}
    if negated != set(range(size)):
        fail("negation", "u_neg does not permute the window")
    report["laws"]["negation"] = size

    cases = 0
    for l in range(min(q**2, size)):
        ul = u_of_index(params, l)
        images = set()
        for k in range(size):
            s = u_add(params, l, k)
            if u_of_index(params, s) != ul + u_of_index(params, k):
                fail("addition", f"l={l}, k={k}")
            images.add(s)
            cases += 1
        if len(images) != size:
            fail("addition", f"k -> u(l)+u(k) not injective for l={l}")
    report["laws"]["addition"] = cases

    cases = 0
    for r in range(4):
        for k in range(4):
            shifted = u_of_index(params, r).shift(-k)
            for s in range(q**k):
                if u_of_index(params, r * q**k + s) != shifted + u_of_index(params, s):
                    fail("splitting", f"r={r}, k={k}, s={s}")
                cases += 1
    report["laws"]["splitting"] = cases

    report["ok"] = report["first_failure"] is None
    logger.debug(f"Lattice laws for {params}, window {window}: ok={report['ok']}")
    return report
