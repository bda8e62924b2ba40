"""
Decision procedures for multiwavelets, translation-invariant spaces and wavelet/scaling sets.

All inputs are frequency-side SBFunctions (the transforms psi^, phi^). Infinite conditions
(sums over every dilation level, over every lattice translate) are reduced to finite exact
computations: dilation sums are evaluated on the unit annulus O \\ P, translation sums by
folding into O.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from loguru import logger

from .charcyclo import CycloNumber, cy_rank
from .gfq import FieldParams, FieldParamsError
from .locfield import LaurentNumber
from .sbfunc import (
    SBFunction,
    ScaleMismatchError,
    StepFn,
    sb_fold,
    sb_hat_affine,
    sb_modulus_sq,
    sb_norm_sq,
    sb_periodize,
    sb_rescale,
    sb_translate,
)
from .setalg import (
    Ball,
    ESet,
    es_dilation_cover,
    es_is_translation_partition,
    fold_ball,
    refine,
)
from .verdict import Verdict, Witness
from .ztrans import DEFAULT_WINDOW, lattice_level, u_neg, u_of_index


class PreconditionError(Exception):
    """A verifier's precondition does not hold; carries the failing verdict."""

    def __init__(self, message: str, verdict: Verdict):
        super().__init__(message)
        self.verdict = verdict


class UndecidableError(Exception):
    """No finite dilation range decides the quantity (a support around 0, or an unresolved tail)."""

    pass


class FiberWindowError(ValueError):
    """Fiber window too small for the support, or fiber cell too coarse."""

    pass


@dataclass(frozen=True)
class MultiwaveletCandidate:
    """L frequency-side generators psi^_1, ..., psi^_L."""

    hat_psis: tuple[SBFunction, ...]
    name: str = ""

    def __post_init__(self):
        if not self.hat_psis:
            raise ValueError("a multiwavelet candidate needs at least one function")
        fields = {f.field for f in self.hat_psis}
        if len(fields) > 1:
            raise FieldParamsError(f"generators live over different fields: {sorted(map(str, fields))}")

    @property
    def order(self) -> int:
        return len(self.hat_psis)

    @property
    def field(self) -> FieldParams:
        return self.hat_psis[0].field


def _as_candidate(psi: MultiwaveletCandidate | Iterable[SBFunction]) -> MultiwaveletCandidate:
    if isinstance(psi, MultiwaveletCandidate):
        return psi
    return MultiwaveletCandidate(tuple(psi))


# =============================================================================
# Support geometry
# =============================================================================


def _outer_level(balls: Iterable[Ball]) -> int:
    """Smallest M >= 0 with every ball inside P^-M."""
    m = 0
    for ball in balls:
        m = max(m, -ball.level)
        if not ball.center.is_zero():
            m = max(m, -int(ball.center.valuation))
    return m


def _inner_gap(balls: Iterable[Ball]) -> int | None:
    """Smallest N with P^N missing every ball; None when a ball contains 0."""
    n = None
    for ball in balls:
        if ball.is_zero_centered():
            return None
        low = int(ball.center.valuation) + 1
        n = low if n is None else max(n, low)
    return 0 if n is None else n


def _cell_balls(fns: Iterable[SBFunction | StepFn]) -> list[Ball]:
    return [ball for f in fns for ball, _ in f.cells]


def _st_rescale(F: StepFn, j: int) -> StepFn:
    """xi -> F(p^-j xi)."""
    return StepFn.from_cells(F.field, ((ball.dilate(j), v) for ball, v in F.cells), complex_values=F.complex_values)


def _total_modulus(psi: MultiwaveletCandidate) -> StepFn:
    total = StepFn(psi.field)
    for f in psi.hat_psis:
        total = total + sb_modulus_sq(f)
    return total


def _first_mismatch(
    pieces: Iterable[tuple[Ball, CycloNumber]], expected: CycloNumber | int
) -> tuple[Ball, CycloNumber] | None:
    for ball, v in pieces:
        if v != expected:
            return ball, v
    return None


def _unit_annulus_sum(F: StepFn) -> tuple[StepFn | None, Witness | None]:
    """
    The dilation-invariant sum xi -> sum_j F(p^-j xi), on the unit annulus.

    Every cell not containing 0 lies at one valuation v and meets exactly one dilate of
    each unit point, so it contributes once after rescaling by t^-v. A nonzero cell around 0
    makes the sum diverge near 0.
    """
    normalized = []
    for ball, v in F.cells:
        if ball.is_zero_centered():
            return None, Witness(ball, v, "cell around 0: the sum over dilates diverges")
        normalized.append((ball.annulus_normal(), v))
    return StepFn.from_cells(F.field, normalized, complex_values=F.complex_values), None


def _constant_on(F: StepFn, e: ESet) -> CycloNumber | None:
    values = {v for _, v in F.pieces_on(e)}
    return values.pop() if len(values) == 1 else None


# =============================================================================
# Frame conditions
# =============================================================================


def verify_affine_parseval(psi: MultiwaveletCandidate | Iterable[SBFunction]) -> Verdict:
    """
    Decide whether the affine system of psi is a Parseval frame.

    Checks that the dilation sum of sum_m |psi^_m|^2 is identically 1, and that for every
    s not divisible by q the cross sums
    sum_m sum_{j>=0} psi^_m(p^-j xi) conj(psi^_m(p^-j (xi + u(s)))) vanish. With all supports
    inside P^-M only s < q^M and 0 <= j <= M - d(s) can contribute, d(s) the number of base-q
    digits of s.
    """
    psi = _as_candidate(psi)
    field_params = psi.field
    q = field_params.q
    report: dict = {"order": psi.order}

    annulus, witness = _unit_annulus_sum(_total_modulus(psi))
    if witness is not None:
        logger.debug(f"Dilation sum diverges on {witness.ball}")
        return Verdict(False, "dilation-sum-one", witness, report)
    mismatch = _first_mismatch(annulus.pieces_on(ESet.annulus(field_params, 0)), 1)
    if mismatch is not None:
        ball, value = mismatch
        logger.debug(f"Dilation sum is {value} on unit cell {ball}")
        return Verdict(False, "dilation-sum-one", Witness(ball, value, "dilation sum differs from 1"), report)

    outer = _outer_level(_cell_balls(psi.hat_psis))
    report["support_level"] = -outer
    rescaled = {j: [sb_rescale(f, j) for f in psi.hat_psis] for j in range(outer + 1)}
    checked = 0
    for s in range(1, q**outer):
        if s % q == 0:
            continue
        minus_s = u_neg(field_params, s)
        total = SBFunction.zero(field_params)
        for j in range(outer - lattice_level(field_params, s) + 1):
            for g in rescaled[j]:
                total = total + g * sb_translate(g, minus_s).conj()
        checked += 1
        if not total.is_zero():
            ball, value = total.cells[0]
            logger.debug(f"Cross sum for s={s} is nonzero on {ball}")
            report["s"] = s
            return Verdict(
                False, "cross-sum-zero", Witness(ball, value, f"cross sum for s={s} is nonzero"), report
            )
    report["cross_sums_checked"] = checked
    return Verdict(True, "affine-parseval", None, report)


def is_orthonormal_multiwavelet(psi: MultiwaveletCandidate | Iterable[SBFunction]) -> Verdict:
    """Parseval frame whose generators all have norm 1."""
    psi = _as_candidate(psi)
    parseval = verify_affine_parseval(psi)
    norms = [sb_norm_sq(f) for f in psi.hat_psis]
    report = {"parseval": parseval.ok, "norms_sq": norms}
    if not parseval.ok:
        return Verdict(False, parseval.condition, parseval.witness, {**parseval.report, **report})
    for index, (f, norm) in enumerate(zip(psi.hat_psis, norms, strict=True)):
        if norm != 1:
            ball = f.cells[0][0] if f.cells else None
            return Verdict(
                False, "unit-norm", Witness(ball, norm, f"generator {index} has squared norm {norm}"), report
            )
    return Verdict(True, "orthonormal-multiwavelet", None, report)


def is_semi_orthogonal(psi: MultiwaveletCandidate | Iterable[SBFunction]) -> Verdict:
    """
    Decide whether D^j W is orthogonal to W for every j >= 1, W the span of the translates.

    D^j W is spanned by the translates of D^j T_i psi_m, i < q^j, so each such generator must be
    cross-orthogonal to each psi_m'. Beyond J_max = M + N the dilated supports are disjoint
    from the originals, M and N bounding the supports away from infinity and from 0.

    Raises:
        UndecidableError: If some support contains a ball around 0
    """
    psi = _as_candidate(psi)
    q = psi.field.q
    balls = _cell_balls(psi.hat_psis)
    inner = _inner_gap(balls)
    if inner is None:
        zero_ball = next(ball for ball in balls if ball.is_zero_centered())
        raise UndecidableError(f"support contains {zero_ball}, which meets every ball around 0")
    outer = _outer_level(balls)
    j_max = outer + inner
    report: dict = {"J_max": j_max, "support_level": -outer, "gap_level": inner}
    pairs = 0
    for j in range(1, j_max + 1):
        for i in range(q**j):
            for m, f in enumerate(psi.hat_psis):
                dilated = sb_hat_affine(f, j, i)
                for m2, g in enumerate(psi.hat_psis):
                    verdict = pti_cross_orthogonality(dilated, g)
                    pairs += 1
                    if not verdict.ok:
                        report.update({"j": j, "i": i, "m": m, "m_prime": m2})
                        logger.debug(f"Semi-orthogonality fails at j={j}, i={i}, m={m}, m'={m2}")
                        return Verdict(False, "semi-orthogonal", verdict.witness, report)
    report["pairs_checked"] = pairs
    return Verdict(True, "semi-orthogonal", None, report)


# =============================================================================
# Principal translation-invariant spaces
# =============================================================================


def periodization_weight(phi_hat: SBFunction) -> StepFn:
    """w(xi) = sum_k |phi^(xi + u(k))|^2."""
    return sb_periodize(sb_modulus_sq(phi_hat))


def is_parseval_generator(phi_hat: SBFunction) -> Verdict:
    """The translates of phi form a Parseval frame of their span iff w takes only 0 and 1."""
    w = periodization_weight(phi_hat)
    report = {"weight": w, "spectrum": w.support()}
    for ball, v in w.cells:
        if v != 1:
            return Verdict(False, "weight-zero-one", Witness(ball, v, "weight outside {0, 1}"), report)
    return Verdict(True, "parseval-generator", None, report)


def is_orthonormal_generator(phi_hat: SBFunction) -> Verdict:
    """The translates of phi are orthonormal iff w is identically 1."""
    w = periodization_weight(phi_hat)
    report = {"weight": w}
    mismatch = _first_mismatch(w.pieces_on(ESet.ideal(phi_hat.field, 0)), 1)
    if mismatch is not None:
        ball, v = mismatch
        return Verdict(False, "weight-one", Witness(ball, v, "weight differs from 1"), report)
    return Verdict(True, "orthonormal-generator", None, report)


def pti_cross_orthogonality(phi1_hat: SBFunction, phi2_hat: SBFunction) -> Verdict:
    """Every translate of phi1 is orthogonal to phi2 iff sum_k phi1^ conj(phi2^)(xi + u(k)) = 0."""
    folded = sb_fold(phi1_hat * phi2_hat.conj())
    if folded.is_zero():
        return Verdict(True, "cross-orthogonal")
    ball, value = folded.cells[0]
    note = "folded cross product is nonzero"
    if folded.half:
        note += " (times q^(1/2))"
    return Verdict(False, "cross-orthogonal", Witness(ball, value, note), {"fold": folded})


def pti_membership(f_hat: SBFunction, phi_hat: SBFunction) -> tuple[Verdict, StepFn | None]:
    """
    Decide whether f lies in the space spanned by the translates of phi, i.e. f^ = r phi^ for an
    integral-periodic r.

    Returns:
        The verdict and, on success, r as a periodic step function (zero off the folded
        support of phi^)
    """
    if not f_hat.is_zero() and not phi_hat.is_zero() and f_hat.half != phi_hat.half:
        raise ScaleMismatchError("ratio of functions with different q^(1/2) scale tags")
    field_params = phi_hat.field
    zero = CycloNumber.zero(field_params.p)

    def combine(a, b):
        return (a[0] if a[0] is not None else b[0], a[1] if a[1] is not None else b[1])

    cells = refine(
        [(ball, (v, None)) for ball, v in f_hat.cells] + [(ball, (None, v)) for ball, v in phi_hat.cells],
        combine,
    )
    ratios = []
    for ball, (a, b) in cells:
        if b is None:
            return (
                Verdict(False, "membership-support", Witness(ball, a, "f^ is nonzero where phi^ vanishes")),
                None,
            )
        ratios.append((fold_ball(ball)[0], [(a if a is not None else zero) / b]))

    folded = refine(ratios, lambda x, y: x + y)
    r_cells = []
    for ball, values in folded:
        distinct = set(values)
        if len(distinct) > 1:
            witness = Witness(ball, sorted(distinct, key=str)[0], "translates require different multipliers")
            return Verdict(False, "membership-periodic", witness, {"values": sorted(distinct, key=str)}), None
        r_cells.append((ball, distinct.pop()))
    r = StepFn.from_cells(field_params, r_cells, periodic_on_O=True, complex_values=True)
    return Verdict(True, "pti-membership", None, {"multiplier": r}), r


def fiber(f_hat: SBFunction, cell: Ball, k_max: int | None = None) -> list[CycloNumber]:
    """
    The truncated fiber (f^(cell + u(k)))_{k < q^k_max}.

    Raises:
        FiberWindowError: If the support sticks out of P^-k_max, or f^ is not constant on
            some translate of the cell
    """
    field_params = f_hat.field
    if cell.level < 0 or cell.center.integer_part() != cell.center:
        raise FiberWindowError(f"fiber cell {cell} is not inside O")
    outer = _outer_level(_cell_balls([f_hat]))
    if k_max is None:
        k_max = outer
    if outer > k_max:
        raise FiberWindowError(f"support reaches P^-{outer}, beyond the window P^-{k_max}")
    values = []
    for k in range(field_params.q**k_max):
        translate = cell.translate(u_of_index(field_params, k))
        value = CycloNumber.zero(field_params.p)
        for ball, v in f_hat.cells:
            if ball.contains(translate):
                value = v
                break
            if translate.contains(ball):
                raise FiberWindowError(f"f^ is not constant on {translate}")
        values.append(value)
    return values


def _check_generators(phi_hats: Sequence[SBFunction]) -> None:
    for index, phi in enumerate(phi_hats):
        verdict = is_parseval_generator(phi)
        if not verdict.ok:
            raise PreconditionError(f"generator {index} is not a Parseval generator", verdict)
    for a, b in itertools.combinations(range(len(phi_hats)), 2):
        verdict = pti_cross_orthogonality(phi_hats[a], phi_hats[b])
        if not verdict.ok:
            raise PreconditionError(f"generators {a} and {b} are not cross-orthogonal", verdict)


def multiplicity_from_generators(phi_hats: Sequence[SBFunction]) -> StepFn:
    """
    m_V = sum_i w_i for Parseval generators with pairwise orthogonal translate spaces.

    Raises:
        PreconditionError: Naming the offending generator or pair
    """
    phi_hats = list(phi_hats)
    _check_generators(phi_hats)
    m = StepFn(phi_hats[0].field, periodic_on_O=True)
    for phi in phi_hats:
        m = m + periodization_weight(phi)
    logger.debug(f"Multiplicity from {len(phi_hats)} generators: {m}")
    return m


def fiber_rank_check(phi_hats: Sequence[SBFunction], m: StepFn) -> Verdict:
    """
    Compare m with the exact rank of the generator fiber matrix on every refinement cell of O.
    """
    phi_hats = list(phi_hats)
    field_params = phi_hats[0].field
    images = [(fold_ball(ball)[0], True) for ball in _cell_balls(phi_hats)]
    images.append((Ball.ideal(field_params, 0), True))
    cells = [ball for ball, _ in refine(images, lambda a, _b: a)]
    k_max = _outer_level(_cell_balls(phi_hats))
    for cell in cells:
        rank = cy_rank([fiber(phi, cell, k_max) for phi in phi_hats])
        value = m.evaluate(cell.center)
        if value != rank:
            return Verdict(
                False, "fiber-rank", Witness(cell, value, f"fiber matrix has rank {rank}"), {"cells": len(cells)}
            )
    return Verdict(True, "fiber-rank", None, {"cells": len(cells)})


# =============================================================================
# Negative dilates: multiplicity, dimension and spectral functions
# =============================================================================


@dataclass(frozen=True)
class NegativeDilates:
    """
    Multiplicity and spectral function of the space spanned by D^-j T_k psi_m, j >= 1.

    `spectral` is exact off P^tail_level; on P^tail_level it equals the constant `theta` when
    `resolved`, and is omitted otherwise (windowed).
    """

    multiplicity: StepFn
    spectral: StepFn
    tail_level: int
    theta: CycloNumber | None
    resolved: bool
    integral: CycloNumber
    bound: Fraction
    norm_sum: CycloNumber

    @property
    def within_bound(self) -> bool:
        return self.integral <= self.bound

    @property
    def integral_identity(self) -> bool:
        """Integral of m_V over O equals sum ||psi_m||^2 / (q - 1)."""
        return self.integral == self.norm_sum / (self.multiplicity.field.q - 1)

    def to_json(self) -> dict:
        return {
            "multiplicity": self.multiplicity.to_json(),
            "spectral": self.spectral.to_json(),
            "tail_level": self.tail_level,
            "theta": str(self.theta) if self.theta is not None else None,
            "resolved": self.resolved,
            "integral": str(self.integral),
            "bound": str(self.bound),
            "within_bound": self.within_bound,
            "integral_identity": self.integral_identity,
        }

    def approx_json(self) -> dict:
        return {
            "multiplicity": self.multiplicity.approx_json(),
            "spectral": self.spectral.approx_json(),
            "integral": self.integral.approx().real,
            "bound": float(self.bound),
        }


def _dilation_profile(psi: MultiwaveletCandidate) -> tuple[StepFn, int, int, CycloNumber | None]:
    """
    F = sum |psi^_m|^2 with its support levels M, N and the dilation-invariant value theta.

    Raises:
        PreconditionError: If the dilation sum diverges near 0
    """
    F = _total_modulus(psi)
    annulus, witness = _unit_annulus_sum(F)
    if witness is not None:
        verdict = Verdict(False, "dilation-sum-one", witness)
        raise PreconditionError("dilation sum diverges near 0", verdict)
    theta = _constant_on(annulus, ESet.annulus(psi.field, 0))
    balls = [ball for ball, _ in F.cells]
    return F, _outer_level(balls), _inner_gap(balls) or 0, theta


def _below(F: StepFn, level: int) -> list[tuple[Ball, CycloNumber]]:
    """Cells of a step function made of annular cells that lie outside P^level."""
    return [(ball, v) for ball, v in F.cells if ball.center.valuation < level]


def negative_dilates_multiplicity(
    psi: MultiwaveletCandidate | Iterable[SBFunction], window: int = DEFAULT_WINDOW
) -> NegativeDilates:
    """
    m_V = periodization of sigma_V(xi) = sum_{j>=1} sum_m |psi^_m(p^-j xi)|^2.

    Off P^N only j < M + N contribute; on P^N \\ {0} every nonzero term has j >= 1, so sigma_V
    equals the full dilation sum there, the constant theta when the dilation sum is constant.
    Otherwise sigma_V is evaluated exactly off P^(N + window) and the result is flagged
    unresolved.

    Raises:
        PreconditionError: If the dilation sum diverges near 0
    """
    psi = _as_candidate(psi)
    field_params = psi.field
    F, outer, inner, theta = _dilation_profile(psi)
    resolved = theta is not None
    top = outer + inner - 1 if resolved else outer + inner - 1 + window
    tail_level = inner if resolved else inner + window

    cells: list[tuple[Ball, CycloNumber]] = []
    for j in range(1, top + 1):
        cells.extend(_below(_st_rescale(F, j), tail_level))
    if resolved:
        if not theta.is_zero():
            cells.append((Ball.ideal(field_params, tail_level), theta))
    else:
        logger.warning(f"Dilation sum is not constant near 0; spectral function is windowed at P^{tail_level}")
    sigma = StepFn.from_cells(field_params, cells)
    m = sb_periodize(sigma)
    norm_sum = sum((sb_norm_sq(f) for f in psi.hat_psis), CycloNumber.zero(field_params.p))
    result = NegativeDilates(
        multiplicity=m,
        spectral=sigma,
        tail_level=tail_level,
        theta=theta,
        resolved=resolved,
        integral=m.integral(),
        bound=Fraction(psi.order, field_params.q - 1),
        norm_sum=norm_sum,
    )
    logger.debug(f"Negative-dilates multiplicity {m}, integral {result.integral}")
    return result


def dimension_function(psi: MultiwaveletCandidate | Iterable[SBFunction]) -> StepFn:
    """
    D_psi(xi) = sum_m sum_{j>=1} sum_k |psi^_m(p^-j (xi + u(k)))|^2.

    Summed level by level: periodize the first J = max(M, 1) dilates, after which every dilate
    lies in O and the remaining tail is theta on P^(J+N) plus finitely many dilates outside.

    Raises:
        PreconditionError: If the dilation sum diverges near 0
        UndecidableError: If the dilation sum is not constant on the unit annulus, so the
            tail near 0 is unresolved
    """
    psi = _as_candidate(psi)
    field_params = psi.field
    F, outer, inner, theta = _dilation_profile(psi)
    head = max(outer, 1)
    total = StepFn(field_params, periodic_on_O=True)
    for j in range(1, head + 1):
        total = total + sb_periodize(_st_rescale(F, j))

    tail_level = head + inner
    cells: list[tuple[Ball, CycloNumber]] = []
    for j in range(head + 1, head + inner + outer):
        cells.extend(_below(_st_rescale(F, j), tail_level))
    if theta is None:
        raise UndecidableError(f"dilation sum is not constant on P^{tail_level}; D_psi has no finite form")
    if not theta.is_zero():
        cells.append((Ball.ideal(field_params, tail_level), theta))
    return total + StepFn.from_cells(field_params, cells, periodic_on_O=True)


def dimension_matches_multiplicity(
    psi: MultiwaveletCandidate | Iterable[SBFunction], phi_hats: Sequence[SBFunction] | None = None
) -> Verdict:
    """
    D_psi equals the negative-dilates multiplicity (and, when given, m_V of the generators).

    Raises:
        UndecidableError: If the tail of D_psi near 0 is unresolved
    """
    psi = _as_candidate(psi)
    d = dimension_function(psi)
    m = negative_dilates_multiplicity(psi).multiplicity
    report = {"dimension": d, "multiplicity": m}
    field_params = psi.field
    checks = [("negative-dilates", m)]
    if phi_hats is not None:
        checks.append(("generators", multiplicity_from_generators(phi_hats)))
    for name, other in checks:
        diff = d - other
        if not diff.is_zero():
            ball, value = diff.cells[0]
            return Verdict(False, f"dimension-equals-{name}", Witness(ball, value, "D_psi - m_V"), report)
    return Verdict(True, "dimension-equals-multiplicity", None, report)


def spectral_from_generators(phi_hats: Sequence[SBFunction]) -> StepFn:
    """
    sigma_V = sum_i |phi^_i|^2 for Parseval generators with orthogonal translate spaces.

    Raises:
        PreconditionError: If the generators are not such a family
    """
    phi_hats = list(phi_hats)
    _check_generators(phi_hats)
    return _sum_modulus(phi_hats)


def _sum_modulus(fns: Sequence[SBFunction]) -> StepFn:
    sigma = StepFn(fns[0].field)
    for f in fns:
        sigma = sigma + sb_modulus_sq(f)
    return sigma


def spectral_function(
    source: MultiwaveletCandidate | Sequence[SBFunction],
    mode: str = "from_parseval_generators",
    window: int = DEFAULT_WINDOW,
) -> tuple[StepFn, dict]:
    """
    The spectral function sigma_V.

    Args:
        source: Generators of V (mode `from_parseval_generators`) or a multiwavelet whose
            negative dilates span V (mode `negative_dilates`)
        mode: How V is presented
        window: Depth of the windowed evaluation when sigma_V is unresolved near 0

    Returns:
        sigma_V and a tail descriptor {tail_level, theta, resolved}; tail_level is None when
        sigma_V is fully described by its cells
    """
    if mode == "from_parseval_generators":
        phi_hats = source.hat_psis if isinstance(source, MultiwaveletCandidate) else source
        return spectral_from_generators(phi_hats), {"tail_level": None, "theta": None, "resolved": True}
    if mode == "negative_dilates":
        nd = negative_dilates_multiplicity(_as_candidate(source), window)
        return nd.spectral, {"tail_level": nd.tail_level, "theta": nd.theta, "resolved": nd.resolved}
    raise ValueError(f"unknown spectral mode {mode!r}")


def pti_spectral_function(phi_hat: SBFunction) -> StepFn:
    """
    sigma of the span of the translates of phi: |phi^|^2 / w on the support of phi^.
    """
    field_params = phi_hat.field
    w = periodization_weight(phi_hat)
    cells = []
    for ball, a in sb_modulus_sq(phi_hat).cells:
        for piece in ball.split_to(0) if ball.level < 0 else [ball]:
            offset = piece.center.fractional_part()
            image = ESet(field_params, (piece.folded(),))
            for sub, weight in w.pieces_on(image):
                cells.append((sub.translate(offset), a / weight))
    return StepFn.from_cells(field_params, cells)


def dilated_generators(phi_hats: Sequence[SBFunction]) -> list[SBFunction]:
    """Transforms of D T_i phi, i < q: Parseval generators of D(V) when the phi form ones of V."""
    return [sb_hat_affine(phi, 1, i) for phi in phi_hats for i in range(phi.field.q)]


def check_spectral_dilation(phi_hats: Sequence[SBFunction]) -> Verdict:
    """
    sigma_{D(V)}(xi) = sigma_V(p xi).

    The dilated generators form a Parseval frame of D(V) jointly, not one by one, so their
    squared moduli are summed without the generator checks.
    """
    sigma = spectral_from_generators(phi_hats)
    dilated = _sum_modulus(dilated_generators(phi_hats))
    expected = _st_rescale(sigma, -1)
    diff = dilated - expected
    if diff.is_zero():
        return Verdict(True, "spectral-dilation", None, {"sigma": sigma, "dilated": dilated})
    ball, value = diff.cells[0]
    return Verdict(False, "spectral-dilation", Witness(ball, value, "sigma_D(V) - sigma_V(p .)"))


def check_spectral_periodization(sigma: StepFn, m: StepFn) -> Verdict:
    """m_V = sum_k sigma_V(. + u(k))."""
    diff = sb_periodize(sigma) - m
    if diff.is_zero():
        return Verdict(True, "spectral-periodization", None, {"multiplicity": m})
    ball, value = diff.cells[0]
    return Verdict(False, "spectral-periodization", Witness(ball, value, "periodized sigma - m"))


# =============================================================================
# Consistency equation and the MRA criterion
# =============================================================================


def _digit_preimage(ball: Ball, d: int) -> Ball | None:
    """{xi in O : p xi + d in ball} for a ball inside O, or None when empty."""
    if ball.level == 0:
        return ball
    if ball.center.digit(0) != d:
        return None
    shifted = ball.center - LaurentNumber.monomial(ball.field, d, 0)
    return Ball(shifted.shift(-1), ball.level - 1)


def dilated_digit_sum(m: StepFn) -> StepFn:
    """xi -> sum_{d<q} m(p (xi + u(d))) on O, with p u(d) the constant digit d."""
    cells = []
    for d in range(m.field.q):
        for ball, v in m.cells:
            pre = _digit_preimage(ball, d)
            if pre is not None:
                cells.append((pre, v))
    return StepFn.from_cells(m.field, cells, periodic_on_O=True, complex_values=m.complex_values)


def consistency_check(m: StepFn, L: int, mode: str = "inequality") -> Verdict:
    """
    Delta(xi) = sum_{d<q} m(p (xi + u(d))) - m(xi); require Delta <= L (inequality) or
    Delta = L (equality) on O.

    Raises:
        NonRationalValueError: If a value of Delta is not rational
    """
    if mode not in ("inequality", "equality"):
        raise ValueError(f"unknown consistency mode {mode!r}")
    if not m.periodic_on_O:
        raise ValueError("consistency check needs an integral-periodic function")
    delta = dilated_digit_sum(m) - m
    report = {"delta": delta, "L": L, "mode": mode}
    for ball, value in delta.pieces_on(ESet.ideal(m.field, 0)):
        exact = value.to_fraction()
        if exact > L or (mode == "equality" and exact != L):
            logger.debug(f"Consistency fails on {ball}: Delta = {exact}, L = {L}")
            return Verdict(False, f"consistency-{mode}", Witness(ball, value, f"Delta = {exact}, L = {L}"), report)
    return Verdict(True, f"consistency-{mode}", None, report)


def wavelet_space_relation(psi: MultiwaveletCandidate | Iterable[SBFunction]) -> Verdict:
    """m_W(xi) + m_V(xi) = sum_{d<q} m_V(p (xi + u(d))), m_W the multiplicity of the translates of psi."""
    psi = _as_candidate(psi)
    m_v = negative_dilates_multiplicity(psi).multiplicity
    m_w = StepFn(psi.field, periodic_on_O=True)
    for f in psi.hat_psis:
        m_w = m_w + periodization_weight(f)
    diff = (m_w + m_v) - dilated_digit_sum(m_v)
    report = {"m_W": m_w, "m_V": m_v}
    if diff.is_zero():
        return Verdict(True, "wavelet-space-relation", None, report)
    ball, value = diff.cells[0]
    return Verdict(False, "wavelet-space-relation", Witness(ball, value, "m_W + m_V - dilated sum"), report)


def mra_verdict_from_multiplicity(m: StepFn) -> Verdict:
    """An orthonormal multiwavelet comes from an MRA iff m = 1."""
    mismatch = _first_mismatch(m.pieces_on(ESet.ideal(m.field, 0)), 1)
    if mismatch is None:
        return Verdict(True, "mra", None, {"multiplicity": m})
    ball, value = mismatch
    return Verdict(False, "mra", Witness(ball, value, "multiplicity differs from 1"), {"multiplicity": m})


def is_mra_multiwavelet(psi: MultiwaveletCandidate | Iterable[SBFunction]) -> Verdict:
    """
    Raises:
        PreconditionError: If psi is not an orthonormal multiwavelet
    """
    psi = _as_candidate(psi)
    orthonormal = is_orthonormal_multiwavelet(psi)
    if not orthonormal.ok:
        raise PreconditionError("not an orthonormal multiwavelet", orthonormal)
    return mra_verdict_from_multiplicity(negative_dilates_multiplicity(psi).multiplicity)


def translate_system_report(f_hat: SBFunction) -> dict:
    """
    Two independent tests of whether the translates of f form a Parseval frame of their span
    (resp. an orthonormal system): the periodization weight, and the consistency relation of
    the negative-dilates multiplicity m_f with L = 1.
    """
    parseval_direct = is_parseval_generator(f_hat).ok
    orthonormal_direct = is_orthonormal_generator(f_hat).ok
    report: dict = {"parseval_direct": parseval_direct, "orthonormal_direct": orthonormal_direct}
    try:
        nd = negative_dilates_multiplicity([f_hat])
    except PreconditionError:
        nd = None
    if nd is None or not nd.resolved:
        report.update({"resolved": False, "parseval_consistency": None, "orthonormal_consistency": None})
        report["agree"] = None
        return report
    parseval_consistency = consistency_check(nd.multiplicity, 1, "inequality").ok
    orthonormal_consistency = consistency_check(nd.multiplicity, 1, "equality").ok
    agree = parseval_consistency == parseval_direct and orthonormal_consistency == orthonormal_direct
    if not agree:
        logger.warning(f"Direct and consistency tests disagree for {f_hat}")
    report.update(
        {
            "resolved": True,
            "multiplicity": nd.multiplicity,
            "parseval_consistency": parseval_consistency,
            "orthonormal_consistency": orthonormal_consistency,
            "agree": agree,
        }
    )
    return report


# =============================================================================
# Wavelet sets and scaling sets
# =============================================================================


def _cross_dilate_overlaps(sets: Sequence[ESet]) -> list[tuple[int, int, int, Ball]]:
    """All (j, m, m', ball) with p^j W_m meeting W_m' in a ball of positive measure, m != m'."""
    overlaps = []
    for a, b in itertools.permutations(range(len(sets)), 2):
        # dilates of a ball around 0 are left to es_dilation_cover
        if any(ball.is_zero_centered() for ball in (*sets[a].balls, *sets[b].balls)):
            continue
        va = [int(ball.center.valuation) for ball in sets[a]]
        vb = [int(ball.center.valuation) for ball in sets[b]]
        if not va or not vb:
            continue
        for j in range(min(vb) - max(va), max(vb) - min(va) + 1):
            common = sets[a].dilate(j).intersect(sets[b])
            if not common.is_empty():
                overlaps.append((j, a, b, common.balls[0]))
    return overlaps


def verify_wavelet_set(w_list: Sequence[ESet], mode: str = "parseval") -> Verdict:
    """
    Decide whether ind(W_1), ..., ind(W_L) are the transforms of a Parseval (or orthonormal)
    multiwavelet: the dilates of W = union W_m partition K, and the lattice translates of each
    W_m partition a subset of K (all of K in orthonormal mode).

    Pieces with |p^j W_m intersect W_m'| > 0 for some j and m != m' fail with
    "cross-dilate-disjoint"; the witness value is j.
    """
    if mode not in ("parseval", "orthonormal"):
        raise ValueError(f"unknown wavelet-set mode {mode!r}")
    w_list = list(w_list)
    report: dict = {"mode": mode, "order": len(w_list)}
    overlaps = _cross_dilate_overlaps(w_list)
    report["cross_dilate_overlaps"] = len(overlaps)
    if overlaps:
        j, a, b, ball = overlaps[0]
        report["pieces"] = [a, b]
        logger.debug(f"p^{j} W_{a} meets W_{b} in {ball}")
        return Verdict(False, "cross-dilate-disjoint", Witness(ball, j, f"p^j W_{a} meets W_{b}"), report)
    dilation = es_dilation_cover(w_list)
    if not dilation.ok:
        return Verdict(False, dilation.condition, dilation.witness, report)
    translation_mode = "all_of_K" if mode == "orthonormal" else "subset"
    for index, piece in enumerate(w_list):
        verdict = es_is_translation_partition(piece, translation_mode)
        if not verdict.ok:
            report["piece"] = index
            return Verdict(False, verdict.condition, verdict.witness, report)
    return Verdict(True, f"wavelet-set-{mode}", None, report)


def translation_tiling_pieces(w: ESet) -> list[ESet]:
    """
    Split W into pieces whose lattice translates are pairwise disjoint.

    Over each cell of O, the parts of W folding onto it are dealt out in canonical order, so
    piece i collects the i-th preimage of every cell.
    """
    sources = []
    for ball in w.balls:
        for piece in ball.split_to(0) if ball.level < 0 else [ball]:
            sources.append((piece.folded(), [piece]))
    pieces: list[list[Ball]] = []
    for cell, preimages in refine(sources, lambda a, b: a + b):
        for index, source in enumerate(sorted(preimages, key=lambda ball: ball.key)):
            if index == len(pieces):
                pieces.append([])
            pieces[index].append(cell.translate(source.center.fractional_part()))
    return [ESet.from_balls(w.field, balls) for balls in pieces]


def _covers_by_dilates(s: ESet) -> Verdict:
    """Whether the dilates p^-j S, j >= 0, cover K (up to measure zero)."""
    if any(ball.is_zero_centered() for ball in s.balls):
        return Verdict(True, "dilates-cover")
    normalized = ESet.from_balls(s.field, (ball.annulus_normal() for ball in s.balls))
    uncovered = ESet.annulus(s.field, 0).subtract(normalized)
    if uncovered.is_empty():
        return Verdict(True, "dilates-cover")
    return Verdict(False, "dilates-cover", Witness(uncovered.balls[0], 0, "unit cell reached by no dilate"))


def verify_scaling_set(s: ESet, mode: str = "parseval") -> tuple[Verdict, ESet | None]:
    """
    Decide whether ind(S) is the transform of a Parseval (orthonormal) scaling function.

    Requires the lattice translates of S to partition a subset of K (all of K in orthonormal
    mode), the dilates p^-j S to cover K and S to lie inside p^-1 S. On success the wavelet
    set W = p^-1 S \\ S is derived, split into translation-tiling pieces and verified, and
    S = union_{j>=1} p^j W is confirmed exactly.

    Returns:
        The verdict and W (None when S fails)
    """
    if mode not in ("parseval", "orthonormal"):
        raise ValueError(f"unknown scaling-set mode {mode!r}")
    report: dict = {"mode": mode}
    translation = es_is_translation_partition(s, "all_of_K" if mode == "orthonormal" else "subset")
    if not translation.ok:
        return Verdict(False, translation.condition, translation.witness, report), None
    cover = _covers_by_dilates(s)
    if not cover.ok:
        return Verdict(False, cover.condition, cover.witness, report), None
    expanded = s.dilate(-1)
    outside = s.subtract(expanded)
    if not outside.is_empty():
        return (
            Verdict(False, "nested", Witness(outside.balls[0], 0, "part of S outside p^-1 S"), report),
            None,
        )

    w = expanded.subtract(s)
    pieces = translation_tiling_pieces(w)
    report.update({"W": w, "pieces": pieces, "order": len(pieces)})
    wavelet = verify_wavelet_set(pieces, mode)
    report["wavelet_set"] = wavelet
    if not wavelet.ok:
        return Verdict(False, wavelet.condition, wavelet.witness, report), w

    # union_{j>=1} p^j W telescopes to S minus the intersection of all p^j S, which is {0} or
    # empty for a bounded S, so the first layer decides the identity
    layer = w.dilate(1)
    expected = s.subtract(s.dilate(1))
    if layer != expected:
        diff = layer.subtract(expected).union(expected.subtract(layer))
        return Verdict(False, "reconstruction", Witness(diff.balls[0], 0, "p W != S \\ p S"), report), w
    if w.measure() != s.measure() * (s.field.q - 1):
        return Verdict(False, "reconstruction-measure", Witness(None, w.measure(), "|W| != (q-1)|S|"), report), w
    report["residual"] = "{0}" if any(ball.is_zero_centered() for ball in s.balls) else "empty"
    logger.debug(f"Scaling set {s} verified; W = {w}")
    return Verdict(True, f"scaling-set-{mode}", None, report), w


def verify_scaling_function(phi_hat: SBFunction) -> tuple[Verdict, StepFn | None]:
    """
    Decide whether phi is a Parseval scaling function.

    Requires phi to be a Parseval generator, |phi^| = 1 near 0, and the refinement relation
    phi^(p^-1 xi) = m_0(xi) phi^(xi) with m_0 integral periodic.

    Returns:
        The verdict and the filter m_0 on success
    """
    field_params = phi_hat.field
    generator = is_parseval_generator(phi_hat)
    if not generator.ok:
        return generator, None

    depth = 0
    for ball, _ in phi_hat.cells:
        depth = max(depth, ball.level)
        if not ball.center.is_zero():
            depth = max(depth, int(ball.center.valuation) + 1)
    near_zero = Ball.ideal(field_params, depth)
    value = phi_hat.coefficient_at(LaurentNumber.zero(field_params))
    modulus = value.abs_sq() * (field_params.q if phi_hat.half else 1)
    if modulus != 1:
        report = {"limit_level": depth}
        return Verdict(False, "limit-at-zero", Witness(near_zero, modulus, "|phi^|^2 near 0"), report), None

    membership, m0 = pti_membership(sb_rescale(phi_hat, 1), phi_hat)
    if not membership.ok:
        return Verdict(False, "refinement", membership.witness, membership.report), None
    return Verdict(True, "scaling-function", None, {"filter": m0, "limit_level": depth}), m0

