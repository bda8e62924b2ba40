"""
Execution of parsed scripts.

Each statement that does something observable yields one record (a JSON-compatible dict):
builtins yield informational records, checks yield a verdict with the expectation it was
held to, and computations yield exact values together with the identities they were
cross-checked against.
"""

from collections.abc import Iterator
from typing import Any

from loguru import logger

from .catalog import example_46_scaling, family
from .dsl import (
    AnnulusAtom,
    BallAtom,
    Builtin,
    Check,
    Compute,
    FuncDef,
    IdealAtom,
    Script,
    SetAtom,
    SetDef,
    Statement,
    builtin_bindings,
    format_statement,
)
from .gfq import FieldParams
from .sbfunc import SBFunction, check_character_laws, sb_fourier, sb_norm_sq
from .setalg import Ball, ESet
from .utils import format_approx, format_exact
from .verdict import Verdict, Witness
from .waveletlab import (
    MultiwaveletCandidate,
    PreconditionError,
    UndecidableError,
    check_spectral_dilation,
    check_spectral_periodization,
    consistency_check,
    dimension_function,
    dimension_matches_multiplicity,
    fiber_rank_check,
    is_mra_multiwavelet,
    is_orthonormal_multiwavelet,
    is_parseval_generator,
    is_semi_orthogonal,
    multiplicity_from_generators,
    negative_dilates_multiplicity,
    spectral_from_generators,
    translate_system_report,
    translation_tiling_pieces,
    verify_affine_parseval,
    verify_scaling_function,
    verify_scaling_set,
    verify_wavelet_set,
)
from .ztrans import DEFAULT_WINDOW, check_lattice_laws

RUN_ERRORS = (ValueError, PreconditionError, UndecidableError)


class ScriptRunner:
    """
    Runs the statements of a script in order.

    Args:
        script: Parsed script
        window: Depth of exhaustive and windowed checks
        approx: Add non-authoritative decimal renderings to records
    """

    def __init__(self, script: Script, window: int = DEFAULT_WINDOW, approx: bool = False):
        self.script = script
        self.params: FieldParams = script.field_params
        self.window = window
        self.approx = approx
        self.sets: dict[str, ESet] = {}
        self.funcs: dict[str, SBFunction] = {}
        self.families: dict[str, list[str]] = {}
        self.failures = 0

    def run(self, strict: bool = False) -> Iterator[dict]:
        """
        Execute every statement, yielding one record per builtin, check and computation.

        Args:
            strict: Stop after the first record that fails
        """
        for stmt in self.script.statements:
            record = self.execute(stmt)
            if record is None:
                continue
            if record["failed"]:
                self.failures += 1
            yield record
            if strict and record["failed"]:
                logger.info(f"Stopping at line {stmt.loc[0]} (strict mode)")
                break

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    # -- bindings ------------------------------------------------------------

    def evaluate_set(self, atoms: tuple[SetAtom, ...]) -> ESet:
        balls: list[Ball] = []
        for atom in atoms:
            if isinstance(atom, BallAtom):
                balls.append(Ball(atom.center, atom.level))
            elif isinstance(atom, AnnulusAtom):
                balls.extend(ESet.annulus(self.params, atom.k).balls)
            elif isinstance(atom, IdealAtom):
                balls.append(Ball.ideal(self.params, atom.k))
            else:
                balls.extend(self.sets[atom.name].balls)
        return ESet.from_balls(self.params, balls)

    def evaluate_func(self, stmt: FuncDef) -> SBFunction:
        cells = []
        for term in stmt.terms:
            cells.extend((ball, term.coeff) for ball in self.evaluate_set(term.atoms).balls)
        return SBFunction.from_cells(self.params, cells)

    def functions(self, names: tuple[str, ...]) -> list[SBFunction]:
        """Resolve names to functions; a family name stands for all its members."""
        fns = []
        for name in names:
            for member in self.families.get(name, [name]):
                fns.append(self.funcs[member])
        return fns

    def candidate(self, names: tuple[str, ...]) -> MultiwaveletCandidate:
        return MultiwaveletCandidate(tuple(self.functions(names)), name=" ".join(names))

    # -- dispatch ------------------------------------------------------------

    def execute(self, stmt: Statement) -> dict | None:
        if isinstance(stmt, SetDef):
            self.sets[stmt.name] = self.evaluate_set(stmt.atoms)
            return None
        if isinstance(stmt, FuncDef):
            self.funcs[stmt.name] = self.evaluate_func(stmt)
            return None

        command = format_statement(stmt)
        logger.info(f"Line {stmt.loc[0]}: {command}")
        record: dict[str, Any] = {"line": stmt.loc[0], "command": command}
        try:
            if isinstance(stmt, Builtin):
                record["kind"] = "builtin"
                ok, result = self.builtin(stmt)
                failed = False
            elif isinstance(stmt, Check):
                record["kind"] = "check"
                verdict = self.check(stmt)
                ok, result = verdict.ok, verdict
                record["expect"] = stmt.expect
                failed = ok != (stmt.expect == "pass")
            else:
                record["kind"] = "compute"
                ok, result = self.compute(stmt)
                failed = not ok
        except RUN_ERRORS as e:
            logger.debug(f"Line {stmt.loc[0]} raised {type(e).__name__}: {e}")
            record.update({"ok": False, "failed": True, "error": f"{type(e).__name__}: {e}"})
            return record
        record.update({"ok": ok, "failed": failed, "result": format_exact(result)})
        if self.approx:
            record["approx"] = format_approx(result)
        return record

    def builtin(self, stmt: Builtin) -> tuple[bool, dict]:
        names = builtin_bindings(stmt, self.params.q)
        m = stmt.m or 1
        if stmt.family == "ex46":
            example = example_46_scaling(self.params, stmt.variant, m)
            set_name = f"ex46{stmt.variant}"
            self.sets[set_name] = example.scaling_set
            self.funcs[f"{set_name}_phi"] = example.phi_hat
            parseval, _ = verify_scaling_set(example.scaling_set, "parseval")
            orthonormal, _ = verify_scaling_set(example.scaling_set, "orthonormal")
        else:
            psi = family(self.params, stmt.family, m)
            members = [name for name, kind in names.items() if kind == "func"]
            for name, f in zip(members, psi.hat_psis, strict=True):
                self.funcs[name] = f
            self.families[stmt.family] = members
            parseval = verify_affine_parseval(psi)
            orthonormal = is_orthonormal_multiwavelet(psi)
        return parseval.ok, {"bound": list(names), "parseval": parseval, "orthonormal": orthonormal}

    def check(self, stmt: Check) -> Verdict:
        kind = stmt.kind
        if kind == "wavelet-set":
            return self.check_wavelet_set(stmt)
        if kind == "parseval-wavelet":
            return verify_affine_parseval(self.candidate(stmt.names))
        if kind == "orthonormal-wavelet":
            return is_orthonormal_multiwavelet(self.candidate(stmt.names))
        if kind == "semi-orthogonal":
            return is_semi_orthogonal(self.candidate(stmt.names))
        if kind == "scaling-set":
            verdict, _ = verify_scaling_set(self.sets[stmt.names[0]], stmt.mode)
            return verdict
        if kind == "scaling-function":
            verdict, _ = verify_scaling_function(self.funcs[stmt.names[0]])
            return verdict
        if kind == "mra":
            return self.check_mra(stmt)
        if kind == "consistency":
            nd = negative_dilates_multiplicity(self.candidate(stmt.names), self.window)
            verdict = consistency_check(nd.multiplicity, stmt.bound, stmt.mode)
            verdict.report["resolved"] = nd.resolved
            return verdict
        if kind == "translates":
            f = self.funcs[stmt.names[0]]
            report = translate_system_report(f)
            generator = is_parseval_generator(f)
            return Verdict(generator.ok, "translates", generator.witness, report)
        if kind == "lattice":
            return self._law_verdict("lattice-laws", check_lattice_laws(self.params, self.window))
        return self._law_verdict("character-laws", check_character_laws(self.params, max(1, self.window - 1)))

    @staticmethod
    def _law_verdict(condition: str, report: dict) -> Verdict:
        failure = report["first_failure"]
        witness = None if failure is None else Witness(None, failure["detail"], failure["law"])
        return Verdict(report["ok"], condition, witness, report)

    def check_wavelet_set(self, stmt: Check) -> Verdict:
        sets = [self.sets[name] for name in stmt.names]
        if len(sets) == 1 and stmt.order > 1:
            sets = translation_tiling_pieces(sets[0])
        if len(sets) != stmt.order:
            note = f"{len(sets)} translation-tiling pieces for order {stmt.order}"
            return Verdict(False, "order", Witness(None, len(sets), note), {"order": stmt.order})
        return verify_wavelet_set(sets, stmt.mode)

    def check_mra(self, stmt: Check) -> Verdict:
        psi = self.candidate(stmt.names)
        try:
            return is_mra_multiwavelet(psi)
        except PreconditionError as e:
            nd = negative_dilates_multiplicity(psi, self.window)
            fallback = consistency_check(nd.multiplicity, psi.order, "inequality")
            report = {"precondition": e.verdict, "consistency_inequality": fallback}
            return Verdict(False, "mra-precondition", e.verdict.witness, report)

    def compute(self, stmt: Compute) -> tuple[bool, dict]:
        kind = stmt.kind
        if kind == "fourier":
            f = self.funcs[stmt.names[0]]
            transform = sb_fourier(f)
            plancherel = sb_norm_sq(transform) == sb_norm_sq(f)
            return plancherel, {"transform": transform, "norm_sq": sb_norm_sq(f), "plancherel": plancherel}
        fns = self.functions(stmt.names)
        if kind == "multiplicity" and stmt.generators:
            m = multiplicity_from_generators(fns)
            rank = fiber_rank_check(fns, m)
            return rank.ok, {"multiplicity": m, "integral": m.integral(), "fiber_rank": rank}
        if kind == "spectral" and stmt.generators:
            sigma = spectral_from_generators(fns)
            dilation = check_spectral_dilation(fns)
            periodization = check_spectral_periodization(sigma, multiplicity_from_generators(fns))
            ok = dilation.ok and periodization.ok
            return ok, {"spectral": sigma, "dilation": dilation, "periodization": periodization}
        psi = MultiwaveletCandidate(tuple(fns))
        if kind == "multiplicity":
            nd = negative_dilates_multiplicity(psi, self.window)
            ok = nd.within_bound and nd.integral_identity
            return ok, {"negative_dilates": nd}
        if kind == "spectral":
            nd = negative_dilates_multiplicity(psi, self.window)
            # D_psi is undecidable on an unresolved tail; fall back to the windowed m_V
            m = dimension_function(psi) if nd.resolved else nd.multiplicity
            periodization = check_spectral_periodization(nd.spectral, m)
            tail = {"tail_level": nd.tail_level, "theta": nd.theta, "resolved": nd.resolved}
            return periodization.ok, {"spectral": nd.spectral, "tail": tail, "periodization": periodization}
        d = dimension_function(psi)
        match = dimension_matches_multiplicity(psi)
        return match.ok, {"dimension": d, "matches_multiplicity": match}
