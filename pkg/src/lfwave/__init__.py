"""
lfwave - Exact harmonic analysis and multiwavelet checks on GF(q)((t)).

Provides:
- FieldParams, LaurentNumber: the local field K = GF(q)((t)) with exact digit arithmetic
- u_of_index and friends: the translation lattice {u(n)}
- CycloNumber, chi: exact values in Q(zeta_p) and the canonical character
- Ball, ESet: finite unions of balls with exact set algebra and tiling decisions
- SBFunction, StepFn: bandlimited functions, the exact Fourier transform and step functions
- Multiwavelet, translation-invariant space and wavelet/scaling set verifiers
- The script language (parse, print_script, ScriptRunner) behind the `lfwave` command
"""

from importlib.metadata import version

from .catalog import (
    FAMILIES,
    SCALING_VARIANTS,
    ScalingExample,
    example_46_scaling,
    example_315a,
    example_315b,
    family,
    shannon_multiwavelet,
)
from .charcyclo import (
    CharacterDomainError,
    CharValue,
    CycloError,
    CycloNumber,
    NonRationalValueError,
    char_level,
    chi,
    chi_product,
    chi_y,
    cy_rank,
)
from .dsl import Script, ScriptError, parse, print_script
from .gfq import (
    MAX_FIELD_ORDER,
    FieldParams,
    FieldParamsError,
    GFqElem,
    default_modulus,
    field_tables,
    gf_add,
    gf_from_index,
    gf_index,
    gf_inv,
    gf_mul,
    gf_neg,
    gf_sub,
    gf_trace,
)
from .locfield import (
    LaurentNumber,
    lf_abs,
    lf_add,
    lf_fractional_part,
    lf_integer_part,
    lf_mul,
    lf_neg,
    lf_shift,
    lf_sub,
    lf_valuation,
    parse_laurent,
)
from .runner import ScriptRunner
from .sbfunc import (
    SBFunction,
    ScaleMismatchError,
    StepFn,
    check_character_laws,
    sb_dilate,
    sb_fourier,
    sb_hat_affine,
    sb_inner,
    sb_inv_fourier,
    sb_modulus_sq,
    sb_norm_sq,
    sb_periodize,
    sb_translate,
)
from .setalg import Ball, ESet, RefinementError, es_dilation_cover, es_is_translation_partition
from .verdict import Verdict, Witness
from .waveletlab import (
    FiberWindowError,
    MultiwaveletCandidate,
    NegativeDilates,
    PreconditionError,
    UndecidableError,
    consistency_check,
    dimension_function,
    is_mra_multiwavelet,
    is_orthonormal_multiwavelet,
    is_semi_orthogonal,
    multiplicity_from_generators,
    negative_dilates_multiplicity,
    spectral_function,
    verify_affine_parseval,
    verify_scaling_function,
    verify_scaling_set,
    verify_wavelet_set,
)
from .ztrans import (
    DEFAULT_WINDOW,
    LatticeDomainError,
    check_lattice_laws,
    index_of_u,
    u_add,
    u_neg,
    u_of_index,
)

__version__ = version("lfwave")

__all__ = [
    # Field and elements
    "FieldParams",
    "FieldParamsError",
    "GFqElem",
    "MAX_FIELD_ORDER",
    "default_modulus",
    "field_tables",
    "gf_add",
    "gf_mul",
    "gf_neg",
    "gf_sub",
    "gf_inv",
    "gf_trace",
    "gf_index",
    "gf_from_index",
    "LaurentNumber",
    "parse_laurent",
    "lf_add",
    "lf_sub",
    "lf_neg",
    "lf_mul",
    "lf_shift",
    "lf_abs",
    "lf_valuation",
    "lf_fractional_part",
    "lf_integer_part",
    # Translation lattice
    "DEFAULT_WINDOW",
    "LatticeDomainError",
    "u_of_index",
    "index_of_u",
    "u_add",
    "u_neg",
    "check_lattice_laws",
    # Characters and exact values
    "CycloNumber",
    "CycloError",
    "NonRationalValueError",
    "CharacterDomainError",
    "CharValue",
    "chi",
    "chi_y",
    "chi_product",
    "char_level",
    "cy_rank",
    # Sets
    "Ball",
    "ESet",
    "RefinementError",
    "es_is_translation_partition",
    "es_dilation_cover",
    # Functions
    "SBFunction",
    "StepFn",
    "ScaleMismatchError",
    "sb_fourier",
    "sb_inv_fourier",
    "sb_translate",
    "sb_dilate",
    "sb_hat_affine",
    "sb_inner",
    "sb_norm_sq",
    "sb_modulus_sq",
    "sb_periodize",
    "check_character_laws",
    # Verifiers
    "Verdict",
    "Witness",
    "MultiwaveletCandidate",
    "NegativeDilates",
    "PreconditionError",
    "UndecidableError",
    "FiberWindowError",
    "verify_affine_parseval",
    "is_orthonormal_multiwavelet",
    "is_semi_orthogonal",
    "negative_dilates_multiplicity",
    "dimension_function",
    "multiplicity_from_generators",
    "spectral_function",
    "consistency_check",
    "is_mra_multiwavelet",
    "verify_wavelet_set",
    "verify_scaling_set",
    "verify_scaling_function",
    # Examples
    "FAMILIES",
    "SCALING_VARIANTS",
    "ScalingExample",
    "shannon_multiwavelet",
    "example_315a",
    "example_315b",
    "example_46_scaling",
    "family",
    # Scripts
    "Script",
    "ScriptError",
    "ScriptRunner",
    "parse",
    "print_script",
]
