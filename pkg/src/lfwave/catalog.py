"""
Constructors for the standard bandlimited examples.

All functions are frequency-side indicators:
- shannon_multiwavelet: psi^_i = ind(O + u(i)), i = 1, ..., q-1
- example_315a(m): one generator ind(P^m \\ P^(m+1))
- example_315b(m): psi^_i = ind(P^m + i t^(m-1)), i = 1, ..., q-1
- example_46_scaling(variant, m): the scaling sets O, P^(m+1) and P^m of the three families
"""

from dataclasses import dataclass

from .gfq import FieldParams
from .locfield import LaurentNumber
from .sbfunc import SBFunction
from .setalg import Ball, ESet
from .waveletlab import MultiwaveletCandidate
from .ztrans import u_of_index

FAMILIES = ("shannon", "ex315a", "ex315b")
SCALING_VARIANTS = ("A", "B", "C")


def shannon_multiwavelet(field: FieldParams) -> MultiwaveletCandidate:
    """Orthonormal multiwavelet of order q - 1."""
    psis = []
    for i in range(1, field.q):
        coset = Ball(u_of_index(field, i), 0)
        psis.append(SBFunction.indicator(ESet(field, (coset,))))
    return MultiwaveletCandidate(tuple(psis), name="shannon")


def example_315a(field: FieldParams, m: int = 1) -> MultiwaveletCandidate:
    """Parseval multiwavelet of order 1 supported on the annulus P^m \\ P^(m+1)."""
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    return MultiwaveletCandidate((SBFunction.indicator(ESet.annulus(field, m)),), name="ex315a")


def example_315b(field: FieldParams, m: int = 1) -> MultiwaveletCandidate:
    """Parseval multiwavelet of order q - 1 supported on the cosets of P^m inside P^(m-1)."""
    if m < 1:
        raise ValueError(f"m must be at least 1, got {m}")
    psis = []
    for i in range(1, field.q):
        ball = Ball(LaurentNumber.monomial(field, i, m - 1), m)
        psis.append(SBFunction.indicator(ESet(field, (ball,))))
    return MultiwaveletCandidate(tuple(psis), name="ex315b")


@dataclass(frozen=True)
class ScalingExample:
    """A scaling set S, its scaling function ind(S) and the multiwavelet it pairs with."""

    variant: str
    scaling_set: ESet
    phi_hat: SBFunction
    wavelets: MultiwaveletCandidate


def example_46_scaling(field: FieldParams, variant: str, m: int = 1) -> ScalingExample:
    """
    Scaling sets: A is O (with the Shannon multiwavelet), B is P^(m+1) (with example_315a(m))
    and C is P^m (with example_315b(m)).
    """
    variant = variant.upper()
    if variant == "A":
        s, wavelets = ESet.ideal(field, 0), shannon_multiwavelet(field)
    elif variant == "B":
        s, wavelets = ESet.ideal(field, m + 1), example_315a(field, m)
    elif variant == "C":
        s, wavelets = ESet.ideal(field, m), example_315b(field, m)
    else:
        raise ValueError(f"unknown scaling example {variant!r}; expected one of {SCALING_VARIANTS}")
    return ScalingExample(variant, s, SBFunction.indicator(s), wavelets)


def family(field: FieldParams, name: str, m: int = 1) -> MultiwaveletCandidate:
    """Look up a multiwavelet family by name."""
    if name == "shannon":
        return shannon_multiwavelet(field)
    if name == "ex315a":
        return example_315a(field, m)
    if name == "ex315b":
        return example_315b(field, m)
    raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")
