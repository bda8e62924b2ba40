"""
Utility functions for rendering exact values in reports.
"""

from fractions import Fraction
from typing import Any

from .charcyclo import CycloNumber


def format_exact(value: Any) -> Any:
    """
    Render a value for a JSON report without losing exactness.

    Fractions and cyclotomic numbers become strings (`1/4`, `1 - zeta`); booleans, ints,
    strings and None pass through; objects with a `to_json()` method, dicts, lists and tuples
    are rendered recursively.

    Args:
        value: Value to render

    Returns:
        JSON-compatible value
    """
    if value is None or isinstance(value, bool | int | str):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, CycloNumber):
        return str(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): format_exact(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [format_exact(v) for v in value]
    return str(value)


def format_approx(value: Any) -> Any:
    """
    Decimal rendering of a report value (non-authoritative).

    Mirrors format_exact, but numbers become floats or `a+bj` strings.
    """
    if value is None or isinstance(value, bool | str):
        return value
    if isinstance(value, int | Fraction):
        return float(value)
    if isinstance(value, CycloNumber):
        z = value.approx()
        if abs(z.imag) < 1e-12:
            return round(z.real, 12)
        return f"{z.real:.12g}{z.imag:+.12g}j"
    if hasattr(value, "approx_json"):
        return value.approx_json()
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): format_approx(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [format_approx(v) for v in value]
    return str(value)
