"""
Scalar helpers shared by the float and exact-rational code paths
"""
from fractions import Fraction
from typing import Any, Iterable, Union

import numpy as np

from errors import InputError

Number = Union[float, Fraction]


def parse_scalar(value: Any, rational: bool = False) -> Number:
    """
    Convert a user-facing scalar (int, float, Fraction or "a/b" string)
    Floats become Fraction(str(x)) in exact mode so 0.1 means 1/10
    """
    if isinstance(value, bool):
        raise InputError(f"Expected a number, got boolean {value!r}")
    try:
        if isinstance(value, Fraction):
            exact = value
        elif isinstance(value, int):
            exact = Fraction(value)
        elif isinstance(value, float):
            if not np.isfinite(value):
                raise InputError(f"Expected a finite number, got {value!r}")
            if not rational:
                return value
            exact = Fraction(str(value))
        elif isinstance(value, str):
            exact = Fraction(value.strip())
        else:
            raise InputError(f"Expected a number, got {type(value).__name__}")
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"Could not parse number {value!r}: {e}")
    return exact if rational else float(exact)


def is_exact(values: Iterable[Any]) -> bool:
    return all(isinstance(v, (Fraction, int)) and not isinstance(v, bool) for v in values)


def zero(rational: bool) -> Number:
    return Fraction(0) if rational else 0.0


def one(rational: bool) -> Number:
    return Fraction(1) if rational else 1.0


def as_array(values: Iterable[Number], rational: bool) -> np.ndarray:
    """Float array, or an object array of Fractions in exact mode"""
    values = list(values)
    if rational:
        return np.array([Fraction(v) for v in values], dtype=object)
    return np.array([float(v) for v in values], dtype=float)


def format_number(value: Number) -> str:
    """Stable text for reports: 12 significant digits, exact fractions kept as a/b"""
    if isinstance(value, Fraction):
        return str(value)
    return f"{float(value):.12g}"
