"""Rational promotion and exact-where-possible powers."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Real = Union[int, float, Fraction]


def to_rational(value) -> Fraction:
    """Promote ``value`` to a Fraction without rounding.

    Floats are converted from their exact binary value; strings accept
    ``"1/3"``, ``"0.25"`` or ``"1e-3"`` and are parsed as written.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse {value!r} as a rational") from exc
    raise TypeError(f"cannot promote {type(value).__name__} to a rational")


def is_integral(s: Fraction) -> bool:
    return s.denominator == 1


def rpow(x: Fraction, s: Fraction) -> Fraction:
    """``x ** s`` for ``x >= 0``.

    Exact for integral ``s`` (and for ``x`` in {0, 1}); otherwise the float
    power promoted to a Fraction, so repeated calls agree bit for bit.
    """
    if x < 0:
        raise ValueError("rpow needs x >= 0")
    if x == 0:
        if s <= 0:
            raise ValueError("0 ** s with s <= 0")
        return Fraction(0)
    if x == 1 or s == 0:
        return Fraction(1)
    if is_integral(s):
        return x ** int(s)
    # Fractional root of a perfect power stays exact.
    root = _exact_root(x, s)
    if root is not None:
        return root
    return Fraction(float(x) ** float(s))


def _exact_root(x: Fraction, s: Fraction) -> Fraction | None:
    k = s.denominator
    if k > 64:
        return None
    num = _int_root(x.numerator, k)
    den = _int_root(x.denominator, k)
    if num is None or den is None:
        return None
    return Fraction(num, den) ** s.numerator


def _int_root(n: int, k: int) -> int | None:
    r = round(n ** (1.0 / k)) if n < 2**1000 else None
    if r is None:
        return None
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    return None


