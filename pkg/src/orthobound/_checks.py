"""Argument validation shared by the public modules."""

from __future__ import annotations

import math
import numbers


def check_dimension(n, minimum: int = 3) -> int:
    if isinstance(n, bool) or not isinstance(n, numbers.Integral):
        raise TypeError(f"dimension must be an integer, got {n!r}")
    if n < minimum:
        raise ValueError(f"dimension must be >= {minimum}, got {n}")
    return int(n)


def check_positive(name: str, x: float) -> float:
    x = float(x)
    if not (x > 0.0 and math.isfinite(x)):
        raise ValueError(f"{name} must be a positive finite number, got {x}")
    return x
