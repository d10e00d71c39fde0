"""Pure-Python double-double arithmetic (about 32 significant digits).

A value is the unevaluated sum ``hi + lo`` with ``|lo| <= ulp(hi) / 2``.
Products use Dekker splitting, so the error-free transforms are exact
without a hardware fused multiply-add.
"""

from __future__ import annotations

import math

__all__ = ["DD", "dd_log", "dd_log1p", "dd_exp"]

_SPLITTER = 134217729.0  # 2**27 + 1
_LN2 = (6.931471805599452862e-01, 2.319046813846299558e-17)


def _two_sum(a: float, b: float):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a: float, b: float):
    s = a + b
    return s, b - (s - a)


def _split(a: float):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a: float, b: float):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


class DD:
    __slots__ = ("hi", "lo")

    def __init__(self, hi: float = 0.0, lo: float = 0.0):
        self.hi = float(hi)
        self.lo = float(lo)

    @staticmethod
    def _coerce(other) -> "DD":
        if isinstance(other, DD):
            return other
        if isinstance(other, int) and abs(other) > 2**53:
            hi = float(other)
            return DD(hi, float(other - int(hi)))
        return DD(float(other), 0.0)

    def __add__(self, other) -> "DD":
        o = DD._coerce(other)
        s, e = _two_sum(self.hi, o.hi)
        t, f = _two_sum(self.lo, o.lo)
        e += t
        s, e = _quick_two_sum(s, e)
        e += f
        return DD(*_quick_two_sum(s, e))

    __radd__ = __add__

    def __neg__(self) -> "DD":
        return DD(-self.hi, -self.lo)

    def __sub__(self, other) -> "DD":
        return self + (-DD._coerce(other))

    def __rsub__(self, other) -> "DD":
        return DD._coerce(other) + (-self)

    def __mul__(self, other) -> "DD":
        o = DD._coerce(other)
        p, e = _two_prod(self.hi, o.hi)
        e += self.hi * o.lo + self.lo * o.hi
        return DD(*_quick_two_sum(p, e))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DD":
        o = DD._coerce(other)
        q1 = self.hi / o.hi
        r = self - o * q1
        q2 = r.hi / o.hi
        r = r - o * q2
        q3 = r.hi / o.hi
        return DD(*_quick_two_sum(q1, q2)) + q3

    def __rtruediv__(self, other) -> "DD":
        return DD._coerce(other) / self

    def __pow__(self, k: int) -> "DD":
        if not isinstance(k, int) or k < 0:
            raise ValueError("DD supports non-negative integer powers only")
        result = DD(1.0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self) -> "DD":
        return -self if self.hi < 0.0 else self

    def __float__(self) -> float:
        return self.hi + self.lo

    def _cmp(self, other) -> float:
        o = DD._coerce(other)
        d = self - o
        return d.hi

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0.0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0.0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0.0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0.0

    def __repr__(self) -> str:
        return f"DD({self.hi!r}, {self.lo!r})"


def dd_exp(x: DD) -> DD:
    """Exponential: argument reduction by ln 2 and 2**-10, Taylor, squaring."""
    if x.hi > 709.0:
        raise OverflowError("dd_exp overflow")
    if x.hi < -745.0:
        return DD(0.0)
    k = math.floor(x.hi / _LN2[0] + 0.5)
    r = x - DD(*_LN2) * k
    r = DD(r.hi * 0.0009765625, r.lo * 0.0009765625)
    # expm1(r) for |r| < 3.4e-4; ten terms are below 2**-106
    term = r
    s = r
    for j in range(2, 11):
        term = term * r / j
        s = s + term
    for _ in range(10):
        s = s * 2.0 + s * s
    s = s + 1.0
    return DD(math.ldexp(s.hi, k), math.ldexp(s.lo, k))


def dd_log(x) -> DD:
    """Natural log via one Newton step on exp from the double estimate."""
    x = DD._coerce(x)
    if not x.hi > 0.0:
        raise ValueError("dd_log requires a positive argument")
    y = DD(math.log(x.hi))
    return y + x * dd_exp(-y) - 1.0


def dd_log1p(x) -> DD:
    return dd_log(DD._coerce(x) + 1.0)
