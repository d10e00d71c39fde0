"""Pure-Python kernels; the compiled ``_core`` module mirrors this interface.

The explicit M_n formula is evaluated in the scaled form

    T(n, b) = (n-1)(n-2) (b-1)^(n-2) M_n(b)

with every large ``L_{n-3}`` argument paired with its ``(b-1)^(n-2)``
prefactor, so nothing overflows for ``b -> 1`` or ``b -> inf``.  The same
generic code runs on floats, double-doubles and ``decimal.Decimal``.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext

from ._ddouble import DD, dd_log, dd_log1p
from .quadrature import QuadratureOptions, integrate, integrate_semi_infinite

__all__ = ["mn_scaled_double", "mn_scaled_dd", "mn_scaled_decimal", "mn_oracle_core"]


class _Arith:
    __slots__ = ("num", "log", "log1p", "eps")

    def __init__(self, num, log, log1p, eps):
        self.num = num
        self.log = log
        self.log1p = log1p
        self.eps = eps


_FLOAT = _Arith(float, math.log, math.log1p, 1e-17)
_DOUBLE_DOUBLE = _Arith(DD, dd_log, dd_log1p, 1e-33)


def _scaled_l(k, x, omx, c, ar: _Arith):
    """``(c / |x|)**(k+1) * L_k(x)`` given ``omx = 1 - x`` computed exactly."""
    m = k + 1
    one = ar.num(1)
    neg = x < 0
    ax = -x if neg else x
    if ax <= 0.5:
        # -c^m * sum_{j>=m} sign^j |x|^(j-m) / j
        total = ar.num(0)
        power = one
        sign = -1 if (neg and m % 2) else 1
        j = m
        while True:
            term = power / j
            if sign < 0:
                term = -term
            total = total + term
            if abs(term) <= ar.eps * abs(total):
                break
            j += 1
            power = power * ax
            if neg:
                sign = -sign
        return -(c**m) * total
    inv = one / ax
    out = (c * inv) ** m * ar.log(abs(omx))
    cm = c**m
    for j in range(1, m):
        term = cm * inv ** (m - j) / j
        out = out - term if (neg and j % 2) else out + term
    return out


def scaled_kernel(n: int, bm1, ar: _Arith):
    """``(n-1)(n-2)(b-1)^(n-2) M_n(b)`` from ``bm1 = b - 1`` in arithmetic ``ar``."""
    one = ar.num(1)
    bm1 = ar.num(bm1)
    b = bm1 + one
    bp1 = bm1 + 2
    m = n - 2
    k = n - 3
    s = 1 if n % 2 == 0 else -1
    harm = ar.num(0)
    for j in range(1, m + 1):
        harm = harm + one / j
    twob = 2 * b
    x1 = bm1 / bp1
    x3 = bp1 / bm1
    x5 = twob / bp1
    x6 = twob / bm1
    x7 = 2 / bp1
    x8 = -2 / bm1
    log_ratio = 2 * ar.log(bm1) - ar.log(4 * b)  # log((b-1)^2 / 4b)

    t = ar.log1p(bm1 * bm1 / (4 * b)) + 2 * harm
    t = t - _scaled_l(k, x1, x7, x1, ar)
    t = t - s * _scaled_l(k, -x1, x5, x1, ar)
    t = t + x1**m * (-log_ratio - 2 * harm)
    t = t + _scaled_l(k, x3, x8, one, ar)
    t = t + s * _scaled_l(k, -x3, x6, one, ar)
    t = t + _scaled_l(k, x5, -x1, x1, ar)
    t = t - _scaled_l(k, x6, -x3, one, ar)
    t = t + _scaled_l(k, x7, x1, x1, ar)
    t = t - s * _scaled_l(k, x8, x3, one, ar)
    return t


def mn_scaled_double(n: int, bm1: float) -> float:
    return scaled_kernel(n, bm1, _FLOAT)


def mn_scaled_dd(n: int, bm1: float) -> float:
    return float(scaled_kernel(n, bm1, _DOUBLE_DOUBLE))


def mn_scaled_decimal(n: int, bm1: float, digits: int) -> float:
    """Scaled kernel in ``digits``-digit decimal arithmetic."""
    with localcontext() as ctx:
        ctx.prec = digits
        ar = _Arith(
            Decimal,
            lambda d: d.ln(),
            lambda d: (d + 1).ln(),
            Decimal(10) ** (2 - digits),
        )
        return float(scaled_kernel(n, Decimal(bm1), ar))


def _log_ratio_terms(b: float, bm1: float, w: float) -> float:
    # log((v^2-1)/(v^2-b^2)) with v = b + w, written to stay accurate as w -> 0
    x = bm1 * (b + 1.0)
    r = x / w / (w + 2.0 * b)
    if math.isinf(r):
        return math.log(x) - math.log(w) - math.log(w + 2.0 * b)
    return math.log1p(r)


def mn_oracle_core(n: int, b: float, abs_tol: float, rel_tol: float, max_evals: int):
    """Iterated quadrature of the defining double integral of M_n.

    Inner integral in ``z = (v - b) / (b - u)``, outer over ``u`` in
    ``[-1, 1]``.  Returns ``(value, abs_error, n_evals, converged)``.
    """
    bm1 = b - 1.0
    x = bm1 * (b + 1.0)
    evals = 0
    inner_ok = True
    inner_rel_err = 0.0
    outer_opts = QuadratureOptions(abs_tol, rel_tol, max_evals, True, True)
    inner_opts = QuadratureOptions(1e-300, rel_tol * 1e-2, max_evals, True, False)

    def outer(u: float) -> float:
        nonlocal evals, inner_ok, inner_rel_err
        d = b - u
        cu = math.log1p(x / ((1.0 - u) * (1.0 + u)))

        def inner(z: float) -> float:
            return (_log_ratio_terms(b, bm1, d * z) + cu) / (1.0 + z) ** n

        res = integrate_semi_infinite(inner, 0.0, inner_opts)
        evals += res.n_evals
        inner_ok = inner_ok and res.converged
        # the integrand is positive, so the worst relative inner error bounds
        # the inner contribution to the total error
        if res.value > 0.0:
            inner_rel_err = max(inner_rel_err, res.abs_error_estimate / res.value)
        scale = d ** (1 - n)
        if evals > max_evals:
            raise RuntimeError("oracle budget exhausted")
        return scale * res.value

    res = integrate(outer, -1.0, 1.0, outer_opts)
    err = res.abs_error_estimate + inner_rel_err * abs(res.value)
    return res.value, err, evals + res.n_evals, res.converged and inner_ok
