"""Elementary special functions: truncated-log polynomials, Gamma/Beta, sphere
volumes and hyperbolic radial integrals."""

from __future__ import annotations

import math

from .quadrature import QuadratureOptions, integrate

__all__ = [
    "p_poly",
    "l_fn",
    "harmonic",
    "log_gamma",
    "beta",
    "incomplete_beta",
    "sphere_volume",
    "log_sphere_volume",
    "cosh_power_integral",
    "sinh_power_integral",
]

# Tail-series truncation: stop once a term is below this fraction of the sum.
_TAIL_RTOL = 1e-17


def p_poly(k: int, x: float) -> float:
    """Truncated Taylor polynomial of ``-log(1 - x)``: ``sum_{j=1..k} x**j / j``.

    ``p_poly(0, x)`` is identically zero.
    """
    if k < 0:
        raise ValueError(f"polynomial order must be non-negative, got {k}")
    acc = 0.0
    for j in range(k, 0, -1):
        acc = 1.0 / j + x * acc
    return x * acc


def harmonic(k: int) -> float:
    """The k-th harmonic number, ``p_poly(k, 1)``."""
    return math.fsum(1.0 / j for j in range(1, k + 1))


def l_fn(k: int, x: float) -> float:
    """Remainder ``log|1 - x| + p_poly(k, x)``.

    For ``|x| <= 1/2`` this is summed as the tail ``-sum_{j>k} x**j / j``,
    which avoids cancelling the polynomial against the logarithm.
    """
    if k < 0:
        raise ValueError(f"polynomial order must be non-negative, got {k}")
    if x == 1.0:
        raise ValueError("l_fn is undefined at x = 1")
    if abs(x) <= 0.5:
        return _l_tail(k, x)
    return math.log(abs(1.0 - x)) + p_poly(k, x)


def _l_tail(k: int, x: float) -> float:
    if x == 0.0:
        return 0.0
    total = 0.0
    power = x ** (k + 1)
    j = k + 1
    while True:
        term = power / j
        total += term
        if abs(term) <= _TAIL_RTOL * abs(total):
            break
        j += 1
        power *= x
    return -total


def log_gamma(x: float) -> float:
    """Natural log of the Gamma function for ``x > 0``."""
    if not x > 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def beta(a: float, b: float) -> float:
    """Complete Beta function ``B(a, b)``."""
    if not (a > 0.0 and b > 0.0):
        raise ValueError(f"beta requires positive arguments, got ({a}, {b})")
    return math.exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b))


def incomplete_beta(x: float, a: float, b: float) -> float:
    """Unnormalized lower incomplete Beta ``int_0^x t**(a-1) (1-t)**(b-1) dt``.

    Computed by double-exponential quadrature, which absorbs the algebraic
    endpoint behaviour for ``a < 1`` or ``b < 1``.  For ``x > 1/2`` the
    reflection ``B(x; a, b) = B(a, b) - B(1 - x; b, a)`` keeps the
    quadrature nodes next to ``t = 0``, where they are exact; nodes near
    ``t = 1`` would lose the distance to the singular endpoint to rounding.
    """
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"incomplete_beta requires 0 <= x <= 1, got {x}")
    if not (a > 0.0 and b > 0.0):
        raise ValueError(f"incomplete_beta requires a, b > 0, got ({a}, {b})")
    if x == 0.0:
        return 0.0
    full = beta(a, b)
    if x == 1.0:
        return full
    if x > 0.5:
        return full - _lower_beta(1.0 - x, b, a, full)
    return _lower_beta(x, a, b, full)


def _lower_beta(x: float, a: float, b: float, full: float) -> float:
    am1, bm1 = a - 1.0, b - 1.0

    def integrand(t: float) -> float:
        return math.exp(am1 * math.log(t) + bm1 * math.log1p(-t))

    opts = QuadratureOptions(
        abs_tol=1e-15 * full,
        rel_tol=1e-15,
        singular_left=True,
        singular_right=True,
    )
    return integrate(integrand, 0.0, x, opts).value


def log_sphere_volume(n: int) -> float:
    """Log of the volume of the unit n-sphere in R^(n+1)."""
    if n < 0:
        raise ValueError(f"sphere dimension must be non-negative, got {n}")
    if n == 0:
        return math.log(2.0)
    return math.log(n + 1) + 0.5 * (n + 1) * math.log(math.pi) - math.lgamma(0.5 * (n + 3))


def sphere_volume(n: int) -> float:
    """Volume of the unit n-sphere, ``(n+1) pi^((n+1)/2) / Gamma((n+3)/2)``.

    ``V_0 = 2`` (two points).
    """
    if n < 0:
        raise ValueError(f"sphere dimension must be non-negative, got {n}")
    if n == 0:
        return 2.0
    if n < 300:
        return (n + 1) * math.pi ** (0.5 * (n + 1)) / math.gamma(0.5 * (n + 3))
    return math.exp(log_sphere_volume(n))


def cosh_power_integral(n: int, x: float) -> float:
    """``int_0^x cosh(r)**(n-1) dr`` by the reduction recurrence.

    Every term of the recurrence is positive, so it is stable for all ``x``.
    """
    if n < 2:
        raise ValueError(f"cosh_power_integral requires n >= 2, got {n}")
    if x < 0.0:
        raise ValueError(f"cosh_power_integral requires x >= 0, got {x}")
    p = n - 1
    s, c = math.sinh(x), math.cosh(x)
    # J_p = sinh cosh^(p-1) / p + (p-1)/p J_(p-2)
    if p % 2 == 0:
        j, start = x, 2
    else:
        j, start = s, 3
    for q in range(start, p + 1, 2):
        j = s * c ** (q - 1) / q + (q - 1) / q * j
    return j


def sinh_power_integral(m: int, r: float) -> float:
    """``int_0^r sinh(t)**(m-1) dt``.

    The downward recurrence loses digits for ``r < 1`` (its two terms nearly
    cancel), so small radii use the power series of ``sinh**(m-1)``.
    """
    if m < 2:
        raise ValueError(f"sinh_power_integral requires m >= 2, got {m}")
    if r < 0.0:
        raise ValueError(f"sinh_power_integral requires r >= 0, got {r}")
    if r == 0.0:
        return 0.0
    p = m - 1
    if r < 1.0:
        return _sinh_power_series(p, r)
    s, c = math.sinh(r), math.cosh(r)
    # J_p = sinh^(p-1) cosh / p - (p-1)/p J_(p-2)
    if p % 2 == 0:
        j, start = r, 2
    else:
        j, start = c - 1.0, 3
    for q in range(start, p + 1, 2):
        j = s ** (q - 1) * c / q - (q - 1) / q * j
    return j


def _sinh_power_series(p: int, r: float) -> float:
    # sinh(t)^p = t^p * A(t^2)^p with A(s) = sum s^k / (2k+1)!; the power of
    # the series uses the J.C.P. Miller recurrence.
    s = r * r
    a = [1.0]
    b = [1.0]
    total = 1.0 / (p + 1)
    k = 0
    while True:
        k += 1
        a.append(a[-1] / ((2 * k) * (2 * k + 1)))
        acc = 0.0
        for j in range(1, k + 1):
            acc += (p * j - k + j) * a[j] * b[k - j]
        b.append(acc / k)
        term = b[k] * s**k / (p + 2 * k + 1)
        total += term
        if term <= 1e-17 * total or k > 500:
            break
    return r ** (p + 1) * total
