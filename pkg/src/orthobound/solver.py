"""Bracketed root finding and the collar-versus-kernel balance equations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

from ._checks import check_dimension, check_positive
from .ffunc import KERNEL_OPTIONS, f3_closed, fn_integral, kernel_constants
from .quadrature import QuadratureOptions
from .specfun import cosh_power_integral

__all__ = [
    "MIN_VOLUME_3D_LITERATURE",
    "RootResult",
    "BalanceSolution",
    "NoSignChangeError",
    "RootNotConvergedError",
    "find_root",
    "solve_collar_balance",
    "solve_l0",
    "volume_balance",
    "dim3_volume_bound",
    "general_volume_bound",
]

MIN_VOLUME_3D_LITERATURE = 6.452
"""Smallest volume of a compact hyperbolic 3-manifold with totally geodesic
boundary (Kojima-Miyamoto).  Quoted for comparison only, never computed."""

ROOT_TOL = 1e-10
# the envelope balance is closed form, so its root can be pinned much tighter
_ENVELOPE_TOL = 1e-14
_MAX_ITER = 200
_MAX_EXPANSIONS = 60


class NoSignChangeError(ValueError):
    pass


class RootNotConvergedError(RuntimeError):
    pass


@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int
    bracket: Tuple[float, float]


@dataclass(frozen=True)
class BalanceSolution:
    """Root of a balance equation and the common value of its two sides."""

    root: RootResult
    value: float


def find_root(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12
) -> RootResult:
    """Brent's method on ``[lo, hi]``.

    Stops once the bracket is narrower than ``tol * max(1, |x|)`` or ``f``
    hits zero exactly.  ``bracket`` in the result is the final enclosing
    interval.

    Raises:
        NoSignChangeError: if ``f(lo)`` and ``f(hi)`` share a sign.
        RootNotConvergedError: after 200 iterations without convergence.
    """
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return RootResult(a, 0.0, 0, (a, a))
    if fb == 0.0:
        return RootResult(b, 0.0, 0, (b, b))
    if (fa > 0.0) == (fb > 0.0):
        raise NoSignChangeError(f"f has the same sign at {a} and {b}")
    c, fc = a, fa
    d = e = b - a
    for it in range(1, _MAX_ITER + 1):
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 0.5 * tol * max(1.0, abs(b))
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return RootResult(b, fb, it, (min(b, c), max(b, c)))
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
    raise RootNotConvergedError(f"no convergence after {_MAX_ITER} iterations")


def _bracket_decreasing(g: Callable[[float], float], start: float = 1.0) -> Tuple[float, float]:
    # g > 0 to the left of the root and < 0 to the right
    x = start
    if g(x) > 0.0:
        for _ in range(_MAX_EXPANSIONS):
            if g(2.0 * x) <= 0.0:
                return x, 2.0 * x
            x *= 2.0
    else:
        for _ in range(_MAX_EXPANSIONS):
            if g(0.5 * x) > 0.0:
                return 0.5 * x, x
            x *= 0.5
    raise NoSignChangeError(f"no sign change found within 2**{_MAX_EXPANSIONS} of {start}")


def _kernel(n: int, opts: QuadratureOptions | None) -> Callable[[float], float]:
    if n == 3:
        return f3_closed
    opts = opts or KERNEL_OPTIONS
    return lambda l: fn_integral(n, l, opts).value


def solve_collar_balance(
    n: int, boundary_volume: float, opts: QuadratureOptions | None = None
) -> RootResult:
    """Unique ``l > 0`` with ``F_n(l) = A l / 2``."""
    n = check_dimension(n)
    area = check_positive("boundary_volume", boundary_volume)
    kernel = _kernel(n, opts)

    def g(l: float) -> float:
        return kernel(l) - 0.5 * area * l

    lo, hi = _bracket_decreasing(g)
    return find_root(g, lo, hi, ROOT_TOL)


def solve_l0(n: int, boundary_volume: float) -> RootResult:
    """Unique ``l_0 > 0`` with ``K_n / (e^l_0 - 1)^(n-2) = A l_0 / 2``.

    The root is located on the logarithm of the ratio of the two sides,
    which is well scaled even where ``K_n`` underflows; ``residual`` is the
    plain difference of the two sides at the root.
    """
    n = check_dimension(n)
    area = check_positive("boundary_volume", boundary_volume)
    log_k = kernel_constants(n).log_K_n
    m = n - 2

    def g(l: float) -> float:
        return log_k - m * math.log(math.expm1(l)) - math.log(0.5 * area * l)

    lo, hi = _bracket_decreasing(g)
    res = find_root(g, lo, hi, _ENVELOPE_TOL)
    l0 = res.root
    residual = math.exp(log_k - m * math.log(math.expm1(l0))) - 0.5 * area * l0
    return RootResult(l0, residual, res.iterations, res.bracket)


def volume_balance(
    n: int,
    boundary_volume: float,
    kernel: Callable[[float], float] | None = None,
    opts: QuadratureOptions | None = None,
) -> BalanceSolution:
    """Solve ``F_n(x) = A S_n(x/2)`` and return the root and common value.

    The collar of half-width ``L/2`` about the boundary has volume
    ``A S_n(L/2)``, increasing in ``L``, while ``F_n(L)`` decreases; a
    manifold's volume exceeds both, hence the common value.  By default
    ``F_n`` is taken from the integral formula in every dimension.
    """
    n = check_dimension(n)
    area = check_positive("boundary_volume", boundary_volume)
    if kernel is None:
        opts = opts or KERNEL_OPTIONS
        kernel = lambda x: fn_integral(n, x, opts).value  # noqa: E731

    def g(x: float) -> float:
        return kernel(x) - area * cosh_power_integral(n, 0.5 * x)

    lo, hi = _bracket_decreasing(g)
    res = find_root(g, lo, hi, ROOT_TOL)
    return BalanceSolution(res, area * cosh_power_integral(n, 0.5 * res.root))


def dim3_volume_bound() -> float:
    """Common value of ``F_3(x) = 4 pi S_3(x/2)`` from the closed form of F_3."""
    return volume_balance(3, 4.0 * math.pi, kernel=f3_closed).value


def general_volume_bound(
    n: int, boundary_volume: float, opts: QuadratureOptions | None = None
) -> float:
    """Volume lower bound from the balance ``F_n(x) = A S_n(x/2)``."""
    return volume_balance(n, boundary_volume, opts=opts).value
