"""Adaptive one-dimensional quadrature.

Two schemes share one result type:

* tanh-sinh (double-exponential) summation for intervals with flagged
  endpoint singularities and for ``[a, inf)`` after the rational map
  ``v = a + s / (1 - s)``;
* globally adaptive Gauss-Kronrod (7/15) bisection for regular integrands.

Both are deterministic: the same inputs give bit-identical outputs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

__all__ = [
    "IntegrationResult",
    "QuadratureOptions",
    "QuadratureBudgetError",
    "integrate",
    "integrate_semi_infinite",
]

_EPS = 2.220446049250313e-16
_HALF_PI = 0.5 * math.pi
# Tanh-sinh refinement: level j uses step 2**-j in the transformed variable.
_MIN_LEVEL = 3
_MAX_LEVEL = 12
_T_MAX = 6.5


@dataclass(frozen=True)
class IntegrationResult:
    value: float
    abs_error_estimate: float
    n_evals: int
    converged: bool


@dataclass(frozen=True)
class QuadratureOptions:
    """Tolerances, evaluation budget and endpoint-singularity flags."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_evals: int = 2_000_000
    singular_left: bool = False
    singular_right: bool = False

    def __post_init__(self) -> None:
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_evals < 100:
            raise ValueError("max_evals must be at least 100")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))

    def with_flags(self, left: bool, right: bool) -> "QuadratureOptions":
        return replace(self, singular_left=left, singular_right=right)


class QuadratureBudgetError(RuntimeError):
    """Raised when ``max_evals`` is exhausted; ``partial`` holds the last estimate."""

    def __init__(self, message: str, partial: IntegrationResult):
        super().__init__(message)
        self.partial = partial


# A node mapper receives distances (dl, dr) from the ends of [0, 1] and
# returns the integrand times the Jacobian, or None once the node has
# collapsed onto an endpoint in floating point.
NodeMap = Callable[[float, float], Optional[float]]


def integrate(
    f: Callable[..., float],
    a: float,
    b: float,
    opts: QuadratureOptions | None = None,
    distances: bool = False,
) -> IntegrationResult:
    """Integrate ``f`` over ``[a, b]``.

    With ``distances=True`` (singular endpoints only) ``f`` is called as
    ``f(x, x - a, b - x)`` with both distances computed without
    cancellation.  Use it when the integrand is singular in ``b - x``:
    next to ``b`` the node ``x`` itself no longer resolves that distance.

    Raises:
        ValueError: if ``a >= b``.
        QuadratureBudgetError: if the evaluation budget runs out.
    """
    opts = opts or QuadratureOptions()
    if not a < b:
        raise ValueError(f"integration requires a < b, got [{a}, {b}]")
    if opts.singular_left or opts.singular_right or distances:
        width = b - a

        def mapped(dl: float, dr: float) -> Optional[float]:
            x = a + width * dl if dl <= dr else b - width * dr
            if distances:
                # x may round onto an endpoint; the distances still resolve it
                left, right = width * dl, width * dr
                if left == 0.0 or right == 0.0:
                    return None
                return f(min(max(x, a), b), left, right) * width
            if x <= a or x >= b:
                return None
            return f(x) * width

        return tanh_sinh(mapped, opts)
    return _gauss_kronrod(f, a, b, opts)


def integrate_semi_infinite(
    f: Callable[[float], float],
    a: float,
    opts: QuadratureOptions | None = None,
) -> IntegrationResult:
    """Integrate ``f`` over ``[a, inf)`` via ``v = a + s / (1 - s)``.

    The transformed integrand is summed by tanh-sinh, so a logarithmic or
    algebraic singularity at ``a`` is allowed when ``singular_left`` is set.
    """
    opts = opts or QuadratureOptions()

    def mapped(dl: float, dr: float) -> Optional[float]:
        if dr == 0.0:
            return None
        v = a + dl / dr
        if v <= a or math.isinf(v):
            return None
        return f(v) / (dr * dr)

    return tanh_sinh(mapped, opts)


def _de_node(t: float) -> Tuple[float, float, float]:
    """Distances (dl, dr) of the tanh-sinh node at t > 0 and its weight."""
    y = _HALF_PI * math.sinh(t)
    e = math.exp(-2.0 * y)
    dl = 1.0 / (1.0 + e)
    dr = e * dl
    return dl, dr, math.pi * math.cosh(t) * dl * dr


def tanh_sinh(g: NodeMap, opts: QuadratureOptions) -> IntegrationResult:
    """Level-doubling tanh-sinh sum of ``g`` over the unit interval.

    The error estimate is the change between successive levels plus the
    magnitude of the last retained tail terms; since the scheme converges
    quadratically in the level this over-estimates the true error.
    """
    evals = 0
    raw = 0.0  # sum of weight * g over all nodes on the current grid
    absraw = 0.0
    tail = 0.0
    prev = None
    value = 0.0
    err = math.inf

    def sweep(h: float, first: int, stride: int) -> None:
        nonlocal evals, raw, absraw, tail
        # the midpoint t = 0 is only visited on the coarsest level
        if first == 0:
            val = g(0.5, 0.5)
            evals += 1
            # None here means the whole interval is below resolution
            if val is not None:
                w = 0.25 * math.pi
                raw += w * val
                absraw += abs(w * val)
            first = stride
        for sign in (1, -1):
            k = first
            last = 0.0
            while True:
                t = k * h
                if t > _T_MAX:
                    break
                dl, dr, w = _de_node(t)
                if sign < 0:
                    dl, dr = dr, dl
                if w == 0.0 or dl == 0.0 or dr == 0.0:
                    break
                val = g(dl, dr)
                if val is None:
                    break
                evals += 1
                term = w * val
                raw += term
                absraw += abs(term)
                last = abs(term)
                if t > 1.0 and last <= 1e-22 * absraw:
                    break
                k += stride
            tail += last

    for level in range(_MAX_LEVEL + 1):
        h = 2.0**-level
        tail = 0.0
        if level == 0:
            sweep(1.0, 0, 1)
        else:
            sweep(h, 1, 2)
        value = h * raw
        if prev is not None:
            err = abs(value - prev) + h * tail + 8.0 * _EPS * h * absraw
        prev = value
        if evals > opts.max_evals:
            partial = IntegrationResult(value, err, evals, False)
            raise QuadratureBudgetError(
                f"quadrature budget of {opts.max_evals} evaluations exhausted", partial
            )
        if level >= _MIN_LEVEL and err <= opts.tolerance(value):
            return IntegrationResult(value, err, evals, True)
    return IntegrationResult(value, err, evals, False)


# Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def _gk15(f: Callable[[float], float], a: float, b: float) -> Tuple[float, float]:
    c = 0.5 * (a + b)
    hw = 0.5 * (b - a)
    fc = f(c)
    kron = fc * _WGK[7]
    gauss = fc * _WG[3]
    resabs = abs(kron)
    for j in range(7):
        dx = hw * _XGK[j]
        f1 = f(c - dx)
        f2 = f(c + dx)
        kron += _WGK[j] * (f1 + f2)
        resabs += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2 == 1:
            gauss += _WG[j // 2] * (f1 + f2)
    kron *= hw
    gauss *= hw
    resabs *= abs(hw)
    err = max(abs(kron - gauss), 50.0 * _EPS * resabs)
    return kron, err


def _gauss_kronrod(
    f: Callable[[float], float], a: float, b: float, opts: QuadratureOptions
) -> IntegrationResult:
    value, err = _gk15(f, a, b)
    evals = 15
    # max-heap on error; the sequence number keeps ordering deterministic
    heap = [(-err, 0, a, b, value)]
    seq = 1
    while err > opts.tolerance(value):
        if evals + 30 > opts.max_evals:
            partial = IntegrationResult(value, err, evals, False)
            raise QuadratureBudgetError(
                f"quadrature budget of {opts.max_evals} evaluations exhausted", partial
            )
        neg_e, _, lo, hi, v = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            heapq.heappush(heap, (neg_e, _, lo, hi, v))
            return IntegrationResult(value, err, evals, False)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        evals += 30
        heapq.heappush(heap, (-e1, seq, lo, mid, v1))
        heapq.heappush(heap, (-e2, seq + 1, mid, hi, v2))
        seq += 2
        value = math.fsum(item[4] for item in heap)
        err = math.fsum(-item[0] for item in heap)
    return IntegrationResult(value, err, evals, True)
