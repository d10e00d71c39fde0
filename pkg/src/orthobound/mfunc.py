"""The kernel M_n(b): closed form, guarded extended-precision regimes and a
double-integral oracle.

Everything is computed through the scaled quantity

    T(n, b) = (n-1)(n-2) (b-1)^(n-2) M_n(b),

which tends to ``2 H_{n-2}`` as ``b -> 1`` and to ``0`` like
``4 (n-2) log(b) / b`` as ``b -> inf``.  In double precision the closed form
loses about ``b * eps`` relative accuracy for large ``b`` and gains nothing
near 1 beyond what the scaled evaluation already protects, so the two ends
switch to double-double (and, past ``1e15``, to wide decimal) arithmetic.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass

from . import _backend
from ._checks import check_dimension
from .quadrature import IntegrationResult, QuadratureBudgetError, QuadratureOptions
from .specfun import harmonic

__all__ = [
    "MnRegime",
    "MnValue",
    "MnConfig",
    "ORACLE_OPTIONS",
    "munif_numerator",
    "mn_closed",
    "mn_near_one",
    "mn_large_b",
    "mn",
    "scaled_mn",
    "mn_oracle",
    "mn_lower_bound",
]

# The tanh-sinh nodes put the oracle's relative accuracy, not an absolute
# floor, in charge: M_n spans hundreds of orders of magnitude over the grid.
ORACLE_OPTIONS = QuadratureOptions(abs_tol=1e-300, rel_tol=1e-10)

_LOG_3_4 = math.log(0.75)


class MnRegime(enum.Enum):
    CLOSED_FORM = "closed_form"
    NEAR_ONE_SERIES = "near_one_series"
    LARGE_B_ASYMPTOTIC = "large_b_asymptotic"
    ORACLE = "oracle"


@dataclass(frozen=True)
class MnValue:
    value: float
    regime: MnRegime
    dimension: int
    argument: float


@dataclass(frozen=True)
class MnConfig:
    """Regime thresholds.

    Attributes:
        near_one_delta: ``b <= 1 + near_one_delta`` uses the near-one path.
        large_b: ``b >= large_b`` uses the large-argument path.
        decimal_above: above this ``b`` the large-argument path switches
            from double-double to decimal arithmetic.
    """

    near_one_delta: float = 1e-3
    large_b: float = 1e3
    decimal_above: float = 1e15

    def __post_init__(self) -> None:
        if not 0.0 < self.near_one_delta < 1.0:
            raise ValueError("near_one_delta must lie in (0, 1)")
        if not self.large_b > 1.0 + self.near_one_delta:
            raise ValueError("large_b must exceed 1 + near_one_delta")
        if not self.decimal_above >= self.large_b:
            raise ValueError("decimal_above must be at least large_b")

    @classmethod
    def from_env(cls) -> "MnConfig":
        """Defaults overridden by ``ORTHOBOUND_NEAR_ONE_DELTA`` / ``ORTHOBOUND_LARGE_B``."""
        kwargs = {}
        for key, env in (
            ("near_one_delta", "ORTHOBOUND_NEAR_ONE_DELTA"),
            ("large_b", "ORTHOBOUND_LARGE_B"),
        ):
            raw = os.environ.get(env)
            if raw:
                kwargs[key] = float(raw)
        return cls(**kwargs)


def munif_numerator(n: int) -> float:
    """``P_{n-3}(1) + (1 - 3^-(n-2)) (P_{n-2}(1) + log(3/4))``.

    This is ``(n-1)(n-2) A_n`` for the uniform lower bound on ``(1, 2]``;
    the same number enters ``K_n``, ``g_n`` and ``h_n``.
    """
    n = check_dimension(n)
    return harmonic(n - 3) + (1.0 - 3.0 ** -(n - 2)) * (harmonic(n - 2) + _LOG_3_4)


def _check_b(b: float) -> float:
    b = float(b)
    if not b > 1.0 or math.isnan(b):
        raise ValueError(f"M_n requires b > 1, got {b}")
    if math.isinf(b):
        raise ValueError("M_n requires a finite b")
    return b


def _unscale(n: int, t: float, bm1: float) -> float:
    # M = T / ((n-1)(n-2)) * (b-1)^-(n-2), falling back to logs on overflow
    m = n - 2
    c = t / ((n - 1) * m)
    try:
        return c * bm1**-m
    except OverflowError:
        return math.exp(math.log(c) - m * math.log(bm1))


def _near_one_scaled(n: int, bm1: float) -> float:
    two_h = 2.0 * harmonic(n - 2)
    correction = _backend.mn_scaled_dd(n, bm1) / two_h - 1.0
    return two_h * (1.0 + correction)


def _large_b_scaled(n: int, bm1: float, config: MnConfig) -> float:
    if bm1 + 1.0 < config.decimal_above:
        return _backend.mn_scaled_dd(n, bm1)
    return _backend.mn_scaled_decimal(n, bm1, 40 + int(math.log10(bm1)))


def scaled_mn(n: int, bm1: float, config: MnConfig) -> tuple[float, MnRegime]:
    """``(n-1)(n-2) (b-1)^(n-2) M_n(b)`` from ``bm1 = b - 1`` and its regime.

    Callers that combine M_n with a compensating power of ``b - 1`` use
    this to stay clear of overflow; no argument checking is done here.
    """
    if bm1 + 1.0 <= 1.0 + config.near_one_delta:
        return _near_one_scaled(n, bm1), MnRegime.NEAR_ONE_SERIES
    if bm1 + 1.0 >= config.large_b:
        return _large_b_scaled(n, bm1, config), MnRegime.LARGE_B_ASYMPTOTIC
    return _backend.mn_scaled_double(n, bm1), MnRegime.CLOSED_FORM


def mn_closed(n: int, b: float) -> float:
    """Closed form of M_n(b) evaluated in double precision.

    Accurate to a few ulps for ``b`` below about ``1e3``; use :func:`mn` to
    get automatic regime selection.

    Raises:
        ValueError: for ``b <= 1``.
    """
    n = check_dimension(n)
    b = _check_b(b)
    bm1 = b - 1.0
    return _unscale(n, _backend.mn_scaled_double(n, bm1), bm1)


def mn_near_one(n: int, b: float, config: MnConfig | None = None) -> float:
    """M_n(b) for ``1 < b <= 1 + delta``.

    The value is written as the leading term
    ``2 H_{n-2} / ((n-1)(n-2) (b-1)^(n-2))`` times ``1 + c(b)``, with the
    relative correction ``c`` taken from the closed form in double-double.
    """
    config = config or MnConfig.from_env()
    n = check_dimension(n)
    b = _check_b(b)
    if b > 1.0 + config.near_one_delta:
        raise ValueError(f"near-one regime requires b <= {1.0 + config.near_one_delta}, got {b}")
    bm1 = b - 1.0
    return _unscale(n, _near_one_scaled(n, bm1), bm1)


def mn_large_b(n: int, b: float, config: MnConfig | None = None) -> float:
    """M_n(b) for ``b >= B`` from the closed form in extended precision.

    Double-double carries about 32 digits, enough while ``b < 1e15``;
    beyond that the decimal path uses ``40 + log10(b)`` digits.
    """
    config = config or MnConfig.from_env()
    n = check_dimension(n)
    b = _check_b(b)
    if b < config.large_b:
        raise ValueError(f"large-b regime requires b >= {config.large_b}, got {b}")
    bm1 = b - 1.0
    return _unscale(n, _large_b_scaled(n, bm1, config), bm1)


def mn(n: int, b: float, config: MnConfig | None = None) -> MnValue:
    """Evaluate M_n(b), choosing the regime from ``config`` thresholds."""
    config = config or MnConfig.from_env()
    n = check_dimension(n)
    b = _check_b(b)
    bm1 = b - 1.0
    t, regime = scaled_mn(n, bm1, config)
    return MnValue(_unscale(n, t, bm1), regime, n, b)


def mn_oracle(n: int, b: float, opts: QuadratureOptions | None = None) -> IntegrationResult:
    """M_n(b) straight from its defining double integral.

    The inner integral over ``v`` in ``[b, inf)`` is done per outer node by
    tanh-sinh after compactification; the outer ``u`` integral over
    ``[-1, 1]`` has both endpoints treated as singular.  The inner
    tolerance is a hundredth of the outer one.

    Raises:
        QuadratureBudgetError: if ``opts.max_evals`` is exhausted.
    """
    opts = opts or ORACLE_OPTIONS
    n = check_dimension(n)
    b = _check_b(b)
    try:
        value, err, evals, ok = _backend.mn_oracle_core(
            n, b, opts.abs_tol, opts.rel_tol, opts.max_evals
        )
    except RuntimeError as exc:
        partial = IntegrationResult(math.nan, math.inf, opts.max_evals, False)
        raise QuadratureBudgetError(str(exc), partial) from exc
    ok = ok and err <= opts.tolerance(value)
    return IntegrationResult(value, err, evals, ok)


def mn_lower_bound(n: int, b: float) -> float:
    """Uniform lower bound ``A_n / (b-1)^(n-2)`` valid for ``1 < b <= 2``."""
    n = check_dimension(n)
    b = float(b)
    if not 1.0 < b <= 2.0:
        raise ValueError(f"the uniform lower bound holds for 1 < b <= 2, got {b}")
    bm1 = b - 1.0
    return munif_numerator(n) / ((n - 1) * (n - 2)) * bm1 ** -(n - 2)
