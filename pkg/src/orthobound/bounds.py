"""Dimension constants g_n, h_n and the volume / ortholength bounds built on
them, together with the literature comparators they are measured against."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, Optional

from ._checks import check_dimension, check_positive
from .ffunc import HALF_LOG_5_2
from .mfunc import munif_numerator
from .specfun import sinh_power_integral, sphere_volume

__all__ = [
    "A_CONSTANT",
    "EIGHTH_LOG_5_2",
    "SQRT_5_2_MINUS_1",
    "DIM3_LENGTH_THRESHOLD",
    "KELLERHALS_RHO",
    "Branch",
    "InputKind",
    "ConstantsBundle",
    "BoundReport",
    "constants_bundle",
    "ortholength_bound",
    "dichotomy_bound",
    "bt_volume_bound",
    "volume_vs_boundary",
    "odd_dim_volume_floor",
    "even_dim_volume_floor",
    "adeboye_wei_comparator",
    "miyamoto_kellerhals_floor",
    "basmajian_term",
    "dim3_short_ortho_bound",
]

SQRT_5_2_MINUS_1 = math.sqrt(2.5) - 1.0
A_CONSTANT = SQRT_5_2_MINUS_1 / math.log(math.sqrt(2.5))
"""Slope of the chord of ``e^x - 1`` on ``[0, log sqrt(5/2)]``."""
EIGHTH_LOG_5_2 = 0.125 * math.log(2.5)
QUARTER_LOG_5_2 = 0.25 * math.log(2.5)
DIM3_LENGTH_THRESHOLD = 1.25

# Kellerhals' estimates of Miyamoto's linear constants rho_n (n = 3..6).
KELLERHALS_RHO = {3: 0.29156, 4: 0.43219, 5: 0.54167, 6: 0.64652}


class Branch(enum.Enum):
    SHORT_ORTHO = "short_ortho"
    LONG_ORTHO = "long_ortho"


class InputKind(enum.Enum):
    VOLUME = "volume"
    BOUNDARY_VOLUME = "boundary_volume"
    SYSTOLE = "systole"


@dataclass(frozen=True)
class ConstantsBundle:
    n: int
    g_n: float
    h_n: float
    a: float
    half_log_52: float


@dataclass(frozen=True)
class BoundReport:
    """Result of a dichotomy bound.

    Attributes:
        branch: which side of the dichotomy the reported bound belongs to.
        bound_value: the bound itself.
        branch_values: value of every branch that was evaluated.
        threshold: length threshold separating the branches, if any.
    """

    n: int
    input_kind: InputKind
    input_value: float
    branch: Branch
    bound_value: float
    constants: ConstantsBundle
    branch_values: Dict[str, float] = field(default_factory=dict)
    threshold: Optional[float] = None


def _log_inner(n: int) -> float:
    return math.log(munif_numerator(n))


def constants_bundle(n: int) -> ConstantsBundle:
    """g_n, h_n and the shared constants for dimension ``n``."""
    n = check_dimension(n)
    log_num = _log_inner(n)
    log_g = (
        math.log(3.0 * math.sqrt(math.pi))
        + log_num
        - math.log(2.0 * (n - 2))
        - 0.5 * math.log(n - 1)
        - 2.0
    ) / (n - 2)
    log_h = (math.log(3.0) + log_num - 1.5 * math.log(2.0) - 2.5 - math.log(n - 2)) / (n - 1)
    return ConstantsBundle(
        n=n,
        g_n=math.exp(log_g),
        h_n=math.exp(log_h),
        a=A_CONSTANT,
        half_log_52=HALF_LOG_5_2,
    )


def _gauss_factor(n: int) -> float:
    return math.sqrt(2.0 * math.pi * math.e / (n - 1))


def ortholength_bound(n: int, volume: float) -> BoundReport:
    """Short-orthogeodesic bound on ``e^L - 1`` in terms of the volume.

    Either ``L >= HALF_LOG_5_2`` (reported as ``threshold``) or
    ``e^L - 1 >= g_n sqrt(2 pi e/(n-1)) volume^(-1/(n-2))``.
    """
    n = check_dimension(n)
    volume = check_positive("volume", volume)
    c = constants_bundle(n)
    value = c.g_n * _gauss_factor(n) * volume ** (-1.0 / (n - 2))
    return BoundReport(
        n=n,
        input_kind=InputKind.VOLUME,
        input_value=volume,
        branch=Branch.SHORT_ORTHO,
        bound_value=value,
        constants=c,
        branch_values={Branch.SHORT_ORTHO.value: value},
        threshold=HALF_LOG_5_2,
    )


def dichotomy_bound(n: int) -> float:
    """Lower bound on ``e^L - 1`` for manifolds of volume below 1."""
    n = check_dimension(n)
    return min(SQRT_5_2_MINUS_1, constants_bundle(n).g_n * _gauss_factor(n))


def bt_volume_bound(n: int, systole: float) -> float:
    """Volume lower bound for small-systole manifolds of Belolipetsky-Thomson type."""
    n = check_dimension(n)
    systole = check_positive("systole", systole)
    g = constants_bundle(n).g_n
    return (0.5 * g * _gauss_factor(n) / systole) ** (n - 2)


def volume_vs_boundary(n: int, boundary_volume: float) -> BoundReport:
    """Unconditional volume bound from the boundary volume.

    A long shortest orthogeodesic gives ``Vol >= (1/4) log(5/2) A`` through
    the embedded collar; a short one gives
    ``Vol >= (h_n/3) sqrt(2 pi e/(n-1)) A^((n-2)/(n-1))``.  One of the two
    always holds, so their minimum is a bound for every manifold.
    """
    n = check_dimension(n)
    area = check_positive("boundary_volume", boundary_volume)
    c = constants_bundle(n)
    long_value = QUARTER_LOG_5_2 * area
    short_value = c.h_n / 3.0 * _gauss_factor(n) * area ** ((n - 2) / (n - 1))
    if short_value <= long_value:
        branch, value = Branch.SHORT_ORTHO, short_value
    else:
        branch, value = Branch.LONG_ORTHO, long_value
    return BoundReport(
        n=n,
        input_kind=InputKind.BOUNDARY_VOLUME,
        input_value=area,
        branch=branch,
        bound_value=value,
        constants=c,
        branch_values={
            Branch.LONG_ORTHO.value: long_value,
            Branch.SHORT_ORTHO.value: short_value,
        },
        threshold=HALF_LOG_5_2,
    )


def odd_dim_volume_floor(n: int) -> float:
    """``min((1/8) log(5/2), h_n/6) V_{n-1}`` for odd ``n``."""
    n = check_dimension(n)
    if n % 2 == 0:
        raise ValueError(f"odd_dim_volume_floor requires odd n, got {n}")
    h = constants_bundle(n).h_n
    return min(EIGHTH_LOG_5_2, h / 6.0) * sphere_volume(n - 1)


def even_dim_volume_floor(n: int) -> float:
    """Gauss-Bonnet floor ``V_n / 2`` for even ``n``."""
    n = check_dimension(n, minimum=2)
    if n % 2:
        raise ValueError(f"even_dim_volume_floor requires even n, got {n}")
    return 0.5 * sphere_volume(n)


def adeboye_wei_comparator(n: int) -> float:
    """Asymptotic-order comparator ``(2/n)^(n^2/2)``; not a verified constant."""
    n = check_dimension(n, minimum=2)
    return math.exp(0.5 * n * n * math.log(2.0 / n))


def miyamoto_kellerhals_floor(n: int) -> float:
    """Comparator ``(rho_n / 2) V_{n-1}`` for odd ``n``.

    ``rho_n`` is increasing in ``n``, so dimensions past the table use
    ``rho_6``.
    """
    n = check_dimension(n)
    if n % 2 == 0:
        raise ValueError(f"miyamoto_kellerhals_floor requires odd n, got {n}")
    rho = KELLERHALS_RHO[min(n, 6)]
    return 0.5 * rho * sphere_volume(n - 1)


def basmajian_term(n: int, l: float) -> float:
    """Volume of the hyperbolic ``(n-1)``-ball of radius ``log(coth(l/2))``."""
    n = check_dimension(n)
    l = check_positive("l", l)
    # coth(l/2) - 1 = 2 e^-l / (1 - e^-l), written to avoid overflow for large l
    radius = math.log1p(2.0 * math.exp(-l) / -math.expm1(-l))
    return sphere_volume(n - 2) * sinh_power_integral(n - 1, radius)


def dim3_short_ortho_bound(volume: float) -> float:
    """For ``n = 3``: either ``L > 1.25`` or ``e^L - 1 >= pi / volume``."""
    volume = check_positive("volume", volume)
    return math.pi / volume
