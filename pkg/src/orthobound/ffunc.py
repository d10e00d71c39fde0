"""The volume kernel F_n(l): integral formula, dimension-3 closed form and the
explicit short-length envelope ``K_n / (e^l - 1)^(n-2)``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from ._checks import check_dimension, check_positive
from .mfunc import MnConfig, munif_numerator, scaled_mn
from .quadrature import IntegrationResult, QuadratureOptions, integrate
from .specfun import log_gamma, log_sphere_volume

__all__ = [
    "HALF_LOG_5_2",
    "KERNEL_OPTIONS",
    "KernelConstants",
    "fn_integral",
    "f3_closed",
    "kernel_constants",
    "fn_lower_bound",
    "bk_identity_sum",
]

HALF_LOG_5_2 = 0.5 * math.log(2.5)
"""Upper end of the range where the envelope bound holds."""

KERNEL_OPTIONS = QuadratureOptions(abs_tol=1e-300, rel_tol=1e-11, singular_right=True)


@dataclass(frozen=True)
class KernelConstants:
    """Constants of the envelope ``F_n(l) >= K_n / (e^l - 1)^(n-2)``.

    ``K_n`` decays super-exponentially in ``n``, so the logs are kept as
    well; the plain values underflow to 0 for very large ``n``.
    """

    n: int
    A_n: float
    K_n: float
    K_n_floor: float
    log_K_n: float
    log_K_n_floor: float


def _log_prefactor(n: int) -> float:
    # log(2^(n-1) V_{n-2} V_{n-3} / V_{n-1})
    return (
        (n - 1) * math.log(2.0)
        + log_sphere_volume(n - 2)
        + log_sphere_volume(n - 3)
        - log_sphere_volume(n - 1)
    )


def fn_integral(
    n: int,
    l: float,
    opts: QuadratureOptions | None = None,
    config: MnConfig | None = None,
) -> IntegrationResult:
    """F_n(l) by quadrature over ``r`` in ``[0, 1]`` of the M_n kernel.

    With ``b(r) = sqrt((e^(2l) - r^2) / (1 - r^2))`` the integrand is
    ``r^(n-3) (1 - r^2)^(-(n-2)/2) M_n(b(r))``.  The two large factors are
    merged through ``q = (b - 1) sqrt(1 - r^2)``, which stays bounded as
    ``r -> 1``, so no intermediate overflows.

    Raises:
        ValueError: for ``l <= 0``.
        QuadratureBudgetError: if the evaluation budget runs out.
    """
    n = check_dimension(n)
    l = check_positive("l", l)
    opts = (opts or KERNEL_OPTIONS).with_flags(False, True)
    config = config or MnConfig.from_env()
    m = n - 2
    e2l = math.exp(2.0 * l)
    em1 = math.expm1(2.0 * l)
    norm = 1.0 / ((n - 1) * m)

    def integrand(r: float) -> float:
        omr2 = (1.0 - r) * (1.0 + r)
        s = math.sqrt(omr2)
        q = em1 / (math.sqrt(e2l - r * r) + s)
        bm1 = q / s
        t, _ = scaled_mn(n, bm1, config)
        return r ** (n - 3) * t * norm * q**-m

    res = integrate(integrand, 0.0, 1.0, opts)
    scale = math.exp(_log_prefactor(n))
    return IntegrationResult(
        res.value * scale, res.abs_error_estimate * scale, res.n_evals, res.converged
    )


def f3_closed(l: float) -> float:
    """Elementary form of the dimension-3 kernel, ``2 pi (l + 1) / (e^(2l) - 1)``."""
    l = check_positive("l", l)
    return 2.0 * math.pi * (l + 1.0) / math.expm1(2.0 * l)


def kernel_constants(n: int) -> KernelConstants:
    """``A_n``, ``K_n`` and the explicit lower estimate of ``K_n``.

    ``K_n = A'_n 2^(n-2) V_{n-2} V_{n-3} Gamma(n/2)^2 / ((n-2)^2 V_{n-1} Gamma(n))``
    and ``K_n >= (2 pi e/(n-1))^((n-1)/2) 3 A'_n / (2^(3/2) e^(5/2) (n-2))``
    where ``A'_n = (n-1)(n-2) A_n``.
    """
    n = check_dimension(n)
    a_prime = munif_numerator(n)
    log_a = math.log(a_prime)
    log_k = (
        log_a
        + _log_prefactor(n)
        - math.log(2.0)
        + 2.0 * log_gamma(0.5 * n)
        - 2.0 * math.log(n - 2)
        - log_gamma(float(n))
    )
    log_floor = (
        0.5 * (n - 1) * math.log(2.0 * math.pi * math.e / (n - 1))
        + math.log(3.0)
        + log_a
        - 1.5 * math.log(2.0)
        - 2.5
        - math.log(n - 2)
    )
    return KernelConstants(
        n=n,
        A_n=a_prime / ((n - 1) * (n - 2)),
        K_n=math.exp(log_k),
        K_n_floor=math.exp(log_floor),
        log_K_n=log_k,
        log_K_n_floor=log_floor,
    )


def fn_lower_bound(n: int, l: float) -> float:
    """Envelope ``K_n / (e^l - 1)^(n-2)``, valid for ``0 < l <= HALF_LOG_5_2``."""
    n = check_dimension(n)
    l = float(l)
    if not 0.0 < l <= HALF_LOG_5_2:
        raise ValueError(f"the envelope holds for 0 < l <= {HALF_LOG_5_2}, got {l}")
    kc = kernel_constants(n)
    return math.exp(kc.log_K_n - (n - 2) * math.log(math.expm1(l)))


def bk_identity_sum(
    n: int, spectrum: Iterable[float], opts: QuadratureOptions | None = None
) -> float:
    """Sum of F_n over a finite list of orthogeodesic lengths.

    For a complete orthospectrum this sum is the volume of the manifold;
    ``n = 3`` uses the closed form.
    """
    n = check_dimension(n)
    lengths = [check_positive("orthogeodesic length", l) for l in spectrum]
    if n == 3:
        terms = [f3_closed(l) for l in lengths]
    else:
        terms = [fn_integral(n, l, opts).value for l in lengths]
    return math.fsum(terms)
