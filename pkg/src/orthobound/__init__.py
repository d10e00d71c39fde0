"""Volume kernels of the orthospectrum volume identity and the
explicit volume and ortholength bounds derived from them."""

from ._backend import BACKEND
from .bounds import (
    BoundReport,
    Branch,
    ConstantsBundle,
    adeboye_wei_comparator,
    basmajian_term,
    bt_volume_bound,
    constants_bundle,
    dichotomy_bound,
    dim3_short_ortho_bound,
    even_dim_volume_floor,
    miyamoto_kellerhals_floor,
    odd_dim_volume_floor,
    ortholength_bound,
    volume_vs_boundary,
)
from .ffunc import (
    HALF_LOG_5_2,
    KernelConstants,
    bk_identity_sum,
    f3_closed,
    fn_integral,
    fn_lower_bound,
    kernel_constants,
)
from .mfunc import (
    MnConfig,
    MnRegime,
    MnValue,
    mn,
    mn_closed,
    mn_large_b,
    mn_lower_bound,
    mn_near_one,
    mn_oracle,
)
from .quadrature import (
    IntegrationResult,
    QuadratureBudgetError,
    QuadratureOptions,
    integrate,
    integrate_semi_infinite,
)
from .solver import (
    RootResult,
    dim3_volume_bound,
    find_root,
    general_volume_bound,
    solve_collar_balance,
    solve_l0,
)

__version__ = "0.1.0"
