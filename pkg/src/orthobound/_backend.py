"""Select the compiled kernels when available, else the pure-Python ones.

Set ``ORTHOBOUND_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from ._pycore import mn_scaled_decimal

if os.environ.get("ORTHOBOUND_PURE_PYTHON") == "1":
    _compiled = None
else:
    try:
        from . import _core as _compiled
    except ImportError:  # extension not built
        _compiled = None

if _compiled is not None:
    from ._core import mn_oracle_core, mn_scaled_dd, mn_scaled_double

    BACKEND = "compiled"
else:
    from ._pycore import mn_oracle_core, mn_scaled_dd, mn_scaled_double

    BACKEND = "python"

__all__ = ["BACKEND", "mn_scaled_double", "mn_scaled_dd", "mn_scaled_decimal", "mn_oracle_core"]
