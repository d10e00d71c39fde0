import pytest

from orthobound import _backend, _pycore

try:
    from orthobound import _core
except ImportError:  # extension not built
    _core = None

_KERNELS = ("mn_scaled_double", "mn_scaled_dd", "mn_oracle_core")


@pytest.fixture(params=["compiled", "python"])
def backend(request, monkeypatch):
    """Run a test once against each kernel implementation."""
    if request.param == "compiled":
        if _core is None:
            pytest.skip("compiled extension not built")
        source = _core
    else:
        source = _pycore
    for name in _KERNELS:
        monkeypatch.setattr(_backend, name, getattr(source, name))
    return request.param
