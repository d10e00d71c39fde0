"""Time the compiled kernels against the pure-Python fallback.

Usage::

    python3 benchmarks/bench_core.py [--repeat 5] [--format plain|json]
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import timeit
from dataclasses import asdict, dataclass
from typing import Callable, Dict, List

from orthobound import _backend, _pycore
from orthobound.ffunc import fn_integral

try:
    from orthobound import _core
except ImportError:
    _core = None

KERNELS = ("mn_scaled_double", "mn_scaled_dd", "mn_oracle_core")
GRID = [(n, 10.0 ** (k / 4.0)) for n in range(3, 9) for k in range(-12, 12)]


@dataclass
class Timing:
    case: str
    python_s: float
    compiled_s: float

    @property
    def speedup(self) -> float:
        return self.python_s / self.compiled_s


def _use(module) -> None:
    for name in KERNELS:
        setattr(_backend, name, getattr(module, name))


def _cases() -> Dict[str, Callable[[], object]]:
    def scaled_double():
        for n, bm1 in GRID:
            _backend.mn_scaled_double(n, bm1)

    def scaled_dd():
        for n, bm1 in GRID:
            _backend.mn_scaled_dd(n, bm1)

    def oracle():
        for n, b in ((3, 1.001), (5, 2.0), (8, 200.0)):
            _backend.mn_oracle_core(n, b, 1e-300, 1e-10, 2_000_000)

    def kernel_integral():
        for n, l in ((4, 0.2), (6, 1.0)):
            fn_integral(n, l)

    return {
        f"scaled M_n, double ({len(GRID)} pts)": scaled_double,
        f"scaled M_n, double-double ({len(GRID)} pts)": scaled_dd,
        "M_n oracle (3 pts)": oracle,
        "F_n quadrature (2 pts)": kernel_integral,
    }


def _best(fn: Callable[[], object], repeat: int) -> float:
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def run(repeat: int) -> List[Timing]:
    saved = {name: getattr(_backend, name) for name in KERNELS}
    out = []
    try:
        for label, fn in _cases().items():
            _use(_pycore)
            py = _best(fn, repeat)
            _use(_core)
            comp = _best(fn, repeat)
            out.append(Timing(label, py, comp))
    finally:
        for name, fn in saved.items():
            setattr(_backend, name, fn)
    return out


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="best of this many runs")
    parser.add_argument("--format", choices=("plain", "json"), default="plain")
    args = parser.parse_args(argv)
    if _core is None:
        print("compiled extension not built; run `python3 setup.py build_ext --inplace`",
              file=sys.stderr)
        return 1
    timings = run(args.repeat)
    if args.format == "json":
        print(json.dumps([dict(asdict(t), speedup=t.speedup) for t in timings], indent=2))
        return 0
    width = max(len(t.case) for t in timings)
    print(f"{'case':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}")
    for t in timings:
        print(f"{t.case:<{width}}  {t.python_s * 1e3:>8.2f}ms  {t.compiled_s * 1e3:>8.2f}ms  "
              f"{t.speedup:>7.1f}x")
    print(f"geometric mean speedup: {statistics.geometric_mean([t.speedup for t in timings]):.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
