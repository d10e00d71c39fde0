"""Acceptance criteria, one printed PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` or directly with
``python3 tests/test_acceptance.py``.  Every criterion also checks its
runtime limit.
"""

import json
import math
import subprocess
import sys
import time

import pytest

from orthobound import (
    constants_bundle,
    dim3_volume_bound,
    f3_closed,
    fn_integral,
    mn,
    mn_oracle,
)
from orthobound.bounds import A_CONSTANT, EIGHTH_LOG_5_2
from orthobound.specfun import harmonic
from orthobound.verification import run_suite

G_PUBLISHED = (0.120822, 0.464543, 0.563796, 0.617183)
H_PUBLISHED = (0.203335, 0.448875, 0.542675, 0.601147)
GRID_B = (1.001, 1.01, 1.1, 1.5, 2.0, 5.0, 20.0, 200.0)
F3_GRID_L = (0.1, 0.25, 0.5, 1.0, 1.5, 2.0)


def emit(number, ok, detail, elapsed, limit):
    within = elapsed < limit
    status = "PASS" if ok and within else "FAIL"
    line = f"criterion {number:>2}: {status}  {detail}  [{elapsed:.2f}s, limit {limit:g}s]"
    capman = emit.capture
    if capman is not None:
        with capman.disabled():
            print(line)
    else:
        print(line)
    return ok and within


emit.capture = None


@pytest.fixture(autouse=True)
def _printer(capsys):
    emit.capture = capsys
    yield
    emit.capture = None


def check_1():
    t0 = time.perf_counter()
    errs = []
    for n, g_ref, h_ref in zip(range(3, 7), G_PUBLISHED, H_PUBLISHED):
        c = constants_bundle(n)
        errs += [abs(c.g_n - g_ref), abs(c.h_n - h_ref)]
    worst = max(errs)
    return emit(1, worst <= 1e-6, f"g_3..6, h_3..6 max |err| = {worst:.2e} (tol 1e-6)",
                time.perf_counter() - t0, 1.0)


def check_2():
    t0 = time.perf_counter()
    ea = abs(A_CONSTANT - 1.26846)
    eb = abs(EIGHTH_LOG_5_2 - 0.11453)
    ok = ea <= 1e-5 and eb <= 1e-5
    return emit(2, ok, f"a = {A_CONSTANT:.8f} (err {ea:.1e}), log(5/2)/8 = {EIGHTH_LOG_5_2:.8f} "
                f"(err {eb:.1e}), tol 1e-5", time.perf_counter() - t0, 1.0)


def check_3():
    t0 = time.perf_counter()
    v = dim3_volume_bound()
    ok = abs(v - 4.079) <= 1e-3 and abs(v - 2.986) > 1e-3
    return emit(3, ok, f"common value {v:.7f} vs 4.079 +- 0.001 (err {abs(v - 4.079):.4f}); "
                f"differs from 2.986", time.perf_counter() - t0, 5.0)


def check_4():
    t0 = time.perf_counter()
    v = constants_bundle(3).g_n * math.sqrt(math.pi * math.e)
    err = abs(v - 0.353076)
    return emit(4, err <= 1e-6, f"g_3 sqrt(pi e) = {v:.8f} (err {err:.1e}, tol 1e-6)",
                time.perf_counter() - t0, 1.0)


def check_5():
    t0 = time.perf_counter()
    worst, all_converged = 0.0, True
    for n in range(3, 9):
        for b in GRID_B:
            ref = mn_oracle(n, b)
            all_converged &= ref.converged
            worst = max(worst, abs(mn(n, b).value - ref.value) / ref.value)
    ok = worst <= 1e-6 and all_converged
    return emit(5, ok, f"48 points, max rel gap {worst:.2e} (tol 1e-6), oracle converged: "
                f"{all_converged}", time.perf_counter() - t0, 180.0)


def check_6():
    t0 = time.perf_counter()
    worst = max(abs(fn_integral(3, l).value - f3_closed(l)) / f3_closed(l) for l in F3_GRID_L)
    return emit(6, worst <= 1e-6, f"max rel gap {worst:.2e} over 6 lengths (tol 1e-6)",
                time.perf_counter() - t0, 120.0)


def check_7():
    t0 = time.perf_counter()
    near, far = [], []
    b = 1.0 + 1e-6
    for n in range(3, 9):
        scaled = (b - 1.0) ** (n - 2) * mn(n, b).value
        limit = 2.0 * harmonic(n - 2) / ((n - 1) * (n - 2))
        near.append(abs(scaled / limit - 1.0))
    b = 1e5
    for n in range(3, 9):
        scaled = b ** (n - 1) / math.log(b) * mn(n, b).value
        far.append(abs(scaled / (4.0 / (n - 1)) - 1.0))
    ok = max(near) <= 5e-3 and max(far) <= 2e-2
    return emit(7, ok, f"near-one max rel dev {max(near):.1e} (tol 5e-3); b=1e5 max rel dev "
                f"{max(far):.3f} (tol 0.02)", time.perf_counter() - t0, 60.0)


def check_8():
    t0 = time.perf_counter()
    names = ("lemma-munif", "lemma-fb", "lemma-kn", "beta-halving", "gamma-sandwich", "legendre")
    reports = [run_suite(name) for name in names]
    ok = all(r.all_pass for r in reports)
    margins = ", ".join(f"{r.suite} {r.min_margin():.2e}" for r in reports)
    return emit(8, ok, f"min margins: {margins}", time.perf_counter() - t0, 120.0)


def check_9():
    t0 = time.perf_counter()
    rep = run_suite("monotonicity")
    failing = sum(not c.passed for c in rep.cases)
    return emit(9, rep.all_pass, f"{len(rep.cases)} cases, {failing} failing",
                time.perf_counter() - t0, 60.0)


def check_10():
    t0 = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "orthobound", "verify", "all", "--format", "json"],
        capture_output=True, text=True,
    )
    body = json.loads(proc.stdout)
    suites = {s["suite"]: s for s in body["suites"]}
    every_case_has_margin = all(
        "margin" in c for s in body["suites"] for c in s["cases"]
    )
    covered = {"constants", "dim3-solve", "mn-oracle", "f3-crosscheck", "limits", "lemma-munif",
               "lemma-fb", "lemma-kn", "beta-halving", "gamma-sandwich", "legendre",
               "monotonicity"} <= set(suites)
    failing = [name for name, s in suites.items() if not s["all_pass"]]
    ok = proc.returncode == 0 and covered and every_case_has_margin
    return emit(10, ok, f"exit {proc.returncode}, {len(suites)} suites, failing: "
                f"{', '.join(failing) or 'none'}", time.perf_counter() - t0, 600.0)


CHECKS = (check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9,
          check_10)


@pytest.mark.parametrize("check", CHECKS, ids=[f"criterion_{i}" for i in range(1, 11)])
def test_acceptance(check):
    assert check()


if __name__ == "__main__":
    results = [check() for check in CHECKS]
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
