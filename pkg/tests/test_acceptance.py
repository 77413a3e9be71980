"""Acceptance suite: one test and one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python3 tests/test_acceptance.py``. Tolerances and runtime budgets are
pinned below; none is loosened to make a criterion pass.
"""
import math
import sys
import time

import numpy as np

from firingmap import (
    FiringEngine,
    PiecewiseConstant,
    TrigPolynomial,
    Verdict,
    Window,
    certified_lower_bound,
    check_well_defined,
    compare_with_periodic_approximant,
    discontinuities,
    random_stimulus,
    rate_sequence,
    verify_displacement_theorem,
)
from firingmap.cli import run as cli_run
from firingmap.oracle import OracleConfig, brute_first_crossing

from conftest import ACCEPTANCE_LINES

SQRT2 = math.sqrt(2.0)
TWO_PI = 2.0 * math.pi

# criterion 1
CONST_TOL = 1e-9
CONST_BUDGET = 1.0
# criterion 2
PERIODIC_PHI_TOL = 1e-9
PERIODIC_PSI_TOL = 1e-8
PERIODIC_BUDGET = 5.0
# criterion 3
PLATEAU_RIGHT_TOL = 1e-6
PLATEAU_BUDGET = 1.0
# criterion 4
RATE_TOL = 1e-3
RATE_HALVING = (0.5 * 0.8, 0.5 * 1.2)  # deviation ratio dev(2n) / dev(n), +-20 %
RATE_BUDGET = 30.0
# criterion 5
DISPLACEMENT_SLACK = 1e-6
DISPLACEMENT_BUDGET = 30.0
# criterion 6
THEOREM_EPS = 0.25
THEOREM_NEAR = 182.21
THEOREM_NEAR_TOL = 0.1
THEOREM_BUDGET = 600.0
# criterion 7
APPROX_EPS = 0.04
APPROX_DELTA = 0.7
APPROX_BUDGET = 120.0
# criterion 8
CONVERGENCE_TOL = 1e-3
CONVERGENCE_N = 10_000
CONVERGENCE_BUDGET = 60.0
# criterion 9
ORACLE_TOL = 1e-4
ORACLE_BUDGET = 120.0
# criterion 10
UNDEFINED_BUDGET = 1.0
# criterion 11
MONOTONE_BUDGET = 60.0


def quasiperiodic():
    return TrigPolynomial.from_terms(1.0, [(0.0, 0.2, 1.0), (0.0, 0.2, SQRT2)])


def report(number: int, title: str, ok: bool, elapsed: float, budget: float, detail: str):
    """Record the criterion line; conftest prints all of them after the run."""
    within = elapsed < budget
    verdict = "PASS" if ok and within else "FAIL"
    line = (f"[acceptance] criterion {number:2d} {verdict}: {title} | {detail} | "
            f"{elapsed:.2f}s of {budget:g}s")
    ACCEPTANCE_LINES.append(line)
    assert ok, line
    assert within, line


def test_criterion_01_constant_exactness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    starts = rng.uniform(-10, 10, size=200)
    worst = 0.0
    for c in (0.5, 1.0, 2.0, math.pi):
        e = FiringEngine(TrigPolynomial.constant(c))
        for n in (1, 2, 3, 10, 57, 100, 999, 1000):
            worst = max(worst, float(np.max(np.abs(e.phi_n(starts, n) - (starts + n / c)))))
    elapsed = time.perf_counter() - t0
    report(1, "constant stimuli fire at t + n/c", worst <= CONST_TOL, elapsed, CONST_BUDGET,
           f"max error {worst:.3g} (tol {CONST_TOL:g})")


def _bisection(F, lo, hi, level):
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        lo, hi = (lo, mid) if F(mid) >= level else (mid, hi)
    return hi


def test_criterion_02_periodic_golden_values():
    t0 = time.perf_counter()
    e = FiringEngine(TrigPolynomial.from_terms(1.0, [(0.0, 0.5, TWO_PI)]))
    F = lambda s: s + (1.0 - math.cos(TWO_PI * s)) / (4.0 * math.pi)  # noqa: E731
    ref1, ref3 = _bisection(F, 0, 5, 1.0), _bisection(F, 0, 10, 3.0)
    err1 = abs(e.phi(0.0) - 1.0)
    err3 = abs(e.phi_n(0.0, 3) - 3.0)
    oracle_gap = max(abs(ref1 - 1.0), abs(ref3 - 3.0))
    grid = np.linspace(0.0, 10.0, 1000)
    shift = float(np.max(np.abs(e.psi(grid + 1.0) - e.psi(grid))))
    ok = err1 <= PERIODIC_PHI_TOL and err3 <= PERIODIC_PHI_TOL and shift <= PERIODIC_PSI_TOL \
        and oracle_gap <= PERIODIC_PHI_TOL
    elapsed = time.perf_counter() - t0
    report(2, "1 + 0.5 sin(2 pi t): phi(0) = 1, phi^3(0) = 3, psi 1-periodic", ok, elapsed,
           PERIODIC_BUDGET, f"|phi(0)-1| {err1:.2g}, |phi^3(0)-3| {err3:.2g}, "
           f"bisection gap {oracle_gap:.2g}, max|psi(t+1)-psi(t)| {shift:.2g}")


def test_criterion_03_piecewise_discontinuity():
    t0 = time.perf_counter()
    e = FiringEngine(PiecewiseConstant.periodic([0.0, 0.5, 1.0], [2.0, 0.0]))
    exact = (e.phi(0.0) == 0.5, e.phi(0.25) == 1.25, e.phi_n(0.0, 2) == 1.5)
    rep = discontinuities(e, Window(0.0, 1.0, 0.1))
    first = rep.entries[0] if len(rep) else None
    found = first is not None and (first.abar, first.jump, first.plateau_length) == (0.0, 0.5, 0.5)
    left = [abs(e.phi(-10.0**-k) - e.phi(0.0)) for k in range(3, 9)]
    right = [e.phi(10.0**-k) for k in range(3, 9)]
    left_ok = all(b <= a + 1e-15 for a, b in zip(left, left[1:])) and left[-1] <= 1e-8
    right_ok = min(right) >= 1.0 - PLATEAU_RIGHT_TOL
    ok = all(exact) and found and left_ok and right_ok
    elapsed = time.perf_counter() - t0
    report(3, "step function: exact phi values and the jump at abar = 0", ok, elapsed,
           PLATEAU_BUDGET, f"exact {exact}, first entry {first}, left gaps {max(left):.2g}, "
           f"min right probe {min(right):.12g}")


def test_criterion_04_rate_equals_mean():
    t0 = time.perf_counter()
    e = FiringEngine(quasiperiodic())
    dev_half = e.firing_rate(0.0, 5_000).deviation
    full = e.firing_rate(0.0, 10_000)
    ratio = full.deviation / dev_half
    ok = full.deviation <= RATE_TOL and RATE_HALVING[0] <= ratio <= RATE_HALVING[1]
    elapsed = time.perf_counter() - t0
    report(4, "rate n/phi^n(0) -> mean, deviation halves when n doubles", ok, elapsed,
           RATE_BUDGET, f"dev(1e4) {full.deviation:.4g} (tol {RATE_TOL:g}), "
           f"dev(1e4)/dev(5e3) {ratio:.3f} (want {RATE_HALVING[0]:.1f}..{RATE_HALVING[1]:.1f})")


def test_criterion_05_displacement_bound():
    t0 = time.perf_counter()
    f = quasiperiodic()
    delta = certified_lower_bound(f)
    psi = FiringEngine(f).psi(np.linspace(0.0, 100.0, 1000))
    bound = 1.0 / 0.6 + DISPLACEMENT_SLACK
    ok = abs(delta - 0.6) < 1e-12 and float(psi.min()) > 0 and float(psi.max()) < bound
    elapsed = time.perf_counter() - t0
    report(5, "0 < psi < 1/delta with delta = 0.6", ok, elapsed, DISPLACEMENT_BUDGET,
           f"psi in [{psi.min():.4f}, {psi.max():.4f}], bound {bound:.6f}")


def test_criterion_06_stepanov_to_uniform_displacement():
    t0 = time.perf_counter()
    rep = verify_displacement_theorem(FiringEngine(quasiperiodic()), THEOREM_EPS, (0.0, 200.0),
                                      1e-2, Window(0.0, 50.0, 0.1), refine=True)
    near = rep.candidates[np.abs(rep.candidates - THEOREM_NEAR) < THEOREM_NEAR_TOL]
    ok = len(rep.candidates) > 0 and len(near) > 0 and len(rep.violations) == 0
    elapsed = time.perf_counter() - t0
    worst = float(np.max(rep.max_displacement_deviation)) if len(rep.candidates) else math.nan
    report(6, "Stepanov almost periods of f are almost periods of psi", ok, elapsed,
           THEOREM_BUDGET, f"{len(rep.candidates)} candidates, {len(near)} near "
           f"{THEOREM_NEAR}, {len(rep.violations)} violations, worst |dpsi| {worst:.3f} "
           f"< {THEOREM_EPS}")


def test_criterion_07_limit_periodic_approximation():
    t0 = time.perf_counter()
    terms = [(0.3 * 2.0**-k, 0.0, 2.0**-k) for k in range(1, 9)]
    f = TrigPolynomial.from_terms(1.0, terms)
    ft = TrigPolynomial.from_terms(1.0, terms[:6])
    rep = compare_with_periodic_approximant(FiringEngine(f), FiringEngine(ft), APPROX_EPS,
                                            Window(0.0, 100.0, 0.1))
    bound = APPROX_DELTA**2 * APPROX_EPS / 4.0
    ok = rep.delta >= APPROX_DELTA and rep.sup_stimulus_distance < bound \
        and rep.sup_phi_distance < APPROX_EPS
    elapsed = time.perf_counter() - t0
    report(7, "truncated limit-periodic stimulus moves phi by < eps", ok, elapsed,
           APPROX_BUDGET, f"||f - f~|| {rep.sup_stimulus_distance:.5f} < {bound:.5f}, "
           f"sup|phi - phi~| {rep.sup_phi_distance:.5f} < {APPROX_EPS}")


def test_criterion_08_rate_convergence():
    t0 = time.perf_counter()
    ks = range(1, 9)
    fs = [TrigPolynomial.from_terms(1.0 + 2.0**-k, [(0.0, 0.2, 1.0)]) for k in ks]
    rates = [r.empirical_rate for r in rate_sequence(fs, 0.0, CONVERGENCE_N)]
    errs = [abs(r - (1.0 + 2.0**-k)) for r, k in zip(rates, ks)]
    gaps = [abs(r - 1.0) for r in rates]
    monotone = all(b <= a + CONVERGENCE_TOL for a, b in zip(gaps, gaps[1:]))
    ok = max(errs) <= CONVERGENCE_TOL and monotone
    elapsed = time.perf_counter() - t0
    report(8, "rates of (1 + 2^-k) + 0.2 sin t converge to 1", ok, elapsed, CONVERGENCE_BUDGET,
           f"max |r_k - mean_k| {max(errs):.3g}, |r_k - 1| = "
           + ", ".join(f"{g:.4f}" for g in gaps))


def test_criterion_09_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    cfg = OracleConfig()
    worst = 0.0
    families = {}
    for _ in range(100):
        f = random_stimulus(rng)
        start = float(rng.uniform(-5, 5))
        families[type(f).__name__] = families.get(type(f).__name__, 0) + 1
        gap = abs(FiringEngine(f).phi(start) - brute_first_crossing(f, start, 1.0, cfg))
        worst = max(worst, gap)
    elapsed = time.perf_counter() - t0
    report(9, "engine matches brute-force crossing on 100 random stimuli", worst <= ORACLE_TOL,
           elapsed, ORACLE_BUDGET, f"max |phi - oracle| {worst:.3g} (tol {ORACLE_TOL:g}), "
           f"mix {families}")


def test_criterion_10_undefined_inputs(tmp_path):
    import io
    import json
    from contextlib import redirect_stderr, redirect_stdout

    t0 = time.perf_counter()
    verdicts, codes = [], []
    for c0 in (0.0, -0.5):
        f = TrigPolynomial.from_terms(c0, [(0.0, 1.0, SQRT2), (0.0, 1.0, 2.0)])
        verdicts.append(check_well_defined(f))
        path = tmp_path / f"c0_{c0}.json"
        path.write_text(json.dumps({"type": "trig", "c0": c0, "terms": [
            {"a": 0, "b": 1, "lambda": SQRT2}, {"a": 0, "b": 1, "lambda": 2.0}]}))
        with redirect_stdout(io.StringIO()), redirect_stderr(io.StringIO()):
            codes.append(cli_run(["check", str(path)]))
    zero = PiecewiseConstant.periodic([0.0, 0.4, 1.0], [0.0, 0.0])
    verdicts.append(check_well_defined(zero))
    ok = all(v is Verdict.UNDEFINED for v in verdicts) and codes == [3, 3]
    elapsed = time.perf_counter() - t0
    report(10, "undefined inputs are rejected (verdict and CLI exit 3)", ok, elapsed,
           UNDEFINED_BUDGET, f"verdicts {[v.value for v in verdicts]}, exit codes {codes}")


def _plateau_stimulus(rng):
    m = int(rng.integers(2, 6))
    vals = rng.uniform(0.2, 2.0, size=m)
    vals[rng.choice(m, size=int(rng.integers(1, m)), replace=False)] = 0.0
    bp = np.concatenate([[0.0], np.sort(rng.uniform(0.0, 3.0, size=m - 1)), [3.0]])
    if np.any(np.diff(bp) <= 1e-3):
        bp = np.linspace(0.0, 3.0, m + 1)
    return PiecewiseConstant.periodic(bp + rng.uniform(-1, 1), vals)


def test_criterion_11_monotonicity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    strict_ok = weak_ok = True
    for _ in range(50):
        f = random_stimulus(rng)
        assert certified_lower_bound(f) > 0
        lo = float(rng.uniform(-20, 10))
        grid = np.linspace(lo, lo + float(rng.uniform(1, 20)), 100)
        strict_ok &= bool(np.all(np.diff(FiringEngine(f).phi(grid)) > 0))
    n_plateau = 0
    for _ in range(50):
        f = _plateau_stimulus(rng)
        assert certified_lower_bound(f) == 0.0
        lo = float(rng.uniform(-20, 10))
        grid = np.linspace(lo, lo + float(rng.uniform(1, 20)), 100)
        phi = FiringEngine(f).phi(grid)
        n_plateau += int(np.sum(np.diff(phi) == 0))
        weak_ok &= bool(np.all(np.diff(phi) >= 0))
    elapsed = time.perf_counter() - t0
    report(11, "phi strictly increasing for delta > 0, non-decreasing with plateaus",
           strict_ok and weak_ok, elapsed, MONOTONE_BUDGET,
           f"strict {strict_ok}, non-decreasing {weak_ok}, flat steps seen {n_plateau}")


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
