"""The long-run firing rate equals the mean of the drive.

For the quasiperiodic input ``1 + 0.2 sin t + 0.2 sin(sqrt(2) t)`` the
running rate ``n / phi^n(0)`` approaches the mean 1. The error is bounded by
the oscillation of the integral divided by the elapsed time, so it shrinks
at least like 1/n (in practice it wobbles rather than halving cleanly).
A stimulus whose mean is zero never fires for good and is rejected.
"""
from _common import banner, stimulus
from firingmap import FiringEngine, TrigPolynomial, check_well_defined, rate_sequence

e = FiringEngine(stimulus("quasiperiodic"))
banner("running rate, quasiperiodic drive")
for n in (10, 100, 1_000, 10_000):
    r = e.firing_rate(0.0, n)
    print(f"n = {n:>6}: rate = {r.empirical_rate:.8f}  |rate - mean| = {r.deviation:.3e}")

banner("rates follow the mean as it decreases to 1")
fs = [TrigPolynomial.from_terms(1.0 + 2.0**-k, [(0.0, 0.2, 1.0)]) for k in range(1, 7)]
for k, r in enumerate(rate_sequence(fs, 0.0, 2_000), start=1):
    print(f"k = {k}: mean {r.mean_rate:.6f}  rate {r.empirical_rate:.6f}")

banner("zero-mean input")
print("verdict:", check_well_defined(stimulus("zero_mean")).value)
