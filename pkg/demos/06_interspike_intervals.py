"""Interspike intervals inherit the almost periodicity of the drive.

For the periodic input every shift by k spikes reproduces the interval
sequence exactly. The quasiperiodic input only has approximate index
shifts, near the spike counts matching its almost periods (such as 31
and 44 time units at rate 1), and fewer of them survive as epsilon shrinks.
"""
from _common import banner, stimulus
from firingmap import FiringEngine, sequence_almost_periods

for name in ("sine_2pi", "quasiperiodic"):
    eta = FiringEngine(stimulus(name)).spike_train(0.0, 600).intervals()
    banner(name)
    for eps in (1e-6, 0.05, 0.1, 0.2):
        ks = sequence_almost_periods(eta, eps, (1, 200))
        print(f"eps = {eps:g}: {len(ks)} index shifts, first few {ks[:8]}")
