"""Firing times of a perfect integrator under simple drives.

A unit-threshold integrator fires whenever the integral of its input, taken
from the last reset, reaches one. For a constant drive ``c`` the cell fires
every ``1/c`` time units. For ``1 + 0.5 sin(2 pi t)`` the input averages to
one over each unit interval, so it fires at every integer once started at 0.
"""
import numpy as np

from _common import banner, stimulus
from firingmap import FiringEngine

banner("constant drive f = 2")
e = FiringEngine(stimulus("constant2"))
train = e.spike_train(0.0, 5)
print("spike times     ", train.times)
print("intervals       ", train.intervals())

banner("f = 1 + 0.5 sin(2 pi t)")
e = FiringEngine(stimulus("sine_2pi"))
train = e.spike_train(0.0, 5)
print("spike times     ", np.round(train.times, 12))
print("max residual    ", train.residuals.max())

# Phi commutes with the unit shift, so the displacement psi is 1-periodic.
t = np.linspace(0.0, 3.0, 7)
print("psi(t)          ", np.round(e.psi(t), 6))
print("psi(t + 1)      ", np.round(e.psi(t + 1.0), 6))
