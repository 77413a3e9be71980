"""Almost periods of the drive carry over to the displacement.

A quasiperiodic input has no exact period, but shifts close to a common
near-multiple of 2 pi and 2 pi / sqrt(2) reproduce it closely; 182.21 is
such a shift. We scan for shifts that keep the input within a mean-square
tolerance, then check that the same shifts keep the displacement
``psi = phi - t`` within the advertised epsilon.
"""
import numpy as np

from _common import banner, stimulus
from firingmap import FiringEngine, Window, scan_sup_almost_periods, verify_displacement_theorem

f = stimulus("quasiperiodic")
w = Window(0.0, 50.0, 0.1)

banner("uniform almost periods of f (eps = 0.1) in [0, 200]")
scan = scan_sup_almost_periods(f, 0.1, (0.0, 200.0), 0.01, w)
clusters = np.split(scan.accepted, np.where(np.diff(scan.accepted) > 0.5)[0] + 1)
print("accepted clusters:", [f"{c.min():.2f}..{c.max():.2f}" for c in clusters if len(c)])

banner("transfer to the displacement (eps = 0.25)")
rep = verify_displacement_theorem(FiringEngine(f), 0.25, (0.0, 200.0), 0.01, w)
print("lower bound delta      ", rep.delta)
print("Stepanov threshold     ", rep.stepanov_threshold)
print("candidate shifts       ", len(rep.candidates))
print("worst psi deviation    ", float(np.max(rep.max_displacement_deviation)))
print("violations             ", len(rep.violations), "->", rep.status)
