"""Cross-check the certified root finder against a brute-force oracle.

The oracle integrates the drive on a fine grid and stops at the first grid
point past the threshold, so it is slow but hard to fool. Random positive
drives from every family should agree to within the oracle's grid step.
"""
import numpy as np

from firingmap import FiringEngine, random_stimulus
from firingmap.oracle import OracleConfig, brute_first_crossing

rng = np.random.default_rng(2024)
cfg = OracleConfig()
gaps = []
for _ in range(20):
    f = random_stimulus(rng)
    t0 = float(rng.uniform(-5, 5))
    gaps.append(abs(FiringEngine(f).phi(t0) - brute_first_crossing(f, t0, 1.0, cfg)))
print(f"20 random drives: max |engine - oracle| = {max(gaps):.2e} (grid step {cfg.grid_step:g})")
