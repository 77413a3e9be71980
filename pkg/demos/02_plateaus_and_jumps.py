"""Silent stretches of input make the firing map jump.

With the square wave equal to 2 on [0, 0.5) and 0 on [0.5, 1), every start
inside a silent half-period fires at the same moment. Approached from the
left, the map tends to the value at 0; just after 0 it has already moved
past the next plateau. Both one-sided limits are listed by the report.
"""
from _common import banner, stimulus
from firingmap import FiringEngine, Window, check_well_defined, discontinuities

f = stimulus("square_wave")
e = FiringEngine(f)
print("verdict:", check_well_defined(f).value)

banner("a few values")
for t in (-0.3, -0.1, 0.0, 0.25, 0.5, 0.75):
    print(f"phi({t:+.2f}) = {e.phi(t):.6f}")

banner("probing the jump at 0")
for k in (2, 4, 6, 8):
    h = 10.0**-k
    print(f"h = 1e-{k}:  phi(-h) = {e.phi(-h):.9f}   phi(+h) = {e.phi(h):.9f}")

banner("discontinuities on [0, 2]")
for d in discontinuities(e, Window(0.0, 2.0, 0.1)):
    print(f"abar = {d.abar:g}  lands at a = {d.a:g}  jump = {d.jump:g}  plateau = {d.plateau_length:g}")
