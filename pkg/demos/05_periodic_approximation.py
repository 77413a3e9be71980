"""A truncated limit-periodic drive moves the firing map only a little.

The input is 1 plus eight cosines with periods 2 pi 2^k and amplitudes
0.3 * 2^-k. Dropping the two slowest terms leaves a periodic approximant
whose uniform distance from the original is below ``delta^2 eps / 4``; the
firing maps then stay within ``eps`` of each other.
"""
from _common import banner, stimulus
from firingmap import FiringEngine, Window, compare_with_periodic_approximant

f, ft = stimulus("limit_periodic"), stimulus("limit_periodic_k6")
rep = compare_with_periodic_approximant(FiringEngine(f), FiringEngine(ft), 0.04,
                                        Window(0.0, 100.0, 0.1))
banner("limit-periodic vs its 6-term truncation")
print("delta                ", rep.delta)
print("||f - f~||_sup        ", rep.sup_stimulus_distance)
print("precondition bound    ", rep.delta**2 * 0.04 / 4)
print("sup |phi - phi~|      ", rep.sup_phi_distance)
print("passed                ", rep.passed)
