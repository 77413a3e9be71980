"""Scans for epsilon-almost periods of stimuli and of the displacement map.

Every scan works on a finite shift grid ``tau_lo, tau_lo + tau_step, ...``
and a finite window of ``t`` values, so results are statements about that
window, not about the whole real line. Grid local minima of the metric
below ``2 * epsilon`` are polished with a golden-section search inside one
step so that narrow accepted intervals are not lost to gridding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .firing import FiringEngine
from .stimulus import (
    Stimulus,
    Window,
    _sample_points,
    _stepanov_step,
    certified_lower_bound,
    stepanov_profile,
    sup_distance,
)

__all__ = [
    "AlmostPeriodScan",
    "ApVerificationReport",
    "ApproximationReport",
    "CannotCertifyPositivity",
    "scan_sup_almost_periods",
    "scan_stepanov_almost_periods",
    "scan_displacement_almost_periods",
    "verify_displacement_theorem",
    "compare_with_periodic_approximant",
    "sequence_almost_periods",
    "relative_density_gap",
    "sup_shift_distance",
    "displacement_shift_distance",
]

REFINE_FACTOR = 2.0
GOLDEN_ITERATIONS = 30
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


class CannotCertifyPositivity(ValueError):
    """The stimulus has no certified positive lower bound."""


@dataclass(frozen=True)
class AlmostPeriodScan:
    """Accepted shifts of one scan plus the metric at every evaluated shift.

    ``max_gap`` is the longest stretch of ``[tau_lo, tau_hi]`` without an
    accepted shift (range endpoints included), an empirical stand-in for
    the inclusion length ``l_eps``.
    """

    kind: str
    epsilon: float
    tau_range: tuple
    tau_step: float
    taus: np.ndarray
    metrics: np.ndarray
    accepted: np.ndarray
    max_gap: float
    window: Window | None = None

    def accepts(self, tau: float, atol: float = 1e-12) -> bool:
        return bool(np.any(np.abs(self.accepted - tau) <= atol))


@dataclass(frozen=True)
class ApVerificationReport:
    delta: float
    epsilon: float
    stepanov_threshold: float
    candidates: np.ndarray
    violations: np.ndarray
    max_displacement_deviation: np.ndarray
    window: Window | None = None
    tau_range: tuple = ()
    tau_step: float = math.nan

    @property
    def status(self) -> str:
        if len(self.violations):
            return "fail"
        if not len(self.candidates):
            return "inconclusive"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass(frozen=True)
class ApproximationReport:
    sup_stimulus_distance: float
    required_bound: float
    sup_phi_distance: float
    epsilon: float
    delta: float
    window: Window | None = None

    @property
    def precondition_met(self) -> bool:
        return self.sup_stimulus_distance < self.required_bound

    @property
    def passed(self) -> bool:
        return (not self.precondition_met) or self.sup_phi_distance < self.epsilon


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------


def sup_shift_distance(f: Stimulus, tau: float, w: Window) -> float:
    """``max |f(t + tau) - f(t)|`` over the window grid and all jump points."""
    pts = _sample_points([f], w, shift=tau)
    return float(np.max(np.abs(np.asarray(f.evaluate(pts + tau)) - np.asarray(f.evaluate(pts)))))


def displacement_shift_distance(e: FiringEngine, tau: float, w: Window,
                                base: np.ndarray | None = None) -> float:
    """``max |psi(t + tau) - psi(t)|`` over the window grid."""
    grid = w.grid()
    if base is None:
        base = e.phi(grid) - grid
    shifted = e.phi(grid + tau) - (grid + tau)
    return float(np.max(np.abs(shifted - base)))


def _stepanov_lower_bounds(f: Stimulus, taus: np.ndarray, w: Window) -> np.ndarray:
    """Cheap certified lower bounds of the windowed Stepanov distance.

    For any partition ``p_j`` of ``[t, t+1]``, ``sum |D(p_{j+1}) - D(p_j)|``
    never exceeds ``int |d|``; a coarse shared partition is used here.
    """
    ts = w.grid()
    h = max(0.02, _stepanov_step(f))
    n_cells = int(math.ceil((w.hi + 1.0 - w.lo) / h))
    nodes = np.unique(np.concatenate([
        w.lo + (w.hi + 1.0 - w.lo) * np.arange(n_cells + 1) / n_cells, ts, ts + 1.0]))
    i0 = np.searchsorted(nodes, ts)
    i1 = np.searchsorted(nodes, ts + 1.0)
    F_nodes = np.asarray(f.antiderivative(nodes))
    out = np.empty(len(taus))
    for k, tau in enumerate(taus):
        D = np.asarray(f.antiderivative(nodes + tau)) - F_nodes
        cum = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(D)))])
        out[k] = np.max(cum[i1] - cum[i0])
    return out


# ---------------------------------------------------------------------------
# generic scan
# ---------------------------------------------------------------------------


def _tau_grid(tau_range, tau_step: float) -> np.ndarray:
    lo, hi = map(float, tau_range)
    if not hi >= lo:
        raise ValueError("tau_range needs lo <= hi")
    if not tau_step > 0:
        raise ValueError("tau_step must be positive")
    n = int(math.floor((hi - lo) / tau_step + 1e-9))
    return lo + tau_step * np.arange(n + 1)


def _golden_min(fun: Callable[[float], float], a: float, b: float,
                iterations: int = GOLDEN_ITERATIONS):
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(iterations):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fun(d)
    return (c, fc) if fc <= fd else (d, fd)


def _max_gap(accepted: np.ndarray, lo: float, hi: float) -> float:
    if not len(accepted):
        return hi - lo
    pts = np.concatenate([[lo], accepted, [hi]])
    return float(np.max(np.diff(pts)))


def _scan(kind: str, metric_many: Callable[[np.ndarray], np.ndarray],
          metric_one: Callable[[float], float], epsilon: float, tau_range, tau_step: float,
          w: Window | None, refine: bool = True) -> AlmostPeriodScan:
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    taus = _tau_grid(tau_range, tau_step)
    lo, hi = float(tau_range[0]), float(tau_range[1])
    metrics = np.asarray(metric_many(taus), dtype=float)
    ok = metrics < epsilon
    extra_t, extra_m = [], []
    if refine and len(taus) > 1:
        # Polishing does not depend on whether the grid point itself passed,
        # which keeps accepted sets nested as epsilon grows. Inside a run of
        # tied values only the run ends are polished.
        left = np.concatenate([[np.inf], metrics[:-1]])
        right = np.concatenate([metrics[1:], [np.inf]])
        local_min = (metrics <= left) & (metrics <= right) & ((metrics < left) | (metrics < right))
        near = np.nonzero(local_min & (metrics > 0) & (metrics < REFINE_FACTOR * epsilon))[0]
        for i in near:
            a = max(lo, taus[i] - tau_step)
            b = min(hi, taus[i] + tau_step)
            t_star, m_star = _golden_min(metric_one, a, b)
            extra_t.append(t_star)
            extra_m.append(m_star)
    extra_t = np.asarray(extra_t, dtype=float)
    extra_m = np.asarray(extra_m, dtype=float)
    accepted = np.unique(np.concatenate([taus[ok], extra_t[extra_m < epsilon]]))
    all_t = np.concatenate([taus, extra_t])
    all_m = np.concatenate([metrics, extra_m])
    order = np.argsort(all_t, kind="stable")
    return AlmostPeriodScan(kind, float(epsilon), (lo, hi), float(tau_step), all_t[order],
                            all_m[order], accepted, _max_gap(accepted, lo, hi), w)


# ---------------------------------------------------------------------------
# public scans
# ---------------------------------------------------------------------------


def scan_sup_almost_periods(f: Stimulus, epsilon: float, tau_range, tau_step: float,
                            w: Window, refine: bool = True) -> AlmostPeriodScan:
    """Shifts with ``max |f(t + tau) - f(t)| < epsilon`` on the window."""
    def one(tau):
        return sup_shift_distance(f, tau, w)

    return _scan("stimulus-sup", lambda ts: np.array([one(t) for t in ts]), one,
                 epsilon, tau_range, tau_step, w, refine)


def scan_stepanov_almost_periods(f: Stimulus, epsilon: float, tau_range, tau_step: float,
                                 w: Window, refine: bool = True) -> AlmostPeriodScan:
    """Shifts with ``max_t int_t^{t+1} |f(u + tau) - f(u)| du < epsilon``.

    Shifts whose certified coarse lower bound already reaches
    ``REFINE_FACTOR * epsilon`` are recorded with that bound as metric
    instead of the full value; they are rejected and never refined.
    """
    def one(tau):
        return 0.0 if tau == 0.0 else float(np.max(stepanov_profile(f, tau, w)))

    def many(taus):
        bounds = _stepanov_lower_bounds(f, taus, w)
        out = bounds.copy()
        for k in np.nonzero(bounds < REFINE_FACTOR * epsilon)[0]:
            out[k] = one(taus[k])
        return out

    return _scan("stimulus-stepanov", many, one, epsilon, tau_range, tau_step, w, refine)


def scan_displacement_almost_periods(e: FiringEngine, epsilon: float, tau_range,
                                     tau_step: float, w: Window,
                                     refine: bool = True) -> AlmostPeriodScan:
    """Shifts with ``max |psi(t + tau) - psi(t)| < epsilon`` on the window grid."""
    grid = w.grid()
    base = e.phi(grid) - grid

    def one(tau):
        return displacement_shift_distance(e, tau, w, base)

    def many(taus):
        lattice = _displacement_lattice(e, grid, taus, tau_step)
        if lattice is None:
            return np.array([one(t) for t in taus])
        psi, ratio = lattice
        idx = ratio * np.arange(len(grid))
        return np.array([np.max(np.abs(psi[idx + j] - base)) for j in range(len(taus))])

    return _scan("displacement", many, one, epsilon, tau_range, tau_step, w, refine)


def _displacement_lattice(e: FiringEngine, grid: np.ndarray, taus: np.ndarray, tau_step: float):
    """Evaluate psi once on the lattice ``grid[0] + taus[0] + k * tau_step``.

    Only possible when the window step is an integer multiple of the shift
    step; returns None otherwise.
    """
    if len(grid) < 2:
        return None
    ratio = (grid[1] - grid[0]) / tau_step
    r = int(round(ratio))
    if r < 1 or abs(ratio - r) > 1e-9 * max(1.0, ratio):
        return None
    n = (len(grid) - 1) * r + len(taus)
    pts = grid[0] + taus[0] + tau_step * np.arange(n)
    psi = np.empty(n)
    chunk = 1 << 14
    for s in range(0, n, chunk):
        p = pts[s:s + chunk]
        psi[s:s + chunk] = e.phi(p) - p
    return psi, r


def verify_displacement_theorem(e: FiringEngine, epsilon: float, tau_range, tau_step: float,
                                w: Window, refine: bool = True) -> ApVerificationReport:
    """Check that Stepanov ``delta^2 eps / 2``-almost periods of ``f`` are
    ``eps``-almost periods of the displacement map.

    ``delta`` is the certified lower bound of the stimulus. The report
    passes when at least one candidate exists and none violates the
    displacement criterion; no candidates gives ``"inconclusive"``.
    """
    delta = certified_lower_bound(e.stimulus)
    if not delta > 0:
        raise CannotCertifyPositivity(
            f"certified lower bound is {delta:g}; the displacement theorem needs f > delta > 0")
    threshold = delta * delta * epsilon / 2.0
    scan = scan_stepanov_almost_periods(e.stimulus, threshold, tau_range, tau_step, w, refine)
    candidates = scan.accepted
    grid = w.grid()
    base = e.phi(grid) - grid
    dev = np.array([displacement_shift_distance(e, tau, w, base) for tau in candidates])
    violations = candidates[dev >= epsilon] if len(candidates) else np.empty(0)
    return ApVerificationReport(delta, float(epsilon), threshold, candidates, violations,
                                dev if len(candidates) else np.empty(0), w,
                                (float(tau_range[0]), float(tau_range[1])), float(tau_step))


def compare_with_periodic_approximant(e_f: FiringEngine, e_ftilde: FiringEngine, epsilon: float,
                                      w: Window) -> ApproximationReport:
    """Compare firing maps of ``f`` and an approximant ``f~``.

    If ``||f - f~|| < delta^2 eps / 4`` on the window, the firing maps
    should differ by less than ``eps`` on the window grid.
    """
    delta = certified_lower_bound(e_f.stimulus)
    if not delta > 0:
        raise CannotCertifyPositivity(f"certified lower bound is {delta:g}")
    dist = sup_distance(e_f.stimulus, e_ftilde.stimulus, w)
    grid = w.grid()
    phi_dist = float(np.max(np.abs(e_f.phi(grid) - e_ftilde.phi(grid))))
    return ApproximationReport(dist, delta * delta * epsilon / 4.0, phi_dist, float(epsilon),
                               delta, w)


def sequence_almost_periods(eta, epsilon: float, k_range, tail_offset: int = 0) -> list[int]:
    """Integer shifts ``k`` with ``max_n |eta[n + k] - eta[n]| < epsilon``.

    ``k_range`` is an inclusive ``(k_lo, k_hi)`` pair. The first
    ``tail_offset`` terms are ignored; this is plain almost periodicity of
    the tail, not a formal notion of asymptotic almost periodicity.
    """
    eta = np.asarray(eta, dtype=float)[tail_offset:]
    k_lo, k_hi = int(k_range[0]), int(k_range[1])
    if k_lo < 0 or k_hi < k_lo:
        raise ValueError("k_range must satisfy 0 <= k_lo <= k_hi")
    if len(eta) < 2 * max(k_hi, 1):
        raise ValueError(f"need at least {2 * max(k_hi, 1)} terms after the offset, "
                         f"got {len(eta)}")
    out = []
    for k in range(k_lo, k_hi + 1):
        diff = np.abs(eta[k:] - eta[:len(eta) - k])
        if np.max(diff) < epsilon:
            out.append(k)
    return out


def relative_density_gap(scan: AlmostPeriodScan) -> float:
    """Largest gap between accepted shifts, range endpoints included."""
    return scan.max_gap
