"""Firing map of the perfect integrator ``x' = f(t)`` with reset 0 and threshold 1.

The firing map ``phi(t)`` is the first time ``s > t`` at which
``F(s) - F(t)`` reaches 1, with ``F`` the closed-form antiderivative of the
stimulus. Crossings are located by a certified march: from a point ``a``
with ``G(a) = F(a) - target < 0`` the next step is one that provably cannot
jump over a crossing, using

* the global bound ``|f| <= B`` (step ``-G(a)/B``),
* for trigonometric parts, ``f(u) <= f(a) + B1 (u - a)`` with ``B1 >= |f'|``,
* for step-function parts, the exact linear growth up to the next breakpoint.

The march stops once the admissible step drops below ``root_tolerance``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .stimulus import (
    Stimulus,
    Window,
    certified_lower_bound,
    is_piecewise_constant,
    is_trigonometric,
    mean,
    sup_bound,
)

__all__ = [
    "Verdict",
    "FiringEngine",
    "SpikeTrain",
    "DisplacementProfile",
    "RateEstimate",
    "Discontinuity",
    "DiscontinuityReport",
    "NoFiringWithinHorizon",
    "UndefinedFiringMap",
    "UnsupportedStimulus",
    "check_well_defined",
    "discontinuities",
    "rate_sequence",
]

DEFAULT_ROOT_TOLERANCE = 1e-10
DEFAULT_SEARCH_HORIZON = 1e6


class NoFiringWithinHorizon(RuntimeError):
    """No threshold crossing was found within the search horizon."""

    def __init__(self, message: str, start: float = math.nan, horizon: float = math.nan):
        self.start = start
        self.horizon = horizon
        super().__init__(message)


class UndefinedFiringMap(ValueError):
    """The stimulus does not produce a firing map defined on the whole line."""

    def __init__(self, message: str, verdict: "Verdict"):
        self.verdict = verdict
        super().__init__(message)


class UnsupportedStimulus(ValueError):
    """The requested analysis is not available for this representation."""


class Verdict(str, enum.Enum):
    DEFINED = "Defined"
    UNDEFINED = "Undefined"
    UNKNOWN = "Unknown"


def check_well_defined(f: Stimulus) -> Verdict:
    """Decide whether ``limsup_{t->inf} F(t) = inf`` for a supported stimulus.

    * positive mean: ``Defined``;
    * trigonometric polynomial with ``c0 <= 0``: ``Undefined`` (the
      antiderivative is ``c0 t`` plus a bounded function);
    * negative mean: ``Undefined`` (``F(t) ~ mean * t``);
    * certified nonnegative with zero mean: ``Undefined`` (such a function
      vanishes almost everywhere);
    * otherwise ``Unknown``.
    """
    m = mean(f)
    if is_trigonometric(f):
        return Verdict.DEFINED if m > 0 else Verdict.UNDEFINED
    # means of step functions carry rounding from the period average
    scale = 1e-12 * max(1.0, sup_bound(f))
    if m > scale:
        return Verdict.DEFINED
    if m < -scale:
        return Verdict.UNDEFINED
    if certified_lower_bound(f) >= 0:
        return Verdict.UNDEFINED
    return Verdict.UNKNOWN


@dataclass(frozen=True)
class SpikeTrain:
    """Firing times ``phi^1(t0) < ... < phi^N(t0)`` with residual certificates.

    ``residuals[k]`` is ``|F(times[k]) - F(start) - (k + 1)|``. ``truncated``
    is set when the horizon was hit before ``requested`` spikes were found.
    """

    start: float
    times: np.ndarray
    residuals: np.ndarray
    requested: int
    truncated: bool = False

    def __len__(self) -> int:
        return len(self.times)

    def intervals(self) -> np.ndarray:
        """Interspike intervals ``eta_n = phi^n(t0) - phi^(n-1)(t0)``."""
        return np.diff(np.concatenate([[self.start], self.times]))


@dataclass(frozen=True)
class DisplacementProfile:
    grid: np.ndarray
    values: np.ndarray
    window: Window | None = None


@dataclass(frozen=True)
class RateEstimate:
    n: int
    start: float
    phi_n: float
    empirical_rate: float
    mean_rate: float
    deviation: float


@dataclass(frozen=True)
class Discontinuity:
    abar: float
    a: float
    jump: float
    plateau_length: float


@dataclass(frozen=True)
class DiscontinuityReport:
    entries: tuple = ()
    window: Window | None = None

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class FiringEngine:
    """Stimulus plus numerical settings; answers firing-map queries.

    Construction checks well-definedness. An ``Unknown`` verdict is only
    accepted with ``allow_unknown=True``, in which case queries may raise
    :class:`NoFiringWithinHorizon`.

    Parameters
    ----------
    stimulus : Stimulus
    root_tolerance : float
        Step size below which the march stops; residuals satisfy
        ``|F(s) - F(t) - n| <= root_tolerance * (1 + B)``.
    search_horizon : float
        Maximum elapsed time searched past the start point.
    allow_unknown : bool
        Accept stimuli whose well-definedness cannot be decided.
    """

    stimulus: Stimulus
    root_tolerance: float = DEFAULT_ROOT_TOLERANCE
    search_horizon: float = DEFAULT_SEARCH_HORIZON
    allow_unknown: bool = False
    verdict: Verdict = field(init=False)
    crossing_march_bound: float = field(init=False)

    def __post_init__(self):
        if not self.root_tolerance > 0:
            raise ValueError("root_tolerance must be positive")
        if not self.search_horizon > 0:
            raise ValueError("search_horizon must be positive")
        verdict = check_well_defined(self.stimulus)
        if verdict is Verdict.UNDEFINED:
            raise UndefinedFiringMap(
                "firing map is undefined: limsup of the integral of f is not infinite "
                f"(mean {mean(self.stimulus):.6g})", verdict)
        if verdict is Verdict.UNKNOWN and not self.allow_unknown:
            raise UndefinedFiringMap(
                "cannot decide whether the firing map is defined; "
                "pass allow_unknown=True to search within the horizon", verdict)
        object.__setattr__(self, "verdict", verdict)
        B = sup_bound(self.stimulus)
        object.__setattr__(self, "crossing_march_bound", B if B > 0 else 1.0)
        object.__setattr__(self, "_slope_bound", self.stimulus.derivative_bound())
        object.__setattr__(self, "_has_breaks", not is_trigonometric(self.stimulus))

    @property
    def residual_tolerance(self) -> float:
        return self.root_tolerance * (1.0 + self.crossing_march_bound)

    # -- core ---------------------------------------------------------------

    def first_crossing(self, starts, targets, origins=None) -> np.ndarray:
        """First ``s >= starts`` with ``F(s) >= targets``, elementwise.

        Requires ``F(starts) < targets``. Raises
        :class:`NoFiringWithinHorizon` if a search runs more than
        ``search_horizon`` past its origin (default: its start).
        """
        starts = np.atleast_1d(np.asarray(starts, dtype=float))
        targets = np.broadcast_to(np.asarray(targets, dtype=float), starts.shape)
        origins = starts if origins is None else np.broadcast_to(
            np.asarray(origins, dtype=float), starts.shape)
        F = self.stimulus.antiderivative
        f = self.stimulus.evaluate
        B = self.crossing_march_bound
        B1 = self._slope_bound
        tol = self.root_tolerance
        out = np.full(starts.shape, np.nan)
        active = np.arange(starts.size)
        a = starts.copy()
        while active.size:
            aa = a[active]
            tg = targets[active]
            g = F(aa) - tg
            hit = g >= 0
            if hit.any():
                out[active[hit]] = aa[hit]
                keep = ~hit
                active, aa, tg, g = active[keep], aa[keep], tg[keep], g[keep]
                if not active.size:
                    break
            fa = f(aa)
            h_glob = -g / B
            if B1 > 0:
                # first root of g + fa*h + B1*h^2/2, in cancellation-free form
                h_loc = -2.0 * g / (fa + np.sqrt(fa * fa - 2.0 * B1 * g))
            else:
                with np.errstate(divide="ignore"):
                    h_loc = np.where(fa > 0, -g / np.where(fa > 0, fa, 1.0), np.inf)
            h_free = np.maximum(h_glob, h_loc)
            small = h_free < tol
            if small.any():
                # within one tolerance of the level: resolve by linear
                # interpolation, or report a tangential touch at aa
                sa, sg, st = aa[small], g[small], tg[small]
                b = sa + tol
                snap = np.zeros(sa.shape, dtype=bool)
                if self._has_breaks:
                    # a breakpoint inside the last step is the answer itself;
                    # starts firing at the same plateau edge then agree exactly
                    nb = np.asarray(self.stimulus.next_breakpoint(sa), dtype=float)
                    snap = nb <= b
                    b = np.where(snap, nb, b)
                gb = F(b) - st
                crossed = gb >= 0
                denom = np.where(crossed, gb - sg, 1.0)
                interp = np.where(snap, b, sa + (-sg) * (b - sa) / denom)
                out[active[small]] = np.where(crossed, interp, sa)
                keep = ~small
                active, aa, g, fa = active[keep], aa[keep], g[keep], fa[keep]
                h_glob, h_loc = h_glob[keep], h_loc[keep]
                if not active.size:
                    break
            if self._has_breaks:
                nb = np.asarray(self.stimulus.next_breakpoint(aa), dtype=float)
                capped = h_loc >= nb - aa
                step = np.maximum(h_glob, np.where(capped, nb - aa, h_loc))
                # pure step functions walk breakpoint to breakpoint, so every
                # start on the same plateau follows the same path and starts
                # with equal F get bit-identical answers
                to_nb = capped & ((h_glob < nb - aa) | (B1 == 0))
                new = np.where(to_nb, nb, aa + step)
            else:
                new = aa + np.maximum(h_glob, h_loc)
            stalled = new <= aa
            if stalled.any():
                new = np.where(stalled, np.nextafter(aa, np.inf), new)
            over = new - origins[active] > self.search_horizon
            if over.any():
                i = active[np.argmax(over)]
                raise NoFiringWithinHorizon(
                    f"no threshold crossing within {self.search_horizon:g} time units "
                    f"after t = {origins[i]:.17g}", float(origins[i]), self.search_horizon)
            a[active] = new
        return out

    # -- firing map ---------------------------------------------------------

    def _skip_zero_runs(self, t: np.ndarray, max_segments: int = 64) -> np.ndarray:
        # F is flat where a step function vanishes, so a start there may move
        # to the end of the zero run. All starts on one plateau then share a
        # start and a target, and their answers agree to the bit.
        if not (self._has_breaks and self._slope_bound == 0):
            return t
        t = t.copy()
        for _ in range(max_segments):
            zero = np.asarray(self.stimulus.evaluate(t)) == 0
            if not zero.any():
                break
            nb = np.asarray(self.stimulus.next_breakpoint(t[zero]), dtype=float)
            t[zero] = np.where(np.isfinite(nb), nb, t[zero])
            if not np.isfinite(nb).any():
                break
        return t

    def phi(self, t):
        """Firing map ``inf{s > t : F(s) - F(t) = 1}``; scalar or array."""
        return self.phi_n(t, 1)

    def phi_n(self, t, n: int):
        """``n``-th iterate, found as the first crossing of level ``n``."""
        if n < 1:
            raise ValueError("n must be >= 1")
        t_arr = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t_arr).ravel()
        start = self._skip_zero_runs(flat)
        res = self.first_crossing(start, np.asarray(self.stimulus.antiderivative(start)) + n,
                                  flat)
        if t_arr.ndim == 0:
            return float(res[0])
        return res.reshape(t_arr.shape)

    def psi(self, t):
        """Displacement ``phi(t) - t``."""
        if np.ndim(t) == 0:
            return self.phi(t) - float(t)
        return self.phi(t) - np.asarray(t, dtype=float)

    def spike_train(self, t0: float, n: int) -> SpikeTrain:
        """First ``n`` firing times after a reset at ``t0``.

        Each spike ``k`` is the first crossing of level ``F(t0) + k``; the
        search for spike ``k`` starts at spike ``k - 1`` since level ``k``
        cannot be reached earlier. On a horizon failure the partial train is
        returned with ``truncated=True``.
        """
        if n < 1:
            raise ValueError("n must be >= 1")
        F = self.stimulus.antiderivative
        base = F(float(t0))
        times = []
        prev = float(t0)
        truncated = False
        for k in range(1, n + 1):
            target = base + k
            try:
                # horizon counts from t0, not from the previous spike
                s = float(self.first_crossing([prev], [target], [t0])[0])
            except NoFiringWithinHorizon:
                truncated = True
                break
            times.append(s)
            prev = s
        times = np.array(times)
        residuals = np.abs(np.asarray(F(times)) - base - np.arange(1, len(times) + 1)) \
            if len(times) else np.empty(0)
        return SpikeTrain(float(t0), times, residuals, n, truncated)

    def displacement(self, w: Window) -> DisplacementProfile:
        """``psi = phi(t) - t`` on the window grid."""
        grid = w.grid()
        return DisplacementProfile(grid, self.phi(grid) - grid, w)

    def firing_rate(self, t0: float, n: int) -> RateEstimate:
        """Empirical rate ``n / phi^n(t0)`` against the exact mean."""
        s = self.phi_n(float(t0), n)
        emp = n / s
        m = mean(self.stimulus)
        return RateEstimate(n, float(t0), s, emp, m, abs(emp - m))


def rate_sequence(stimuli, t0: float, n: int, **engine_options) -> list[RateEstimate]:
    """One :class:`RateEstimate` per stimulus, all at the same ``t0`` and ``n``."""
    return [FiringEngine(f, **engine_options).firing_rate(t0, n) for f in stimuli]


def discontinuities(e: FiringEngine, w: Window) -> DiscontinuityReport:
    """Right-discontinuities of ``phi`` with ``abar`` in ``[w.lo, w.hi]``.

    Only step-function stimuli with ``f >= 0`` are supported. Every maximal
    zero plateau ``[a, a + d0]`` reached from the window contributes the
    point ``abar = max{t : F(a) - F(t) = 1}``, where ``phi`` jumps from ``a``
    to ``a + d0``.
    """
    f = e.stimulus
    if not is_piecewise_constant(f):
        raise UnsupportedStimulus(
            "discontinuity analysis needs a step-function stimulus; "
            "continuous stimuli with f > 0 give a continuous firing map")
    if certified_lower_bound(f) < 0:
        raise UnsupportedStimulus("discontinuity analysis requires f >= 0")
    F = f.antiderivative
    upper = e.phi(w.hi)
    entries = []
    s = float(w.lo)
    prev_positive = False
    guard = 0
    while s <= upper:
        v = float(f.evaluate(s))
        nb = float(f.next_breakpoint(s))
        if v == 0.0 and prev_positive and s > w.lo:
            a = s
            end = nb
            while float(f.evaluate(end)) == 0.0:
                end = float(f.next_breakpoint(end))
                guard += 1
                if not math.isfinite(end) or guard > 10_000_000:
                    break
            if not math.isfinite(end):
                break
            abar = _last_preimage(e, a, w.lo)
            if abar is not None and w.lo <= abar <= w.hi:
                jump = end - e.phi(abar)
                entries.append(Discontinuity(float(abar), float(a), float(jump), float(end - a)))
            s = end
            prev_positive = True
            continue
        prev_positive = v > 0
        if not math.isfinite(nb):
            break
        s = nb
        guard += 1
        if guard > 10_000_000:
            break
    return DiscontinuityReport(tuple(entries), w)


def _last_preimage(e: FiringEngine, a: float, lo: float):
    """Largest ``t >= lo`` with ``F(t) = F(a) - 1``, or None."""
    f = e.stimulus
    target = f.antiderivative(a) - 1.0
    F_lo = f.antiderivative(lo)
    if F_lo > target:
        return None
    s = lo if F_lo == target else float(e.first_crossing([lo], [target])[0])
    while float(f.evaluate(s)) == 0.0:
        s = float(f.next_breakpoint(s))
    return s
