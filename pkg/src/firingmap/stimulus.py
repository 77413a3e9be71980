"""Symbolic stimulus functions with closed-form values and antiderivatives.

Three representations are supported:

* :class:`TrigPolynomial` -- ``c0 + sum_j a_j cos(lam_j t) + b_j sin(lam_j t)``
* :class:`PiecewiseConstant` -- step functions, periodic or with constant tails
* :class:`StimulusSum` -- finite sums of the two above

Every stimulus accepts scalars or numpy arrays in :meth:`evaluate` and
:meth:`antiderivative`. The antiderivative is anchored at zero, i.e.
``F(t) = int_0^t f(u) du``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "TrigPolynomial",
    "PiecewiseConstant",
    "StimulusSum",
    "Stimulus",
    "Window",
    "StimulusParseError",
    "evaluate",
    "antiderivative",
    "mean",
    "sup_distance",
    "stepanov_shift_distance",
    "certified_lower_bound",
    "sup_bound",
    "derivative_bound",
    "next_breakpoint",
    "breakpoints_in",
    "is_piecewise_constant",
    "is_trigonometric",
    "stimulus_from_dict",
    "stimulus_to_dict",
    "load_stimulus",
    "loads_stimulus",
]


class StimulusParseError(ValueError):
    """Raised when a stimulus description is malformed.

    ``location`` holds a field path such as ``parts[1].terms[0].lambda`` or
    a ``line N, column M`` position for JSON syntax errors.
    """

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


def _scalar_or_array(values: np.ndarray, like) -> Union[float, np.ndarray]:
    if np.ndim(like) == 0:
        return float(values)
    return values


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrigPolynomial:
    """Real generalized trigonometric polynomial.

    Parameters
    ----------
    constant_term : float
        The coefficient ``c0``.
    cos_amplitudes, sin_amplitudes, frequencies : sequence of float
        One entry per term. Frequencies are in rad per time unit and must
        be strictly positive and pairwise distinct.
    """

    constant_term: float = 0.0
    cos_amplitudes: np.ndarray = field(default_factory=lambda: _frozen([]))
    sin_amplitudes: np.ndarray = field(default_factory=lambda: _frozen([]))
    frequencies: np.ndarray = field(default_factory=lambda: _frozen([]))

    def __post_init__(self):
        a = _frozen(self.cos_amplitudes).ravel()
        b = _frozen(self.sin_amplitudes).ravel()
        lam = _frozen(self.frequencies).ravel()
        if not (len(a) == len(b) == len(lam)):
            raise ValueError("cos_amplitudes, sin_amplitudes and frequencies differ in length")
        if not math.isfinite(self.constant_term):
            raise ValueError("constant_term must be finite")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b)) and np.all(np.isfinite(lam))):
            raise ValueError("coefficients must be finite")
        if np.any(lam <= 0):
            raise ValueError("frequencies must be strictly positive")
        if len(np.unique(lam)) != len(lam):
            raise ValueError("frequencies must be pairwise distinct")
        object.__setattr__(self, "constant_term", float(self.constant_term))
        object.__setattr__(self, "cos_amplitudes", _frozen(a))
        object.__setattr__(self, "sin_amplitudes", _frozen(b))
        object.__setattr__(self, "frequencies", _frozen(lam))

    @classmethod
    def from_terms(cls, constant_term: float, terms: Iterable[Sequence[float]] = ()):
        """Build from ``(cos_amplitude, sin_amplitude, frequency)`` triples."""
        terms = [tuple(map(float, t)) for t in terms]
        if not terms:
            return cls(constant_term)
        a, b, lam = zip(*terms)
        return cls(constant_term, a, b, lam)

    @classmethod
    def constant(cls, value: float) -> "TrigPolynomial":
        return cls(value)

    @property
    def terms(self) -> list[tuple[float, float, float]]:
        return list(zip(self.cos_amplitudes.tolist(), self.sin_amplitudes.tolist(),
                        self.frequencies.tolist()))

    @property
    def amplitudes(self) -> np.ndarray:
        return np.hypot(self.cos_amplitudes, self.sin_amplitudes)

    def evaluate(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = np.full(t_arr.shape, self.constant_term)
        for a, b, lam in zip(self.cos_amplitudes, self.sin_amplitudes, self.frequencies):
            phase = lam * t_arr
            out = out + a * np.cos(phase) + b * np.sin(phase)
        return _scalar_or_array(out, t)

    def antiderivative(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = self.constant_term * t_arr
        for a, b, lam in zip(self.cos_amplitudes, self.sin_amplitudes, self.frequencies):
            phase = lam * t_arr
            # b*(1 - cos) written via sin^2 to avoid cancellation near 0
            out = out + (a * np.sin(phase) + 2.0 * b * np.sin(0.5 * phase) ** 2) / lam
        return _scalar_or_array(out, t)

    def mean(self) -> float:
        return self.constant_term

    def lower_bound(self) -> float:
        return self.constant_term - float(np.sum(self.amplitudes))

    def sup_bound(self) -> float:
        return abs(self.constant_term) + float(np.sum(self.amplitudes))

    def derivative_bound(self) -> float:
        return float(np.sum(self.amplitudes * self.frequencies))

    def second_derivative_bound(self) -> float:
        return float(np.sum(self.amplitudes * self.frequencies ** 2))

    def next_breakpoint(self, s):
        return np.full(np.shape(s), np.inf)

    def breakpoints_in(self, lo: float, hi: float) -> np.ndarray:
        return np.empty(0)

    def is_zero(self) -> bool:
        return self.constant_term == 0.0 and not np.any(self.amplitudes)


@dataclass(frozen=True)
class PiecewiseConstant:
    """Right-continuous step function.

    ``values[k]`` is taken on ``[breakpoints[k], breakpoints[k+1])``. Outside
    ``[breakpoints[0], breakpoints[-1])`` the function is either the periodic
    extension (``extension="periodic"``) or the constants ``left_value`` and
    ``right_value`` (``extension="tails"``).
    """

    breakpoints: np.ndarray
    values: np.ndarray
    extension: str = "periodic"
    left_value: float = 0.0
    right_value: float = 0.0

    def __post_init__(self):
        bp = _frozen(self.breakpoints).ravel()
        v = _frozen(self.values).ravel()
        if len(v) < 1:
            raise ValueError("at least one segment is required")
        if len(bp) != len(v) + 1:
            raise ValueError("need exactly one more breakpoint than values")
        if not (np.all(np.isfinite(bp)) and np.all(np.isfinite(v))):
            raise ValueError("breakpoints and values must be finite")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if self.extension not in ("periodic", "tails"):
            raise ValueError(f"unknown extension {self.extension!r}")
        if self.extension == "periodic" and (self.left_value or self.right_value):
            raise ValueError("periodic extension does not take tail values")
        if not (math.isfinite(self.left_value) and math.isfinite(self.right_value)):
            raise ValueError("tail values must be finite")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "left_value", float(self.left_value))
        object.__setattr__(self, "right_value", float(self.right_value))
        # prefix integrals from breakpoints[0] to each breakpoint
        cum = np.concatenate([[0.0], np.cumsum(v * np.diff(bp))])
        object.__setattr__(self, "_cum", _frozen(cum))
        object.__setattr__(self, "_rel", _frozen(bp - bp[0]))
        object.__setattr__(self, "_offset", float(self._primitive(np.asarray(0.0))))

    @classmethod
    def periodic(cls, breakpoints, values) -> "PiecewiseConstant":
        return cls(breakpoints, values, "periodic")

    @classmethod
    def with_tails(cls, breakpoints, values, left: float, right: float) -> "PiecewiseConstant":
        return cls(breakpoints, values, "tails", left, right)

    @property
    def period(self) -> float:
        return float(self.breakpoints[-1] - self.breakpoints[0])

    @property
    def is_periodic(self) -> bool:
        return self.extension == "periodic"

    def _reduce(self, t: np.ndarray):
        """Split ``t - t0`` into whole periods and a remainder in ``[0, P)``."""
        P = self.period
        x = t - self.breakpoints[0]
        q = np.floor(x / P)
        r = x - q * P
        # rounding can leave r == P or r slightly negative
        over = r >= P
        q = np.where(over, q + 1, q)
        r = np.where(over, r - P, r)
        under = r < 0
        q = np.where(under, q - 1, q)
        r = np.where(under, r + P, r)
        return q, r

    def _segment(self, r: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(self._rel, r, side="right") - 1
        return np.clip(idx, 0, len(self.values) - 1)

    def _locate(self, t: np.ndarray):
        """Period index ``q`` and segment ``idx`` with ``t`` in that segment.

        The remainder from :meth:`_reduce` can land one ulp on the wrong side
        of a breakpoint; the segment is corrected against its absolute
        endpoints so that evaluation and breakpoint queries always agree.
        """
        m = len(self.values)
        q, r = self._reduce(t)
        idx = self._segment(r)
        origin = self.breakpoints[0] + q * self.period
        ahead = origin + self._rel[idx + 1] <= t
        idx = np.where(ahead, idx + 1, idx)
        behind = origin + self._rel[np.minimum(idx, m - 1)] > t
        idx = np.where(behind, idx - 1, idx)
        q = np.where(idx >= m, q + 1, np.where(idx < 0, q - 1, q))
        idx = np.mod(idx, m)
        return q, idx

    def evaluate(self, t):
        t_arr = np.asarray(t, dtype=float)
        if self.is_periodic:
            _, idx = self._locate(t_arr)
            out = self.values[idx]
        else:
            idx = self._segment(t_arr - self.breakpoints[0])
            out = np.where(t_arr < self.breakpoints[0], self.left_value,
                           np.where(t_arr >= self.breakpoints[-1], self.right_value,
                                    self.values[idx]))
        return _scalar_or_array(np.asarray(out, dtype=float), t)

    def _primitive(self, t_arr: np.ndarray) -> np.ndarray:
        """Integral from ``breakpoints[0]`` to ``t``."""
        t0 = self.breakpoints[0]
        if self.is_periodic:
            q, idx = self._locate(t_arr)
            r = t_arr - (t0 + q * self.period)
            return q * self._cum[-1] + self._cum[idx] + self.values[idx] * (r - self._rel[idx])
        x = t_arr - t0
        idx = self._segment(x)
        inside = self._cum[idx] + self.values[idx] * (x - self._rel[idx])
        left = self.left_value * x
        right = self._cum[-1] + self.right_value * (t_arr - self.breakpoints[-1])
        return np.where(x < 0, left, np.where(t_arr >= self.breakpoints[-1], right, inside))

    def antiderivative(self, t):
        t_arr = np.asarray(t, dtype=float)
        return _scalar_or_array(self._primitive(t_arr) - self._offset, t)

    def mean(self) -> float:
        if self.is_periodic:
            return math.fsum(self.values * np.diff(self.breakpoints)) / self.period
        return self.right_value

    def _all_values(self) -> np.ndarray:
        if self.is_periodic:
            return self.values
        return np.concatenate([self.values, [self.left_value, self.right_value]])

    def lower_bound(self) -> float:
        return float(np.min(self._all_values()))

    def sup_bound(self) -> float:
        return float(np.max(np.abs(self._all_values())))

    def derivative_bound(self) -> float:
        return 0.0

    def second_derivative_bound(self) -> float:
        return 0.0

    def next_breakpoint(self, s):
        """Smallest breakpoint strictly greater than ``s`` (``inf`` if none)."""
        s_arr = np.asarray(s, dtype=float)
        if self.is_periodic:
            q, idx = self._locate(s_arr)
            nb = self.breakpoints[0] + q * self.period + self._rel[idx + 1]
            # the locator guarantees start <= s < end up to one rounding
            nb = np.where(nb > s_arr, nb, np.nextafter(s_arr, np.inf))
            return nb
        bp = self.breakpoints
        idx = np.searchsorted(bp, s_arr, side="right")
        return np.where(idx < len(bp), bp[np.minimum(idx, len(bp) - 1)], np.inf)

    def breakpoints_in(self, lo: float, hi: float) -> np.ndarray:
        if not self.is_periodic:
            bp = self.breakpoints
            return bp[(bp >= lo) & (bp <= hi)].copy()
        P = self.period
        t0 = self.breakpoints[0]
        k_lo = math.floor((lo - t0) / P) - 1
        k_hi = math.ceil((hi - t0) / P) + 1
        shifts = t0 + P * np.arange(k_lo, k_hi + 1)
        pts = (shifts[:, None] + self._rel[None, :-1]).ravel()
        return np.unique(pts[(pts >= lo) & (pts <= hi)])

    def is_zero(self) -> bool:
        return not np.any(self._all_values())


@dataclass(frozen=True)
class StimulusSum:
    """Pointwise sum of trigonometric and piecewise-constant parts."""

    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise ValueError("a sum needs at least one part")
        flat = []
        for p in parts:
            if isinstance(p, StimulusSum):
                flat.extend(p.parts)
            elif isinstance(p, (TrigPolynomial, PiecewiseConstant)):
                flat.append(p)
            else:
                raise TypeError(f"unsupported stimulus part {type(p).__name__}")
        object.__setattr__(self, "parts", tuple(flat))

    def evaluate(self, t):
        out = sum(np.asarray(p.evaluate(t), dtype=float) for p in self.parts)
        return _scalar_or_array(out, t)

    def antiderivative(self, t):
        out = sum(np.asarray(p.antiderivative(t), dtype=float) for p in self.parts)
        return _scalar_or_array(out, t)

    def mean(self) -> float:
        return math.fsum(p.mean() for p in self.parts)

    def lower_bound(self) -> float:
        return math.fsum(p.lower_bound() for p in self.parts)

    def sup_bound(self) -> float:
        return math.fsum(p.sup_bound() for p in self.parts)

    def derivative_bound(self) -> float:
        return math.fsum(p.derivative_bound() for p in self.parts)

    def second_derivative_bound(self) -> float:
        return math.fsum(p.second_derivative_bound() for p in self.parts)

    def next_breakpoint(self, s):
        nbs = [np.asarray(p.next_breakpoint(s), dtype=float) for p in self.parts]
        return np.minimum.reduce(nbs)

    def breakpoints_in(self, lo: float, hi: float) -> np.ndarray:
        pts = [p.breakpoints_in(lo, hi) for p in self.parts]
        return np.unique(np.concatenate(pts))

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)


Stimulus = Union[TrigPolynomial, PiecewiseConstant, StimulusSum]


@dataclass(frozen=True)
class Window:
    """Finite analysis window ``[lo, hi]`` sampled with ``grid_step``."""

    lo: float
    hi: float
    grid_step: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("window bounds must be finite")
        if not self.lo < self.hi:
            raise ValueError("window needs lo < hi")
        if not (self.grid_step > 0 and math.isfinite(self.grid_step)):
            raise ValueError("grid_step must be positive")

    def grid(self) -> np.ndarray:
        n = int(math.floor((self.hi - self.lo) / self.grid_step + 1e-9))
        return self.lo + self.grid_step * np.arange(n + 1)

    def as_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "grid_step": self.grid_step}


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def evaluate(f: Stimulus, t):
    """Exact value of ``f`` at ``t`` (right-continuous at jumps)."""
    return f.evaluate(t)


def antiderivative(f: Stimulus, t):
    """Closed-form ``F(t) = int_0^t f(u) du``."""
    return f.antiderivative(t)


def mean(f: Stimulus) -> float:
    """Exact Cesaro mean ``lim F(T)/T``.

    For a piecewise-constant function with constant tails this is the
    right tail value.
    """
    return f.mean()


def certified_lower_bound(f: Stimulus) -> float:
    """A value ``delta`` with ``f(t) >= delta`` for almost every ``t``.

    May be conservative; a result ``<= 0`` means positivity could not be
    certified.
    """
    return f.lower_bound()


def sup_bound(f: Stimulus) -> float:
    """Certified ``B >= sup |f|``."""
    return f.sup_bound()


def derivative_bound(f: Stimulus) -> float:
    """Bound on ``|f'|`` away from jumps (zero for step functions)."""
    return f.derivative_bound()


def next_breakpoint(f: Stimulus, s):
    return f.next_breakpoint(s)


def breakpoints_in(f: Stimulus, lo: float, hi: float) -> np.ndarray:
    return f.breakpoints_in(lo, hi)


def _parts(f: Stimulus):
    return f.parts if isinstance(f, StimulusSum) else (f,)


def is_piecewise_constant(f: Stimulus) -> bool:
    """True when every part is a step function or a constant."""
    return all(isinstance(p, PiecewiseConstant) or len(p.frequencies) == 0
               for p in _parts(f))


def is_trigonometric(f: Stimulus) -> bool:
    """True when ``f`` is a (sum of) trigonometric polynomial(s)."""
    return all(isinstance(p, TrigPolynomial) for p in _parts(f))


def _sample_points(fs: Sequence[Stimulus], w: Window, shift: float = 0.0) -> np.ndarray:
    pts = [w.grid(), np.array([w.lo, w.hi])]
    for f in fs:
        pts.append(f.breakpoints_in(w.lo, w.hi))
        if shift:
            pts.append(f.breakpoints_in(w.lo + shift, w.hi + shift) - shift)
    pts = np.unique(np.concatenate(pts))
    return pts[(pts >= w.lo) & (pts <= w.hi)]


def sup_distance(f: Stimulus, g: Stimulus, w: Window) -> float:
    """Max of ``|f - g|`` over the window grid and all breakpoints in ``w``.

    A lower bound of the true supremum over ``w``; exact when both inputs
    are step functions.
    """
    pts = _sample_points([f, g], w)
    return float(np.max(np.abs(np.asarray(f.evaluate(pts)) - np.asarray(g.evaluate(pts)))))


# Stepanov integrals use exact antiderivative differences on sign-constant
# pieces, so the only error source is a pair of zeros of the difference
# falling between two consecutive samples. That error is bounded per unit
# length by M2*h**2/4 with M2 >= |d''|.
STEPANOV_ABS_TOL = 1e-6


def _stepanov_step(f: Stimulus, tol: float = STEPANOV_ABS_TOL) -> float:
    m2 = 2.0 * f.second_derivative_bound()
    if m2 == 0.0:
        return 0.05
    return min(0.05, 2.0 * math.sqrt(tol / m2))


def _shift_difference(f: Stimulus, tau: float):
    return (lambda u: np.asarray(f.evaluate(u + tau)) - np.asarray(f.evaluate(u)),
            lambda u: np.asarray(f.antiderivative(u + tau)) - np.asarray(f.antiderivative(u)))


def _abs_integral_cumulative(d, D, nodes: np.ndarray, bisect_iter: int = 60) -> np.ndarray:
    """Cumulative ``int |d|`` at ``nodes`` from exact pieces of ``D``.

    ``d`` is sampled at cell midpoints; a sign flip between two neighbouring
    midpoints is located by bisection and used as an extra partition point.
    """
    mids = 0.5 * (nodes[:-1] + nodes[1:])
    dm = d(mids)
    sgn = np.sign(dm)
    flip = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    zeros = np.empty(0)
    if len(flip):
        lo = mids[flip].copy()
        hi = mids[flip + 1].copy()
        s_lo = sgn[flip]
        for _ in range(bisect_iter):
            m = 0.5 * (lo + hi)
            same = np.sign(d(m)) == s_lo
            lo = np.where(same, m, lo)
            hi = np.where(same, hi, m)
            if np.all(hi - lo <= 1e-15 * np.maximum(1.0, np.abs(lo))):
                break
        zeros = 0.5 * (lo + hi)
    pts = np.concatenate([nodes, zeros])
    order = np.argsort(pts, kind="stable")
    pts = pts[order]
    vals = D(pts)
    cum = np.concatenate([[0.0], np.cumsum(np.abs(np.diff(vals)))])
    is_node = order < len(nodes)
    out = np.empty(len(nodes))
    out[order[is_node]] = cum[is_node]
    return out


def stepanov_shift_distance(f: Stimulus, tau: float, w: Window) -> float:
    """``max_t int_t^{t+1} |f(u + tau) - f(u)| du`` over the window grid ``t``.

    Exact for step functions; absolute error at most ``1e-6`` otherwise.
    """
    if tau == 0.0:
        return 0.0
    return float(np.max(stepanov_profile(f, tau, w)))


def stepanov_profile(f: Stimulus, tau: float, w: Window,
                     tol: float = STEPANOV_ABS_TOL) -> np.ndarray:
    """Per-grid-point Stepanov integrals ``int_t^{t+1} |f(u+tau) - f(u)| du``."""
    ts = w.grid()
    h = _stepanov_step(f, tol)
    n_cells = int(math.ceil((w.hi + 1.0 - w.lo) / h))
    nodes = [w.lo + (w.hi + 1.0 - w.lo) * np.arange(n_cells + 1) / n_cells, ts, ts + 1.0]
    nodes.append(f.breakpoints_in(w.lo, w.hi + 1.0))
    nodes.append(f.breakpoints_in(w.lo + tau, w.hi + 1.0 + tau) - tau)
    nodes = np.unique(np.concatenate(nodes))
    nodes = nodes[(nodes >= w.lo) & (nodes <= w.hi + 1.0)]
    d, D = _shift_difference(f, tau)
    if is_piecewise_constant(f):
        # the difference is constant between merged breakpoints
        widths = np.diff(nodes)
        cum = np.concatenate([[0.0], np.cumsum(np.abs(d(nodes[:-1] + 0.5 * widths)) * widths)])
    else:
        cum = _abs_integral_cumulative(d, D, nodes)
    i0 = np.searchsorted(nodes, ts)
    i1 = np.searchsorted(nodes, ts + 1.0)
    return cum[i1] - cum[i0]


# ---------------------------------------------------------------------------
# JSON description files
# ---------------------------------------------------------------------------


def _number(obj: dict, key: str, path: str) -> float:
    if key not in obj:
        raise StimulusParseError(f"missing field {key!r}", path)
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise StimulusParseError("expected a number", f"{path}.{key}" if path else key)
    if not math.isfinite(val):
        raise StimulusParseError("expected a finite number", f"{path}.{key}" if path else key)
    return float(val)


def _numbers(obj: dict, key: str, path: str) -> list[float]:
    loc = f"{path}.{key}" if path else key
    if key not in obj:
        raise StimulusParseError(f"missing field {key!r}", path)
    seq = obj[key]
    if not isinstance(seq, list):
        raise StimulusParseError("expected a list of numbers", loc)
    out = []
    for i, x in enumerate(seq):
        if isinstance(x, bool) or not isinstance(x, (int, float)) or not math.isfinite(x):
            raise StimulusParseError("expected a finite number", f"{loc}[{i}]")
        out.append(float(x))
    return out


def stimulus_from_dict(obj, path: str = "") -> Stimulus:
    """Build a stimulus from its JSON-compatible description."""
    if not isinstance(obj, dict):
        raise StimulusParseError("expected an object", path or "<root>")
    kind = obj.get("type")
    here = path or "<root>"
    if kind == "trig":
        c0 = _number(obj, "c0", path)
        terms = obj.get("terms", [])
        tloc = f"{path}.terms" if path else "terms"
        if not isinstance(terms, list):
            raise StimulusParseError("expected a list of terms", tloc)
        triples = []
        seen = {}
        for i, term in enumerate(terms):
            loc = f"{tloc}[{i}]"
            if not isinstance(term, dict):
                raise StimulusParseError("expected an object", loc)
            a = _number(term, "a", loc)
            b = _number(term, "b", loc)
            lam = _number(term, "lambda", loc)
            if lam <= 0:
                raise StimulusParseError("frequency must be positive", f"{loc}.lambda")
            if lam in seen:
                raise StimulusParseError(
                    f"duplicate frequency (also in {tloc}[{seen[lam]}])", f"{loc}.lambda")
            seen[lam] = i
            triples.append((a, b, lam))
        return TrigPolynomial.from_terms(c0, triples)
    if kind == "piecewise":
        bp = _numbers(obj, "breakpoints", path)
        vals = _numbers(obj, "values", path)
        bloc = f"{path}.breakpoints" if path else "breakpoints"
        for i in range(1, len(bp)):
            if not bp[i] > bp[i - 1]:
                raise StimulusParseError("breakpoints must be strictly increasing",
                                         f"{bloc}[{i}]")
        if not vals:
            raise StimulusParseError("at least one value is required",
                                     f"{path}.values" if path else "values")
        if len(bp) != len(vals) + 1:
            raise StimulusParseError(
                f"length mismatch: {len(bp)} breakpoints for {len(vals)} values "
                f"(need {len(vals) + 1})", bloc)
        ext = obj.get("extension", {"kind": "periodic"})
        eloc = f"{path}.extension" if path else "extension"
        if not isinstance(ext, dict):
            raise StimulusParseError("expected an object", eloc)
        ekind = ext.get("kind")
        if ekind == "periodic":
            return PiecewiseConstant.periodic(bp, vals)
        if ekind == "tails":
            return PiecewiseConstant.with_tails(bp, vals, _number(ext, "left", eloc),
                                                _number(ext, "right", eloc))
        raise StimulusParseError(f"unknown extension kind {ekind!r}", f"{eloc}.kind")
    if kind == "sum":
        ploc = f"{path}.parts" if path else "parts"
        parts = obj.get("parts")
        if not isinstance(parts, list) or not parts:
            raise StimulusParseError("expected a non-empty list of parts", ploc)
        return StimulusSum(tuple(stimulus_from_dict(p, f"{ploc}[{i}]")
                                 for i, p in enumerate(parts)))
    if kind is None:
        raise StimulusParseError("missing field 'type'", here)
    raise StimulusParseError(f"unknown stimulus type {kind!r}", f"{path}.type" if path else "type")


def stimulus_to_dict(f: Stimulus) -> dict:
    if isinstance(f, TrigPolynomial):
        return {"type": "trig", "c0": f.constant_term,
                "terms": [{"a": a, "b": b, "lambda": lam} for a, b, lam in f.terms]}
    if isinstance(f, PiecewiseConstant):
        ext = ({"kind": "periodic"} if f.is_periodic
               else {"kind": "tails", "left": f.left_value, "right": f.right_value})
        return {"type": "piecewise", "breakpoints": f.breakpoints.tolist(),
                "values": f.values.tolist(), "extension": ext}
    return {"type": "sum", "parts": [stimulus_to_dict(p) for p in f.parts]}


def loads_stimulus(text: str) -> Stimulus:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StimulusParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return stimulus_from_dict(obj)


def load_stimulus(path) -> Stimulus:
    """Read a UTF-8 JSON stimulus description file."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return loads_stimulus(text)
