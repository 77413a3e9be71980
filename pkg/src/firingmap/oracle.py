"""Brute-force reference computations.

Everything here integrates the stimulus by dense midpoint sums of
``f.evaluate`` and never calls the closed-form antiderivative, so it can be
used to check the firing engine independently.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .stimulus import PiecewiseConstant, Stimulus, StimulusSum, TrigPolynomial

__all__ = [
    "OracleConfig",
    "NoCrossingWithinSpan",
    "brute_first_crossing",
    "brute_mean",
    "random_stimulus",
]

_CHUNK = 1 << 16


class NoCrossingWithinSpan(RuntimeError):
    pass


@dataclass(frozen=True)
class OracleConfig:
    """Grid step of the midpoint sums and the longest span searched."""

    grid_step: float = 1e-5
    max_span: float = 1e3

    def __post_init__(self):
        if not self.grid_step > 0:
            raise ValueError("grid_step must be positive")
        if not self.max_span > 0:
            raise ValueError("max_span must be positive")


def brute_first_crossing(f: Stimulus, t: float, level: float,
                         cfg: OracleConfig = OracleConfig()) -> float:
    """First time the midpoint-rule integral of ``f`` from ``t`` reaches ``level``.

    The crossing is linearly interpolated inside the first cell whose
    cumulative sum reaches ``level``. Accurate to about
    ``grid_step * (1 + B)`` for ``|f| <= B``.
    """
    if not level > 0:
        raise ValueError("level must be positive")
    h = cfg.grid_step
    n_total = int(np.ceil(cfg.max_span / h))
    acc = 0.0
    done = 0
    while done < n_total:
        k = np.arange(done, min(done + _CHUNK, n_total))
        vals = np.asarray(f.evaluate(t + (k + 0.5) * h)) * h
        cum = acc + np.cumsum(vals)
        reached = cum >= level
        if reached.any():
            i = int(np.argmax(reached))
            before = cum[i - 1] if i > 0 else acc
            return float(t + (k[i] + (level - before) / vals[i]) * h)
        acc = float(cum[-1])
        done += len(k)
    raise NoCrossingWithinSpan(f"level {level} not reached within {cfg.max_span} of t = {t}")


def brute_mean(f: Stimulus, T: float, cfg: OracleConfig = OracleConfig()) -> float:
    """Midpoint-rule ``(1/T) int_0^T f``."""
    h = cfg.grid_step
    if T < 1e3 * h:
        raise ValueError("T must be at least 1000 grid steps")
    n = int(round(T / h))
    h = T / n
    total = 0.0
    for start in range(0, n, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, n))
        total += float(np.sum(np.asarray(f.evaluate((k + 0.5) * h))))
    return total * h / T


def random_stimulus(rng: np.random.Generator, family: str | None = None,
                    min_delta: float = 0.1) -> Stimulus:
    """Seeded random stimulus with mean in [0.3, 2] and lower bound > min_delta.

    Families: ``"trig"`` (up to three incommensurate terms), ``"piecewise"``
    (periodic steps), ``"tails"`` (steps with constant tails) and ``"sum"``
    (a step function plus a trigonometric polynomial).
    """
    family = family or rng.choice(["trig", "piecewise", "tails", "sum"])
    if family == "trig":
        c0 = rng.uniform(0.3, 2.0)
        k = int(rng.integers(1, 4))
        lam = np.sort(rng.uniform(0.3, 7.0, size=k))
        budget = rng.uniform(0.0, max(c0 - min_delta, 0.0) * 0.95)
        share = rng.dirichlet(np.ones(k)) * budget
        phase = rng.uniform(0, 2 * np.pi, size=k)
        return TrigPolynomial(c0, share * np.cos(phase), share * np.sin(phase), lam)
    if family in ("piecewise", "tails"):
        m = int(rng.integers(1, 5))
        period = rng.uniform(0.3, 3.0)
        cuts = np.sort(rng.uniform(0, period, size=m - 1))
        bp = np.concatenate([[0.0], cuts, [period]]) + rng.uniform(-2, 2)
        if np.any(np.diff(bp) <= 1e-3):
            bp = np.linspace(bp[0], bp[-1], m + 1)
        vals = rng.uniform(min_delta + 0.05, 2.5, size=m)
        # pull the mean into [0.3, 2]
        widths = np.diff(bp)
        mu = float(vals @ widths / period)
        target = float(np.clip(mu, 0.3, 2.0))
        vals = np.maximum(vals * target / mu, min_delta + 0.01)
        if family == "piecewise":
            return PiecewiseConstant.periodic(bp, vals)
        left = rng.uniform(min_delta + 0.05, 2.0)
        right = rng.uniform(0.3, 2.0)
        return PiecewiseConstant.with_tails(bp, vals, left, right)
    if family == "sum":
        step = random_stimulus(rng, "piecewise", min_delta=min_delta + 0.2)
        amp = rng.uniform(0.0, 0.15)
        lam = rng.uniform(0.5, 5.0)
        trig = TrigPolynomial.from_terms(0.0, [(amp, 0.0, lam)])
        return StimulusSum((step, trig))
    raise ValueError(f"unknown family {family!r}")
