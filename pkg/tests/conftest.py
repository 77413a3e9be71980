import math

import numpy as np
import pytest

from firingmap import PiecewiseConstant, TrigPolynomial

TWO_PI = 2 * math.pi
SQRT2 = math.sqrt(2.0)


def sine_2pi() -> TrigPolynomial:
    """1 + 0.5 sin(2 pi t): period 1, delta 0.5."""
    return TrigPolynomial.from_terms(1.0, [(0.0, 0.5, TWO_PI)])


def quasiperiodic() -> TrigPolynomial:
    """1 + 0.2 sin t + 0.2 sin(sqrt2 t): delta 0.6, no exact period."""
    return TrigPolynomial.from_terms(1.0, [(0.0, 0.2, 1.0), (0.0, 0.2, SQRT2)])


def zero_mean_pair() -> TrigPolynomial:
    return TrigPolynomial.from_terms(0.0, [(0.0, 1.0, SQRT2), (0.0, 1.0, 2.0)])


def square_wave() -> PiecewiseConstant:
    """2 on [0, 0.5), 0 on [0.5, 1), repeated."""
    return PiecewiseConstant.periodic([0.0, 0.5, 1.0], [2.0, 0.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
