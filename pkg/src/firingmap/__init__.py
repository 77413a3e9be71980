"""Firing maps of the perfect integrate-and-fire model driven by a stimulus ``f(t)``.

The modules split the work as follows:

``stimulus``
    trigonometric polynomials, step functions and their sums, with closed-form
    antiderivatives and shift distances;
``firing``
    the firing map, spike trains, rates and discontinuities;
``almostperiod``
    epsilon-almost-period scans;
``oracle``
    brute-force reference integration used by the tests;
``cli``
    the ``firingmap`` command.
"""
from .almostperiod import *  # noqa: F401,F403
from .almostperiod import __all__ as _ap_all
from .firing import *  # noqa: F401,F403
from .firing import __all__ as _firing_all
from .oracle import *  # noqa: F401,F403
from .oracle import __all__ as _oracle_all
from .stimulus import *  # noqa: F401,F403
from .stimulus import __all__ as _stim_all

__version__ = "0.1.0"
__all__ = [*_stim_all, *_firing_all, *_ap_all, *_oracle_all]
