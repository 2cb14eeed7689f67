"""Numerical laboratory for finite-time blow-up of u_t = lap u + V(x) u^p."""

from ._blowlab import *  # noqa: F401,F403
from ._blowlab import __version__  # noqa: F401
