"""ALGE: quantitative node-influence prediction and influence maximization."""

from ._alge import *  # noqa: F401,F403
from ._alge import __version__  # noqa: F401
