"""Greedy interval splitting, stationary spacing laws, and subtree profiles."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
