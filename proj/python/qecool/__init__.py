"""Exact density-matrix simulation of finite-temperature 3-qubit error
correction and heat-bath algorithmic cooling."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
