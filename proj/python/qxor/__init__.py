"""Quantum values of XOR games, nice SOS certificates, and compiled-game checks."""

from ._qxor import *  # noqa: F401,F403
from ._qxor import __doc__  # noqa: F401

__version__ = "0.1.0"
