"""Subband spectral features, SENet scoring and evaluation for spoofing detection."""

from ._core import *  # noqa: F401,F403
from ._core import SubspoofError  # noqa: F401

__version__ = "0.1.0"
