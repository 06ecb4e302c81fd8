"""Passive selfadjoint systems, Schur transforms and the nevschur CLI."""

from ._core import *  # noqa: F401,F403
from ._core import NevschurError, PassiveSystem, run_cli

__all__ = [name for name in dir() if not name.startswith("_")]
