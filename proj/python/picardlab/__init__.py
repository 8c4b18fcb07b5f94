"""Closed-form Picard iterates, convergence envelopes, and Monte Carlo
error estimators for a linear example BSDE."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
