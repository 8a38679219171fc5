"""Optimal single-item auctions for risk-loving buyers on discrete grids."""

from rlauction._core import *  # noqa: F401,F403
from rlauction._core import __doc__  # noqa: F401
