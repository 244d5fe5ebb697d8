"""Weighted orthogonal expansions, Parseval checks, and integral
inequalities over bounded measurable subsets of R^n."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
