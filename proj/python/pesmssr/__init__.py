"""Type I / Type II Bayesian sparse signal recovery with power-exponential scale-mixture priors."""

from ._pesmssr import *  # noqa: F401,F403
from ._pesmssr import __doc__  # noqa: F401
