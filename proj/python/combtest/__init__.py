"""Detection of a contaminated subset in Gaussian noise."""

from combtest._core import *  # noqa: F401,F403
from combtest._core import __version__  # noqa: F401
