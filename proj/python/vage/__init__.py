"""Truncated convolution rings over weighted free commutative monoids."""

from ._vage import *  # noqa: F401,F403
from ._vage import __doc__  # noqa: F401
