"""Python bindings for the zenoest C++ core."""

from ._zenoest import *  # noqa: F401,F403
from ._zenoest import __version__
