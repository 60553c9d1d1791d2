"""Next-command prediction toolkit.

Thin wrapper over the compiled extension; see ``cmdseer._core`` for the
full surface.
"""

from cmdseer._core import *  # noqa: F401,F403
from cmdseer._core import __version__  # noqa: F401
