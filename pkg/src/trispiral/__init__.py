"""Triangular (right-triangle "mod") spirals: construction, fitting and rendering."""

from .core import *  # noqa: F401,F403
from .baselines import *  # noqa: F401,F403
from .fitting import *  # noqa: F401,F403
from .serialize import *  # noqa: F401,F403
from .render import *  # noqa: F401,F403

__version__ = "0.1.0"
