"""Human / data-quality / model-capability dynamics laboratory."""

from ._edl import *  # noqa: F401,F403
from ._edl import __version__  # noqa: F401
