"""Leading-order spin entanglement of top-antitop pairs."""

from ._core import *  # noqa: F401,F403
from ._core import TtentError, __doc__  # noqa: F401
