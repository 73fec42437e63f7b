from ._phasered import *  # noqa: F401,F403
from ._phasered import __doc__  # noqa: F401
