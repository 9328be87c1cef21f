from ._dci import *  # noqa: F401,F403
