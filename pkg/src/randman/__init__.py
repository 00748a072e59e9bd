"""Random manifolds: exact low-dimensional cobordism, Pontryagin numbers, Chern-Weil integration.

The exact layers are re-exported here.  The numeric ones live in
``randman.chernweil``, ``randman.geometries`` and ``randman.integration``
and are imported on demand, since they pull in numba.
"""
from .charclass import *  # noqa: F401,F403
from .cobordism import *  # noqa: F401,F403
from .measure import *  # noqa: F401,F403

__version__ = "0.1.0"
