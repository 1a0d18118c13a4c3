"""Select the compiled graph kernels when available, else the Python twins.

Set ``QUDITLOOPS_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py as python

compiled = None
if not os.environ.get("QUDITLOOPS_PURE_PYTHON"):
    try:
        from . import _kernels as compiled
    except ImportError:  # extension not built
        compiled = None

active = compiled if compiled is not None else python
BACKEND = "cython" if compiled is not None else "python"

bridge_flags = active.bridge_flags
paton_cycles = active.paton_cycles
