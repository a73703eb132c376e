"""Pick the compiled kernels when available, the NumPy fallback otherwise.

Set ``CHUI_LAB_PURE=1`` to force the fallback.
"""

import os

from . import _kernels_py as pure

compiled = None
if os.environ.get("CHUI_LAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

kernels = compiled if compiled is not None else pure
BACKEND = "cython" if compiled is not None else "numpy"
