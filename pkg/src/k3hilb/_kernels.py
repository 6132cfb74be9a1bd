"""Select the compiled term kernels when available, else the pure-Python ones.

Set ``K3HILB_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("K3HILB_PURE_PYTHON"):
    from ._pykernels import *  # noqa: F401,F403
    BACKEND = "python"
else:
    try:
        from ._ckernels import *  # noqa: F401,F403
        BACKEND = "cython"
    except ImportError:
        from ._pykernels import *  # noqa: F401,F403
        BACKEND = "python"

__all__ = ["mul_deco", "mul_diag", "mul_terms", "drop_slots", "forget", "contract",
           "permute", "canonical", "wick", "sort_state", "apply_terms", "BACKEND"]
