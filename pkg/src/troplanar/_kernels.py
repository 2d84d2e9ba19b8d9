"""Pick the enumeration kernel at import time.

The compiled extension is used when it was built; setting the environment
variable ``TROPLANAR_PURE_PYTHON=1`` forces the pure-Python kernel.
"""

import os

if os.environ.get("TROPLANAR_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernel_py as kernel

    BACKEND = "python"
else:
    try:
        from . import _kernel as kernel  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernel_py as kernel  # type: ignore[no-redef]

        BACKEND = "python"

__all__ = ["kernel", "BACKEND"]
