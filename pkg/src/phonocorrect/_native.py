"""Select the compiled kernels when available, else the pure-Python fallback.

Set PHONO_PURE_PYTHON=1 to force the fallback (used by the benchmark and
for debugging).
"""

import os

if os.environ.get("PHONO_PURE_PYTHON"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

__all__ = ["kernels"]
