"""Integration kernels: compiled extension when built, pure Python otherwise.

Set ``RWA_RG_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _dopri_py as python_backend

compiled_backend = None
if os.environ.get("RWA_RG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _dopri as compiled_backend
    except ImportError:  # extension not built
        compiled_backend = None

backend = compiled_backend if compiled_backend is not None else python_backend
BACKEND_NAME = "compiled" if compiled_backend is not None else "python"

OK = python_backend.OK
STEP_UNDERFLOW = python_backend.STEP_UNDERFLOW
BLOWUP = python_backend.BLOWUP
MAX_STEPS = python_backend.MAX_STEPS

__all__ = ["backend", "python_backend", "compiled_backend", "BACKEND_NAME",
           "OK", "STEP_UNDERFLOW", "BLOWUP", "MAX_STEPS"]
