"""Pick the kernel implementation once, at import.

The compiled module is used when it imports; ``DISCDIV_PURE_PYTHON=1``
forces the pure-Python twin.
"""

import logging
import os

log = logging.getLogger(__name__)

from . import _pykernels as python_kernels

compiled_kernels = None
if os.environ.get("DISCDIV_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as compiled_kernels
    except ImportError as exc:  # pragma: no cover - depends on build
        log.info("compiled kernels unavailable (%s); using pure Python", exc)

kernels = compiled_kernels if compiled_kernels is not None else python_kernels
BACKEND = kernels.BACKEND
