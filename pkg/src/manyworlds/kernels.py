"""Kernel backend selection.

The enumeration kernels visit every one of the 2**n outcome bit-strings.
When the compiled extension built from ``_kernels.pyx`` is importable it is
used; otherwise the chunked numpy fallback takes over. Set the environment
variable MANYWORLDS_KERNELS to ``python`` or ``cython`` to force a backend
(forcing ``cython`` raises if the extension is missing).
"""

import os

from . import _kernels_py

_FORCED = os.environ.get("MANYWORLDS_KERNELS", "").strip().lower()
if _FORCED not in ("", "python", "cython"):
    raise ImportError(
        f"MANYWORLDS_KERNELS must be 'python' or 'cython', got {_FORCED!r}"
    )

if _FORCED == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        if _FORCED == "cython":
            raise
        _impl = _kernels_py
        BACKEND = "python"

plus_count_histogram = _impl.plus_count_histogram
weighted_plus_count_histogram = _impl.weighted_plus_count_histogram


def available_backends():
    """Map backend name to its module, for tests and benchmarks."""
    backends = {"python": _kernels_py}
    try:
        from . import _kernels

        backends["cython"] = _kernels
    except ImportError:
        pass
    return backends
