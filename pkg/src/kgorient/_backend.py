"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``KGORIENT_BACKEND=python`` to force the fallback.
"""

import os

from kgorient import _fallback

python_kernels = _fallback
compiled_kernels = None

try:
    from kgorient import _kernels as compiled_kernels  # type: ignore[no-redef]
except ImportError:  # extension not built
    compiled_kernels = None

if compiled_kernels is not None and os.environ.get("KGORIENT_BACKEND", "").lower() != "python":
    kernels = compiled_kernels
    BACKEND = "cython"
else:
    kernels = python_kernels
    BACKEND = "python"


def get(name=None):
    """Kernel module by name (``"cython"``/``"python"``), or the active one."""
    if name is None:
        return kernels
    if name == "python":
        return python_kernels
    if name == "cython":
        if compiled_kernels is None:
            raise RuntimeError("compiled kernels are not built; run `pip install -e .`")
        return compiled_kernels
    raise ValueError(f"unknown backend {name!r}")
