"""Pick the kernel implementation.

The compiled extension is used when it imports; otherwise the same source
file is loaded as plain Python. Setting ``GINDEX_PURE=1`` forces the
fallback, which the test suite and the benchmark rely on.
"""
import importlib.util
import os
import sys
from pathlib import Path

_SRC = Path(__file__).with_name("_kernels.py")


def load_pure():
    """Import ``_kernels.py`` as an ordinary module, bypassing the extension."""
    name = "gindex._kernels_py"
    if name in sys.modules:
        return sys.modules[name]
    spec = importlib.util.spec_from_file_location(name, _SRC)
    mod = importlib.util.module_from_spec(spec)
    sys.modules[name] = mod
    spec.loader.exec_module(mod)
    return mod


def load_compiled():
    """Return the compiled kernel module, or None if it is not built."""
    try:
        from . import _kernels as mod
    except ImportError:
        return None
    return mod if mod.is_compiled() else None


def _select():
    if os.environ.get("GINDEX_PURE") == "1":
        return load_pure()
    return load_compiled() or load_pure()


K = _select()
COMPILED = K.is_compiled()
