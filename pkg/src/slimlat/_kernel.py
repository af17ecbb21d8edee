"""Kernel selection: compiled congruence closure with pure-Python fallback.

Set SLIMLAT_PURE=1 to force the fallback (used by the benchmark and tests).
"""

import os

from . import _conclose_py

try:
    from . import _conclose as _compiled
except ImportError:  # extension not built
    _compiled = None

if _compiled is not None and not os.environ.get("SLIMLAT_PURE"):
    principal_closure = _compiled.principal_closure
    KERNEL = "compiled"
else:
    principal_closure = _conclose_py.principal_closure
    KERNEL = "python"
