"""Selects the network-kernel implementation at import time.

The compiled Cython core is preferred when present; the pure-NumPy module is
the fallback. Override with SECOFF_BACKEND=compiled|numpy (``compiled`` fails
loudly if the extension is missing). Both implementations satisfy the same
contracts; results agree to float rounding but are not bit-identical across
backends, so reproducibility guarantees hold per backend.
"""

import os

from . import _mlpnumpy

_requested = os.environ.get("SECOFF_BACKEND", "auto")

if _requested in ("auto", "compiled"):
    try:
        from . import _mlpcore as _impl
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "SECOFF_BACKEND=compiled but the secoff._mlpcore extension is "
                "not built; install with the Cython extension or use "
                "SECOFF_BACKEND=numpy")
        _impl = _mlpnumpy
elif _requested in ("numpy", "python"):
    _impl = _mlpnumpy
else:
    raise ImportError(f"unknown SECOFF_BACKEND value {_requested!r} "
                      "(expected auto, compiled or numpy)")

BACKEND = _impl.BACKEND
mlp_forward = _impl.mlp_forward
mlp_backward = _impl.mlp_backward
adam_step = _impl.adam_step
soft_update = _impl.soft_update


def available_backends():
    """Importable kernel modules by name (for tests and benchmarks)."""
    out = {"numpy": _mlpnumpy}
    try:
        from . import _mlpcore
        out["compiled"] = _mlpcore
    except ImportError:
        pass
    return out
