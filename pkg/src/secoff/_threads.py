"""Optional BLAS thread pinning.

The per-step network updates multiply matrices far too small for
multithreaded BLAS; thread handoff roughly doubles the step time on small
hosts. When threadpoolctl is available the training/evaluation loops pin
BLAS to one thread; otherwise this is a no-op (set OPENBLAS_NUM_THREADS=1 /
OMP_NUM_THREADS=1 in the environment for the same effect).
"""

import contextlib

try:
    from threadpoolctl import threadpool_limits

    def blas_single_thread():
        return threadpool_limits(limits=1, user_api="blas")

except ImportError:  # pragma: no cover - depends on the host environment

    def blas_single_thread():
        return contextlib.nullcontext()
