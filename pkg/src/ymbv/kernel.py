"""Select the scalar kernel at import time.

The compiled extension is used when it was built; setting ``YMBV_PURE=1``
forces the pure-Python kernel (useful for benchmarking and debugging).
"""
import os

if os.environ.get("YMBV_PURE", "") not in ("", "0"):
    from ._purekernel import BACKEND, GaussianRational, axpy, sparse_rref
else:
    try:
        from ._kernel import BACKEND, GaussianRational, axpy, sparse_rref
    except ImportError:  # extension not built
        from ._purekernel import BACKEND, GaussianRational, axpy, sparse_rref

__all__ = ["BACKEND", "GaussianRational", "axpy", "sparse_rref"]
