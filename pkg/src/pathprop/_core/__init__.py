"""Numerical core: compiled extension when available, numpy fallback otherwise.

Both backends expose the same three kernels:

    kernel_matrix(points, dt, mass, coeffs, prefactor) -> complex matrix
    matmul_scaled(a, b, alpha)                         -> alpha * (a @ b)
    run_ladder(block, n_steps, dx, renormalize)        -> (traces, final matrix)

Selection happens once at import time.  Set PATHPROP_BACKEND=pure or
PATHPROP_BACKEND=compiled to force a choice (the benchmark script and the
backend equivalence tests rely on this).
"""

import os

_requested = os.environ.get("PATHPROP_BACKEND", "").strip().lower()

if _requested == "pure":
    from . import _pure as _impl
elif _requested == "compiled":
    from . import _speedups as _impl  # ImportError here is intentional: the user asked for it
else:
    try:
        from . import _speedups as _impl
    except ImportError:
        from . import _pure as _impl

kernel_matrix = _impl.kernel_matrix
matmul_scaled = _impl.matmul_scaled
run_ladder = _impl.run_ladder

BACKEND = "compiled" if _impl.__name__.endswith("_speedups") else "pure"


def backend_name() -> str:
    """Name of the active numerical backend ('compiled' or 'pure')."""
    return BACKEND
