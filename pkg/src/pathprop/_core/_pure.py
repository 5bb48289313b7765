"""Pure numpy implementation of the numerical core."""

import numpy as np


def _polyval(coeffs, x):
    # Horner, highest power last; exact zeros for absent powers keep parity exact
    acc = np.zeros_like(x)
    for c in coeffs[::-1]:
        acc = acc * x + c
    return acc


def kernel_matrix(points, dt, mass, coeffs, prefactor):
    """One-slice kernel: prefactor * exp(i*dt*L(midpoint, displacement/dt))."""
    x = np.asarray(points, dtype=np.float64)
    mid = 0.5 * (x[:, None] + x[None, :])
    vel = (x[None, :] - x[:, None]) / dt
    phase = dt * (0.5 * mass * vel * vel - _polyval(coeffs, mid))
    return prefactor * np.exp(1j * phase)


def matmul_scaled(a, b, alpha):
    """alpha * (a @ b) for square complex matrices."""
    out = np.matmul(a, b)
    if alpha != 1.0:
        out *= alpha
    return out


def run_ladder(block, n_steps, dx, renormalize):
    """Iterate cur <- dx * block @ cur, recording dx-weighted traces.

    traces[0] is the trace of `block` itself; each of the n_steps extensions
    appends one more.  With `renormalize` the running matrix is rescaled by
    1/sqrt(mean unitarity-profile value) after every extension (the caller is
    expected to pass an already-rescaled block).  Raises on non-finite values.
    """
    n = block.shape[0]
    traces = np.empty(n_steps + 1, dtype=np.complex128)
    cur = block.copy()
    traces[0] = dx * np.trace(cur)
    buf = np.empty_like(cur)
    for i in range(1, n_steps + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            np.matmul(block, cur, out=buf)
            buf *= dx
        cur, buf = buf, cur
        if renormalize:
            rowsums = cur.sum(axis=1)
            mean = dx * dx * np.real(rowsums @ rowsums.conj()) / n
            cur *= 1.0 / np.sqrt(mean)
        traces[i] = dx * np.trace(cur)
        if not np.isfinite(traces[i]):
            raise FloatingPointError(f"propagator blow-up at ladder step {i}")
    if not np.all(np.isfinite(cur)):
        raise FloatingPointError("propagator blow-up: non-finite entries in final matrix")
    return traces, cur
