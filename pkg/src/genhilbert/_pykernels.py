"""Pure numpy versions of the hot loops.

Same signatures and semantics as the compiled ``_ckernels`` module; used
when the extension is not built or ``GENHILBERT_PURE_PYTHON`` is set.
"""
import numpy as np


def hankel_matvec(moments, a):
    """b[n] = sum_k moments[n + k] * a[k] for n < len(a), by direct summation."""
    moments = np.asarray(moments, dtype=np.float64)
    a = np.asarray(a, dtype=np.complex128)
    n = a.shape[0]
    if moments.shape[0] < 2 * n - 1:
        raise ValueError("need at least 2N-1 moments")
    out = np.empty(n, dtype=np.complex128)
    for i in range(n):
        out[i] = np.dot(moments[i:i + n], a)
    return out


def horner(coeffs, z):
    """Evaluate sum_k coeffs[k] z**k at every point of ``z``."""
    coeffs = np.asarray(coeffs, dtype=np.complex128)
    z = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def alternating_differences(values, kmax):
    """Table D[k, n] = (-1)**k * (Delta**k values)[n]; NaN where undefined."""
    values = np.asarray(values, dtype=np.float64)
    m = values.shape[0]
    table = np.full((kmax + 1, m), np.nan)
    cur = values.copy()
    table[0] = cur
    for k in range(1, kmax + 1):
        if cur.shape[0] < 2:
            break
        # (-1)^k Delta^k = -(Delta of the previous signed row)
        cur = cur[:-1] - cur[1:]
        table[k, :cur.shape[0]] = cur
    return table
