# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops; see _pykernels for the reference."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def hankel_matvec(moments, a):
    cdef const double[::1] mu = np.ascontiguousarray(moments, dtype=np.float64)
    av = np.asarray(a, dtype=np.complex128)
    cdef Py_ssize_t n = av.shape[0]
    if mu.shape[0] < 2 * n - 1:
        raise ValueError("need at least 2N-1 moments")
    cdef const double[::1] re = np.ascontiguousarray(av.real)
    cdef const double[::1] im = np.ascontiguousarray(av.imag)
    out_re = np.zeros(n)
    out_im = np.zeros(n)
    cdef double[::1] orr = out_re
    cdef double[::1] oi = out_im
    cdef Py_ssize_t i, k
    cdef double ar, ai
    # k outer so the inner loop updates independent outputs and vectorizes
    for k in range(n):
        ar = re[k]
        ai = im[k]
        for i in range(n):
            orr[i] += mu[i + k] * ar
            oi[i] += mu[i + k] * ai
    return out_re + 1j * out_im


def horner(coeffs, z):
    c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef const double[::1] cr = np.ascontiguousarray(c.real)
    cdef const double[::1] ci = np.ascontiguousarray(c.imag)
    zarr = np.asarray(z, dtype=np.complex128)
    shape = zarr.shape
    zf = zarr.ravel()
    cdef const double[::1] zr = np.ascontiguousarray(zf.real)
    cdef const double[::1] zi = np.ascontiguousarray(zf.imag)
    cdef Py_ssize_t i, k, m = zr.shape[0], nc = cr.shape[0]
    acc_re = np.zeros(m)
    acc_im = np.zeros(m)
    cdef double[::1] xr = acc_re
    cdef double[::1] xi = acc_im
    cdef double t
    for k in range(nc - 1, -1, -1):
        for i in range(m):
            t = xr[i] * zr[i] - xi[i] * zi[i] + cr[k]
            xi[i] = xr[i] * zi[i] + xi[i] * zr[i] + ci[k]
            xr[i] = t
    return (acc_re + 1j * acc_im).reshape(shape)


def alternating_differences(values, Py_ssize_t kmax):
    cdef double[::1] v = np.array(values, dtype=np.float64)
    cdef Py_ssize_t m = v.shape[0]
    table = np.full((kmax + 1, m), np.nan)
    cdef double[:, ::1] t = table
    cdef Py_ssize_t k, n, length = m
    for n in range(m):
        t[0, n] = v[n]
    for k in range(1, kmax + 1):
        if length < 2:
            break
        length -= 1
        for n in range(length):
            v[n] = v[n] - v[n + 1]
            t[k, n] = v[n]
    return table
