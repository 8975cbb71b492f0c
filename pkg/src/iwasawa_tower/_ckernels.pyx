# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Moduli must be below 2**31 so products fit in int64."""

import numpy as np

from libc.stdint cimport int64_t


cdef inline int64_t _mod(int64_t x, int64_t m) nogil:
    x = x % m
    if x < 0:
        x += m
    return x


def rank_mod_p(a, long long p):
    """Rank of an integer matrix over F_p (dense Gaussian elimination)."""
    arr = np.array(a, dtype=object) if not hasattr(a, "dtype") else a
    if arr.size == 0:
        return 0
    work = np.ascontiguousarray(np.mod(arr, p).astype(np.int64))
    cdef int64_t[:, ::1] m = work
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r, c, k, piv
    cdef Py_ssize_t rank = 0
    cdef int64_t f, inv, t
    cdef int64_t pp = p
    for c in range(cols):
        if rank == rows:
            break
        piv = -1
        for r in range(rank, rows):
            if m[r, c] != 0:
                piv = r
                break
        if piv < 0:
            continue
        if piv != rank:
            for k in range(c, cols):
                t = m[piv, k]
                m[piv, k] = m[rank, k]
                m[rank, k] = t
        inv = pow(int(m[rank, c]), int(pp - 2), int(pp))
        with nogil:
            for k in range(c, cols):
                if m[rank, k] != 0:
                    m[rank, k] = (m[rank, k] * inv) % pp
            for r in range(rank + 1, rows):
                f = m[r, c]
                if f == 0:
                    continue
                for k in range(c, cols):
                    if m[rank, k] != 0:
                        m[r, k] = _mod(m[r, k] - f * m[rank, k], pp)
        rank += 1
    return rank


def series_mul_mod(a, b, Py_ssize_t D, long long modulus):
    """Coefficients of a*b mod (t^D, modulus)."""
    cdef int64_t[::1] x = np.ascontiguousarray(np.mod(np.asarray(a, dtype=object), modulus).astype(np.int64))
    cdef int64_t[::1] y = np.ascontiguousarray(np.mod(np.asarray(b, dtype=object), modulus).astype(np.int64))
    out_arr = np.zeros(D, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef Py_ssize_t i, j, na = min(x.shape[0], D), nb = min(y.shape[0], D)
    cdef int64_t m = modulus, xi
    with nogil:
        for i in range(na):
            xi = x[i]
            if xi == 0:
                continue
            for j in range(min(nb, D - i)):
                out[i + j] = (out[i + j] + xi * y[j]) % m
    return [int(v) for v in out_arr]
