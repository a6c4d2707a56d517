# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise convolution kernel for the product of M(A)."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def star_pairs(const long[::1] ar, const long[::1] ac, const double complex[:, ::1] ad,
               const long[::1] br, const long[::1] bc, const double complex[:, ::1] bd,
               const double complex[:, :, ::1] tpow, const long[::1] dims, const long[::1] offs):
    cdef Py_ssize_t na = ar.shape[0], nb = br.shape[0]
    cdef Py_ssize_t S = ad.shape[1], nblocks = dims.shape[0]
    cdef Py_ssize_t p, q, r, t, blk, n, o, i, j, k, idx, shift
    cdef long l, s
    cdef double complex acc
    rows_np = np.empty(na * nb, dtype=np.int64)
    cols_np = np.empty(na * nb, dtype=np.int64)
    out_np = np.zeros((na * nb, S), dtype=np.complex128)
    cdef long long[::1] rows = rows_np
    cdef long long[::1] cols = cols_np
    cdef double complex[:, ::1] out = out_np
    cdef double complex[::1] tmp = np.empty(S, dtype=np.complex128)
    cdef bint left
    for p in range(na):
        for q in range(nb):
            idx = p * nb + q
            l = ac[p]
            s = br[q]
            left = s <= l
            shift = (l - s) if left else (s - l)
            # tmp = alpha^shift applied to the side that gets shifted
            for r in range(S):
                acc = 0
                if left:
                    for t in range(S):
                        acc = acc + tpow[shift, r, t] * bd[q, t]
                else:
                    for t in range(S):
                        acc = acc + tpow[shift, r, t] * ad[p, t]
                tmp[r] = acc
            if left:
                rows[idx] = ar[p]
                cols[idx] = bc[q] + shift
            else:
                rows[idx] = ar[p] + shift
                cols[idx] = bc[q]
            for blk in range(nblocks):
                n = dims[blk]
                o = offs[blk]
                for i in range(n):
                    for k in range(n):
                        acc = 0
                        for j in range(n):
                            if left:
                                acc = acc + ad[p, o + i * n + j] * tmp[o + j * n + k]
                            else:
                                acc = acc + tmp[o + i * n + j] * bd[q, o + j * n + k]
                        out[idx, o + i * n + k] = acc
    return rows_np, cols_np, out_np
