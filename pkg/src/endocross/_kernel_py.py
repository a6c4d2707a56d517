"""Numpy implementation of the pairwise convolution kernel.

Same contract as the compiled ``_kernel.star_pairs``: for every pair of an
entry ``a[m, l]`` and an entry ``b[s, t]`` return the row, column and packed
value of its contribution to ``a * b`` (duplicates are not merged).
"""

import numpy as np


def star_pairs(ar, ac, ad, br, bc, bd, tpow, dims, offs):
    na, nb = len(ar), len(br)
    S = ad.shape[1]
    ia = np.repeat(np.arange(na), nb)
    ib = np.tile(np.arange(nb), na)
    l = ac[ia]
    s = br[ib]
    left = s <= l
    shift = np.abs(l - s)
    x = ad[ia]
    y = bd[ib]
    for j in np.unique(shift):
        if j == 0:
            continue
        sel = shift == j
        lm = sel & left
        rm = sel & ~left
        if lm.any():
            y[lm] = y[lm] @ tpow[j].T
        if rm.any():
            x[rm] = x[rm] @ tpow[j].T
    rows = np.where(left, ar[ia], ar[ia] + shift).astype(np.int64)
    cols = np.where(left, bc[ib] + shift, bc[ib]).astype(np.int64)
    out = np.empty((na * nb, S), dtype=complex)
    for n, o in zip(dims, offs):
        n = int(n)
        o = int(o)
        sl = slice(o, o + n * n)
        out[:, sl] = (x[:, sl].reshape(-1, n, n) @ y[:, sl].reshape(-1, n, n)).reshape(-1, n * n)
    return rows, cols, out
