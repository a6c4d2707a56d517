"""Random block systems for property tests and benchmarks."""

from __future__ import annotations

import numpy as np

from .algebra import BlockIdeal, FdAlgebra
from .endo import Endomorphism


def random_unitary(rng, n):
    """Haar-distributed ``n x n`` unitary (QR with phase correction)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_system(rng, max_blocks=3, max_dim=3, unital=None, twist=True):
    """A random endomorphism of a random block algebra.

    Each target block is filled greedily with random source blocks that fit;
    the rest is padding (or, when ``unital`` is requested, the row is retried
    until it fills exactly, falling back to padding).
    """
    B = int(rng.integers(1, max_blocks + 1))
    dims = [int(d) for d in rng.integers(1, max_dim + 1, size=B)]
    A = FdAlgebra(dims)
    m = np.zeros((B, B), dtype=int)
    pad = []
    for c, nc in enumerate(dims):
        best = None
        for _ in range(8):
            row = np.zeros(B, dtype=int)
            room = nc
            for b in rng.permutation(B):
                if dims[b] <= room and rng.random() < 0.7:
                    k = int(rng.integers(0, room // dims[b] + 1))
                    row[b] += k
                    room -= k * dims[b]
            if best is None or room < best[1]:
                best = (row, room)
            if room == 0 or not unital:
                break
        m[c] = best[0]
        pad.append(best[1])
    vs = [random_unitary(rng, n) if twist else np.eye(n) for n in dims]
    return Endomorphism(A, m, vs, pad)


def random_automorphism(rng, max_blocks=3, max_dim=3, twist=True):
    """Block permutation between equal-size blocks, conjugated by random unitaries."""
    B = int(rng.integers(1, max_blocks + 1))
    dims = [int(d) for d in rng.integers(1, max_dim + 1, size=B)]
    A = FdAlgebra(dims)
    m = np.zeros((B, B), dtype=int)
    for n in set(dims):
        idx = [b for b in range(B) if dims[b] == n]
        for c, b in zip(idx, rng.permutation(idx)):
            m[c, b] = 1
    vs = [random_unitary(rng, n) if twist else np.eye(n) for n in dims]
    return Endomorphism(A, m, vs)


def random_ideal(rng, algebra, p=0.5):
    return BlockIdeal(algebra, [b for b in range(algebra.num_blocks) if rng.random() < p])
