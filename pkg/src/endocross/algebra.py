"""Finite-dimensional C*-algebras as direct sums of full matrix blocks.

An element of ``M_{n_1} + ... + M_{n_B}`` is stored *packed*: the row-major
entries of every block concatenated into one complex vector of length
``sum(n_b**2)``. Packing keeps linear maps (endomorphisms, quotients) as plain
matrices and lets batches of elements live in a single 2-d array.

Ideals of such an algebra are exactly sums of blocks, so :class:`BlockIdeal`
is a frozen set of block indices and every lattice operation is a set
operation.
"""

from __future__ import annotations

import numpy as np

from . import config
from .errors import ValidationError


class FdAlgebra:
    """Direct sum of matrix blocks with the given sizes.

    Parameters
    ----------
    block_dims : sequence of int
        Sizes ``n_b`` of the blocks, in order.
    allow_empty : bool
        Permit the zero algebra (no blocks). Only quotients produce it.
    """

    __slots__ = ("dims", "offsets", "size", "total_dim", "_dense_offsets")

    def __init__(self, block_dims, allow_empty=False):
        dims = tuple(int(n) for n in block_dims)
        if not dims and not allow_empty:
            raise ValidationError("an algebra needs at least one block")
        if any(n < 1 for n in dims):
            raise ValidationError(f"block sizes must be positive, got {list(dims)}")
        self.dims = dims
        sq = [n * n for n in dims]
        self.offsets = tuple(int(x) for x in np.concatenate([[0], np.cumsum(sq)])[:-1]) if dims else ()
        self.size = int(sum(sq))
        self.total_dim = int(sum(dims))
        self._dense_offsets = tuple(int(x) for x in np.concatenate([[0], np.cumsum(dims)])[:-1]) if dims else ()

    @property
    def num_blocks(self):
        return len(self.dims)

    @property
    def degenerate(self):
        """True for the zero algebra."""
        return not self.dims

    def __eq__(self, other):
        return isinstance(other, FdAlgebra) and self.dims == other.dims

    def __hash__(self):
        return hash(("FdAlgebra", self.dims))

    def __repr__(self):
        return f"FdAlgebra({list(self.dims)})"

    def block_slice(self, b):
        o = self.offsets[b]
        return slice(o, o + self.dims[b] ** 2)

    def dense_slice(self, b):
        o = self._dense_offsets[b]
        return slice(o, o + self.dims[b])

    # -- constructors -----------------------------------------------------

    def element(self, blocks):
        """Build an element from a list of square matrices (scalars allowed for 1x1)."""
        if len(blocks) != self.num_blocks:
            raise ValidationError(f"expected {self.num_blocks} blocks, got {len(blocks)}")
        data = np.zeros(self.size, dtype=complex)
        for b, m in enumerate(blocks):
            m = np.asarray(m, dtype=complex)
            n = self.dims[b]
            if m.ndim == 0 and n == 1:
                m = m.reshape(1, 1)
            if m.shape != (n, n):
                raise ValidationError(f"block {b} must be {n}x{n}, got shape {m.shape}")
            data[self.block_slice(b)] = m.reshape(-1)
        return AlgElement(self, data)

    def from_packed(self, data):
        data = np.asarray(data, dtype=complex)
        if data.shape != (self.size,):
            raise ValidationError(f"packed vector must have length {self.size}")
        return AlgElement(self, data.copy())

    def zero(self):
        return AlgElement(self, np.zeros(self.size, dtype=complex))

    def one(self):
        return AlgElement(self, self.unit_packed())

    def unit_packed(self, members=None):
        """Packed unit of the blocks in ``members`` (all blocks by default)."""
        data = np.zeros(self.size, dtype=complex)
        for b, n in enumerate(self.dims):
            if members is None or b in members:
                data[self.block_slice(b)] = np.eye(n).reshape(-1)
        return data

    def block_unit(self, b):
        return AlgElement(self, self.unit_packed({b}))

    def matrix_unit(self, b, i, j):
        data = np.zeros(self.size, dtype=complex)
        data[self.offsets[b] + i * self.dims[b] + j] = 1.0
        return AlgElement(self, data)

    def matrix_units(self):
        """Yield ``(b, i, j, packed index)`` for the standard basis."""
        for b, n in enumerate(self.dims):
            for i in range(n):
                for j in range(n):
                    yield b, i, j, self.offsets[b] + i * n + j

    def random_element(self, rng, scale=1.0):
        data = rng.standard_normal(self.size) + 1j * rng.standard_normal(self.size)
        return AlgElement(self, scale * data)

    # -- packed kernels (operate on single vectors or on batches) -----------

    def mul(self, x, y):
        """Blockwise product of packed arrays of shape ``(..., size)``."""
        x = np.asarray(x)
        y = np.asarray(y)
        lead = np.broadcast_shapes(x.shape[:-1], y.shape[:-1])
        out = np.empty(lead + (self.size,), dtype=complex)
        for b, n in enumerate(self.dims):
            s = self.block_slice(b)
            xb = x[..., s].reshape(x.shape[:-1] + (n, n))
            yb = y[..., s].reshape(y.shape[:-1] + (n, n))
            out[..., s] = (xb @ yb).reshape(lead + (n * n,))
        return out

    def adj(self, x):
        x = np.asarray(x)
        out = np.empty(x.shape, dtype=complex)
        for b, n in enumerate(self.dims):
            s = self.block_slice(b)
            xb = x[..., s].reshape(x.shape[:-1] + (n, n))
            out[..., s] = np.conj(np.swapaxes(xb, -1, -2)).reshape(x.shape[:-1] + (n * n,))
        return out

    def block_norms(self, x):
        """Spectral norm of every block; shape ``(..., B)``."""
        x = np.asarray(x)
        out = np.empty(x.shape[:-1] + (self.num_blocks,))
        for b, n in enumerate(self.dims):
            xb = x[..., self.block_slice(b)].reshape(x.shape[:-1] + (n, n))
            if n == 1:
                out[..., b] = np.abs(xb[..., 0, 0])
            else:
                out[..., b] = np.linalg.norm(xb, ord=2, axis=(-2, -1))
        return out

    def norm(self, x):
        if self.degenerate:
            return 0.0
        return float(np.max(self.block_norms(x)))

    def to_dense(self, x):
        """Block-diagonal matrix of a packed vector (the identity representation)."""
        d = np.zeros((self.total_dim, self.total_dim), dtype=complex)
        for b, n in enumerate(self.dims):
            s = self.dense_slice(b)
            d[s, s] = np.asarray(x)[self.block_slice(b)].reshape(n, n)
        return d

    def from_dense(self, d):
        """Read the diagonal blocks of a dense matrix (no check of off-diagonal parts)."""
        data = np.zeros(self.size, dtype=complex)
        for b, n in enumerate(self.dims):
            s = self.dense_slice(b)
            data[self.block_slice(b)] = np.asarray(d)[s, s].reshape(-1)
        return data


class AlgElement:
    """Immutable element of an :class:`FdAlgebra`.

    ``*`` is the algebra product when both operands are elements and scalar
    multiplication otherwise.
    """

    __slots__ = ("algebra", "data")

    def __init__(self, algebra, data):
        self.algebra = algebra
        data = np.asarray(data, dtype=complex)
        data.setflags(write=False)
        self.data = data

    @property
    def blocks(self):
        A = self.algebra
        return [self.data[A.block_slice(b)].reshape(n, n) for b, n in enumerate(A.dims)]

    def _check(self, other):
        if other.algebra != self.algebra:
            raise ValidationError("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        return AlgElement(self.algebra, self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return AlgElement(self.algebra, self.data - other.data)

    def __neg__(self):
        return AlgElement(self.algebra, -self.data)

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            self._check(other)
            return AlgElement(self.algebra, self.algebra.mul(self.data, other.data))
        return AlgElement(self.algebra, self.data * complex(other))

    def __rmul__(self, other):
        return AlgElement(self.algebra, self.data * complex(other))

    def adjoint(self):
        return AlgElement(self.algebra, self.algebra.adj(self.data))

    def norm(self):
        return self.algebra.norm(self.data)

    def is_zero(self, tol=None):
        return self.norm() <= (config.tol() if tol is None else tol)

    def allclose(self, other, tol=None):
        self._check(other)
        return (self - other).is_zero(tol)

    def to_dense(self):
        return self.algebra.to_dense(self.data)

    def __repr__(self):
        return f"AlgElement({self.algebra!r}, norm={self.norm():.6g})"


class BlockIdeal:
    """Closed two-sided ideal given by the set of blocks it contains."""

    __slots__ = ("algebra", "members")

    def __init__(self, algebra, members=()):
        members = frozenset(int(b) for b in members)
        bad = [b for b in members if not 0 <= b < algebra.num_blocks]
        if bad:
            raise ValidationError(f"block indices {sorted(bad)} out of range for {algebra!r}")
        self.algebra = algebra
        self.members = members

    @classmethod
    def full(cls, algebra):
        return cls(algebra, range(algebra.num_blocks))

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, ())

    def sorted(self):
        return sorted(self.members)

    @property
    def is_full(self):
        return len(self.members) == self.algebra.num_blocks

    @property
    def is_zero(self):
        return not self.members

    def _check(self, other):
        if other.algebra != self.algebra:
            raise ValidationError("ideals belong to different algebras")

    def __and__(self, other):
        self._check(other)
        return BlockIdeal(self.algebra, self.members & other.members)

    def __or__(self, other):
        self._check(other)
        return BlockIdeal(self.algebra, self.members | other.members)

    def __le__(self, other):
        self._check(other)
        return self.members <= other.members

    def __eq__(self, other):
        return (isinstance(other, BlockIdeal) and other.algebra == self.algebra
                and other.members == self.members)

    def __hash__(self):
        return hash((self.algebra, self.members))

    def __contains__(self, a):
        if isinstance(a, AlgElement):
            return distance_to_ideal(a, self) <= config.tol()
        return a in self.members

    def complement(self):
        return BlockIdeal(self.algebra, set(range(self.algebra.num_blocks)) - self.members)

    def unit(self):
        return AlgElement(self.algebra, self.algebra.unit_packed(self.members))

    def __repr__(self):
        return f"BlockIdeal({self.sorted()})"


def distance_to_ideal(a, S):
    """Distance from ``a`` to the ideal ``S``; equals the norm of ``a`` in ``A/S``."""
    if a.algebra != S.algebra:
        raise ValidationError("element and ideal belong to different algebras")
    return packed_distance(a.algebra, a.data, S.members)


def packed_distance(algebra, x, members):
    """Distance of packed ``x`` (or a batch) to the ideal spanned by ``members``."""
    keep = [b for b in range(algebra.num_blocks) if b not in members]
    norms = algebra.block_norms(x)
    if not keep:
        return 0.0 if norms.ndim == 1 else np.zeros(norms.shape[:-1])
    out = np.max(norms[..., keep], axis=-1)
    return float(out) if out.ndim == 0 else out


def annihilator(S):
    """Largest ideal orthogonal to ``S``: the complementary blocks."""
    return S.complement()


class QuotientMap:
    """The surjection ``A -> A/S`` that drops the blocks of ``S``."""

    def __init__(self, ideal):
        self.ideal = ideal
        self.source = ideal.algebra
        self.kept = [b for b in range(self.source.num_blocks) if b not in ideal.members]
        self.target = FdAlgebra([self.source.dims[b] for b in self.kept], allow_empty=True)
        idx = [np.arange(self.source.block_slice(b).start, self.source.block_slice(b).stop)
               for b in self.kept]
        self.index = np.concatenate(idx) if idx else np.zeros(0, dtype=int)

    def packed(self, x):
        return np.asarray(x)[..., self.index]

    def __call__(self, a):
        if a.algebra != self.source:
            raise ValidationError("element does not belong to the source algebra")
        return AlgElement(self.target, self.packed(a.data))

    def lift(self, a):
        """Section of the quotient map: zero on the dropped blocks."""
        data = np.zeros(self.source.size, dtype=complex)
        data[self.index] = a.data
        return AlgElement(self.source, data)

    def image_of_ideal(self, T):
        """Image ``q(T)`` of an ideal of the source, as an ideal of the quotient."""
        pos = {b: i for i, b in enumerate(self.kept)}
        return BlockIdeal(self.target, [pos[b] for b in T.members if b in pos])


def quotient(S):
    """Return ``(A/S, q)``; the algebra is flagged ``degenerate`` when ``S`` is everything."""
    q = QuotientMap(S)
    return q.target, q
