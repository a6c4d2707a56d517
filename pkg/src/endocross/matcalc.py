"""The *-algebra M(A) of finitely supported A-valued matrices.

An entry ``a[i, j]`` models the word ``u^{*i} a u^j`` and is always stored
compressed, ``alpha^i(1) a[i, j] alpha^j(1)``. The convolution ``star``
reproduces the multiplication of such words; the *k-diagonal* consists of the
entries with ``j - i = k`` and corresponds to the spectral subspace of degree
``k`` for the gauge action.

Entries whose norm falls below :data:`endocross.config.PRUNE` are dropped, so
supports stay finite under repeated products.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import config, kernels
from .algebra import AlgElement
from .endo import restrict
from .errors import DomainError, ValidationError


def _as_packed(endo, value):
    if isinstance(value, AlgElement):
        if value.algebra != endo.algebra:
            raise ValidationError("entry belongs to a different algebra")
        return value.data
    arr = np.asarray(value, dtype=complex)
    if arr.shape != (endo.algebra.size,):
        raise ValidationError(f"packed entry must have length {endo.algebra.size}")
    return arr


class MatElement:
    """A finitely supported element of M(A) over the system ``endo``.

    Parameters
    ----------
    endo : Endomorphism
    entries : mapping ``(i, j) -> AlgElement`` or packed vector
        Values are compressed by ``alpha^i(1)`` and ``alpha^j(1)`` on insertion.
    """

    __slots__ = ("endo", "rows", "cols", "data")

    def __init__(self, endo, entries=None):
        entries = entries or {}
        keys = list(entries)
        rows = np.array([k[0] for k in keys], dtype=np.int64)
        cols = np.array([k[1] for k in keys], dtype=np.int64)
        if np.any(rows < 0) or np.any(cols < 0):
            raise ValidationError("matrix indices must be nonnegative")
        size = endo.algebra.size
        data = np.array([_as_packed(endo, entries[k]) for k in keys], dtype=complex).reshape(len(keys), size)
        self._set(endo, *_normalize(endo, rows, cols, data, compress=True))

    def _set(self, endo, rows, cols, data):
        self.endo = endo
        rows.setflags(write=False)
        cols.setflags(write=False)
        data.setflags(write=False)
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def _from_arrays(cls, endo, rows, cols, data, compress=False):
        obj = cls.__new__(cls)
        obj._set(endo, *_normalize(endo, np.asarray(rows, dtype=np.int64),
                                   np.asarray(cols, dtype=np.int64),
                                   np.asarray(data, dtype=complex), compress=compress))
        return obj

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, endo):
        return cls(endo)

    @classmethod
    def embed(cls, endo, a):
        """The copy of ``a`` in A, at position (0, 0)."""
        return cls(endo, {(0, 0): a})

    @classmethod
    def u(cls, endo):
        """The generator ``u``: entry ``alpha(1)`` at (0, 1)."""
        return cls(endo, {(0, 1): endo.image_unit_packed(1)})

    @classmethod
    def u_star(cls, endo):
        return cls(endo, {(1, 0): endo.image_unit_packed(1)})

    # -- inspection -------------------------------------------------------

    @property
    def algebra(self):
        return self.endo.algebra

    def __len__(self):
        return len(self.rows)

    def entries(self):
        """Dict ``(i, j) -> AlgElement``."""
        A = self.algebra
        return {(int(i), int(j)): AlgElement(A, d) for i, j, d in zip(self.rows, self.cols, self.data)}

    def entry(self, i, j):
        hit = np.nonzero((self.rows == i) & (self.cols == j))[0]
        if len(hit):
            return AlgElement(self.algebra, self.data[hit[0]])
        return self.algebra.zero()

    def support(self):
        return [(int(i), int(j)) for i, j in zip(self.rows, self.cols)]

    def max_index(self):
        """Largest row or column index in the support (-1 when zero)."""
        if not len(self):
            return -1
        return int(max(self.rows.max(), self.cols.max()))

    def max_col(self):
        return int(self.cols.max()) if len(self) else -1

    def degrees(self):
        """Sorted list of the k with a nonzero k-diagonal."""
        return sorted(set((self.cols - self.rows).tolist()))

    def is_zero(self):
        return len(self) == 0

    def max_abs_diff(self, other):
        """Largest block norm of ``self - other`` over the union of supports."""
        d = self - other
        if d.is_zero():
            return 0.0
        return float(np.max(d.algebra.block_norms(d.data)))

    def __repr__(self):
        return f"MatElement(support={self.support()})"

    # -- arithmetic -------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, MatElement):
            raise ValidationError("operand is not a MatElement")
        if other.endo is not self.endo and other.endo != self.endo:
            raise ValidationError("operands belong to different systems")

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, scale(-1.0, other))

    def __neg__(self):
        return scale(-1.0, self)

    def __mul__(self, c):
        return scale(c, self)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return star(self, other)

    def adjoint(self):
        return adjoint(self)


def _normalize(endo, rows, cols, data, compress):
    """Merge duplicate positions, optionally compress, prune, and sort."""
    A = endo.algebra
    if len(rows) == 0:
        return rows[:0], cols[:0], np.zeros((0, A.size), dtype=complex)
    keys = np.stack([rows, cols], axis=1)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    if len(uniq) != len(rows):
        merged = np.zeros((len(uniq), A.size), dtype=complex)
        np.add.at(merged, inv, data)
    else:
        merged = np.empty_like(data)
        merged[inv] = data
    rows = uniq[:, 0].copy()
    cols = uniq[:, 1].copy()
    if compress:
        left = np.array([endo.image_unit_packed(int(i)) for i in rows])
        right = np.array([endo.image_unit_packed(int(j)) for j in cols])
        merged = A.mul(A.mul(left, merged), right)
    keep = A.block_norms(merged).max(axis=1) >= config.PRUNE
    return rows[keep], cols[keep], np.ascontiguousarray(merged[keep])


# -- operations -----------------------------------------------------------------

def add(a, b):
    a._check(b)
    return MatElement._from_arrays(a.endo, np.concatenate([a.rows, b.rows]),
                                   np.concatenate([a.cols, b.cols]),
                                   np.concatenate([a.data, b.data]))


def scale(c, a):
    return MatElement._from_arrays(a.endo, a.rows, a.cols, a.data * complex(c))


def adjoint(a):
    return MatElement._from_arrays(a.endo, a.cols, a.rows, a.algebra.adj(a.data))


def star(a, b):
    """The convolution product of M(A).

    For entries ``a[m, l]`` and ``b[s, t]`` the contribution is
    ``a[m, l] alpha^{l-s}(b[s, t])`` at ``(m, t + l - s)`` when ``s <= l`` and
    ``alpha^{s-l}(a[m, l]) b[s, t]`` at ``(m + s - l, t)`` otherwise.
    """
    a._check(b)
    endo = a.endo
    if a.is_zero() or b.is_zero():
        return MatElement.zero(endo)
    A = endo.algebra
    reach = int(max(np.max(a.cols) - np.min(b.rows), np.max(b.rows) - np.min(a.cols), 0))
    tpow = np.ascontiguousarray(np.array([endo.matrix_power(j) for j in range(reach + 1)]))
    rows, cols, data = kernels.star_pairs(
        np.ascontiguousarray(a.rows), np.ascontiguousarray(a.cols), np.ascontiguousarray(a.data),
        np.ascontiguousarray(b.rows), np.ascontiguousarray(b.cols), np.ascontiguousarray(b.data),
        tpow, np.asarray(A.dims, dtype=np.int64), np.asarray(A.offsets, dtype=np.int64))
    return MatElement._from_arrays(endo, rows, cols, data)


def star_power(a, n):
    """``a`` multiplied with itself ``n`` times (``n >= 1``)."""
    if n < 1:
        raise ValidationError("star_power needs n >= 1")
    result = a
    for _ in range(n - 1):
        result = star(result, a)
    return result


def dot(a, b):
    """The ordinary matrix product of two elements of M(A) (not the convolution)."""
    a._check(b)
    A = a.algebra
    rows, cols, data = [], [], []
    for i, (ar, ac) in enumerate(zip(a.rows, a.cols)):
        hit = np.nonzero(b.rows == ac)[0]
        if not len(hit):
            continue
        rows.append(np.full(len(hit), ar))
        cols.append(b.cols[hit])
        data.append(A.mul(a.data[i], b.data[hit]))
    if not rows:
        return MatElement.zero(a.endo)
    return MatElement._from_arrays(a.endo, np.concatenate(rows), np.concatenate(cols), np.concatenate(data))


def lambda_shift(a, times=1):
    """``Lambda(a)[i, j] = alpha(a[i-1, j-1])``, iterated ``times`` times."""
    if times == 0 or a.is_zero():
        return a
    data = a.endo.apply_packed(a.data, times)
    return MatElement._from_arrays(a.endo, a.rows + times, a.cols + times, data)


@dataclass
class DiagonalPart:
    """The k-diagonal of an element of M(A), indexed by ``n = min(i, j)``.

    ``rows[n]`` holds the packed entry ``a_n^{(k)}``, which sits at position
    ``(n, n + k)`` for ``k >= 0`` and ``(n - k, n)`` for ``k < 0``.
    """

    endo: object
    k: int
    rows: dict = field(default_factory=dict)

    @property
    def support_end(self):
        return max(self.rows) if self.rows else -1

    def is_zero(self):
        return not self.rows

    def to_element(self):
        entries = {}
        for n, x in self.rows.items():
            pos = (n, n + self.k) if self.k >= 0 else (n - self.k, n)
            entries[pos] = x
        return MatElement(self.endo, entries)

    def entry(self, n):
        return AlgElement(self.endo.algebra, self.rows.get(n, np.zeros(self.endo.algebra.size, dtype=complex)))


def diagonal(a, k):
    """Extract the k-diagonal as a :class:`DiagonalPart`."""
    sel = (a.cols - a.rows) == k
    nidx = np.minimum(a.rows, a.cols)[sel]
    return DiagonalPart(a.endo, int(k), {int(n): a.data[sel][t] for t, n in enumerate(nidx)})


def diagonals(a):
    """All nonzero diagonals, as a dict ``k -> DiagonalPart``."""
    return {k: diagonal(a, k) for k in a.degrees()}


def restrict_to_diagonal(a, k):
    """The k-diagonal of ``a`` as an element of M(A)."""
    sel = (a.cols - a.rows) == k
    return MatElement._from_arrays(a.endo, a.rows[sel], a.cols[sel], a.data[sel])


def n_k(a, k):
    """Move the k-diagonal of ``a`` onto the main diagonal.

    Entry ``a_n^{(k)}`` lands at ``(n, n)``. This agrees with ``a_k * u^{*k}``
    for ``k >= 0`` and with ``u^{|k|} * a_k`` for ``k < 0``.
    """
    d = diagonal(a, k)
    if d.is_zero():
        return MatElement.zero(a.endo)
    ns = np.array(sorted(d.rows), dtype=np.int64)
    return MatElement._from_arrays(a.endo, ns, ns, np.array([d.rows[n] for n in ns]))


def u_power(endo, k):
    """``u^k`` for ``k >= 0`` and ``u^{*|k|}`` for ``k < 0``."""
    if k == 0:
        return MatElement.embed(endo, endo.algebra.one())
    base = MatElement.u(endo) if k > 0 else MatElement.u_star(endo)
    return star_power(base, abs(k))


def gauge(a, z):
    """Multiply the k-diagonal by ``z**k``; ``|z|`` must be 1."""
    z = complex(z)
    if abs(abs(z) - 1.0) > 1e-12:
        raise DomainError(f"gauge parameter must have modulus 1, got |z| = {abs(z)!r}")
    factors = z ** (a.cols - a.rows).astype(float)
    return MatElement._from_arrays(a.endo, a.rows, a.cols, a.data * factors[:, None])


class Pushforward:
    """Entrywise quotient ``M(A) -> M(A/S)`` for an invariant ideal ``S``."""

    def __init__(self, endo, S):
        self.source = endo
        self.target, self.q = restrict(endo, S)

    def __call__(self, a):
        if a.endo is not self.source and a.endo != self.source:
            raise ValidationError("element does not belong to the source system")
        if self.target.algebra.degenerate:
            return MatElement._from_arrays(self.target, a.rows[:0], a.cols[:0],
                                           np.zeros((0, 0), dtype=complex))
        return MatElement._from_arrays(self.target, a.rows, a.cols, self.q.packed(a.data))


def pushforward(a, S):
    """Apply the quotient map by the invariant ideal ``S`` to every entry."""
    return Pushforward(a.endo, S)(a)


def random_element(endo, rng, max_index=2, density=0.6, diagonal_k=None, scale=1.0):
    """A random element with indices in ``0..max_index``.

    With ``diagonal_k`` set, only positions on that diagonal are used.
    """
    A = endo.algebra
    entries = {}
    for i in range(max_index + 1):
        for j in range(max_index + 1):
            if diagonal_k is not None and j - i != diagonal_k:
                continue
            if rng.random() < density:
                entries[i, j] = A.random_element(rng, scale).data
    if not entries:
        if diagonal_k is None:
            entries[0, 0] = A.random_element(rng, scale).data
        else:
            pos = (0, diagonal_k) if diagonal_k >= 0 else (-diagonal_k, 0)
            entries[pos] = A.random_element(rng, scale).data
    return MatElement(endo, entries)
