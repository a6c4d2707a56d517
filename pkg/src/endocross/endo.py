"""*-endomorphisms of block algebras in multiplicity form.

Every *-endomorphism of ``A = M_{n_1} + ... + M_{n_B}`` is, up to a unitary in
each target block, a block-diagonal repetition of the source blocks::

    alpha(a)_c = V_c (a_1 (x) 1_{m_c1} + ... + a_B (x) 1_{m_cB} + 0_{z_c}) V_c^*

with slots ordered by source block, each source block repeated ``m_cb``
times, and ``z_c`` zero rows at the end. Ideal questions (kernels,
preimages, invariance) depend only on the integer matrix ``m``, so they are
answered exactly; the unitaries only matter for evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import AlgElement, BlockIdeal, QuotientMap
from .errors import DomainError, UnsupportedPatternError, ValidationError


def _is_unitary(v, tol=1e-10):
    return np.allclose(v.conj().T @ v, np.eye(v.shape[0]), atol=tol)


class Endomorphism:
    """A *-endomorphism of ``algebra`` in canonical multiplicity form.

    Parameters
    ----------
    algebra : FdAlgebra
    multiplicity : array_like of int, shape (B, B)
        ``multiplicity[c][b]`` is how often block ``b`` is repeated inside
        target block ``c``.
    unitaries : list of (n_c, n_c) arrays or None
        Per-target unitaries; identity where omitted (``None`` entries allowed).
    pad : list of int or None
        Zero padding per target block. Derived from the dimension balance when
        omitted; validated against it when given.
    """

    def __init__(self, algebra, multiplicity, unitaries=None, pad=None):
        B = algebra.num_blocks
        m = np.asarray(multiplicity)
        if m.shape != (B, B):
            raise ValidationError(f"multiplicity must be {B}x{B}, got shape {m.shape}")
        if not np.all(np.equal(np.mod(m, 1), 0)) or np.any(m < 0):
            raise ValidationError("multiplicities must be nonnegative integers")
        m = m.astype(np.int64)
        dims = np.asarray(algebra.dims, dtype=np.int64)
        used = m @ dims if B else np.zeros(0, dtype=np.int64)
        balance = dims - used
        if pad is None:
            if np.any(balance < 0):
                c = int(np.argmax(balance < 0))
                raise ValidationError(
                    f"dimension balance fails in block {c}: slots need {used[c]} > {dims[c]}")
            pad = balance
        else:
            pad = np.asarray(pad, dtype=np.int64)
            if pad.shape != (B,) or np.any(pad < 0):
                raise ValidationError("pad must list one nonnegative integer per block")
            if np.any(pad != balance):
                c = int(np.argmax(pad != balance))
                raise ValidationError(
                    f"dimension balance fails in block {c}: "
                    f"{used[c]} + {pad[c]} != {dims[c]}")
        vs = []
        for c, n in enumerate(algebra.dims):
            v = None if unitaries is None else unitaries[c]
            if v is None:
                vs.append(np.eye(n, dtype=complex))
                continue
            v = np.asarray(v, dtype=complex)
            if v.shape != (n, n):
                raise ValidationError(f"unitary for block {c} must be {n}x{n}")
            if not _is_unitary(v):
                raise ValidationError(f"matrix for block {c} is not unitary")
            vs.append(v)
        m.setflags(write=False)
        pad.setflags(write=False)
        self.algebra = algebra
        self.multiplicity = m
        self.pad = pad
        self.unitaries = tuple(vs)
        self._matrix = None
        self._powers = {}
        self._mat_powers = [np.eye(algebra.size, dtype=complex)]
        one = algebra.unit_packed()
        one.setflags(write=False)
        self._unit_images = [one]

    # -- basic structure ---------------------------------------------------

    def __repr__(self):
        return f"Endomorphism({self.algebra!r}, multiplicity={self.multiplicity.tolist()})"

    @classmethod
    def identity(cls, algebra):
        return cls(algebra, np.eye(algebra.num_blocks, dtype=int))

    @property
    def unital(self):
        return bool(np.all(self.pad == 0))

    def slots(self, c):
        """Ordered ``(source block, start column)`` pairs of target block ``c``."""
        out = []
        pos = 0
        for b, n in enumerate(self.algebra.dims):
            for _ in range(int(self.multiplicity[c, b])):
                out.append((b, pos))
                pos += n
        return out

    @property
    def matrix(self):
        """The linear map on packed vectors, shape ``(size, size)``."""
        if self._matrix is None:
            A = self.algebra
            T = np.zeros((A.size, A.size), dtype=complex)
            for c, nc in enumerate(A.dims):
                V = self.unitaries[c]
                rows = A.block_slice(c)
                for b, pos in self.slots(c):
                    nb = A.dims[b]
                    cols = V[:, pos:pos + nb]
                    base = A.offsets[b]
                    for i in range(nb):
                        for j in range(nb):
                            T[rows, base + i * nb + j] += np.outer(cols[:, i], cols[:, j].conj()).reshape(-1)
            T.setflags(write=False)
            self._matrix = T
        return self._matrix

    def matrix_power(self, n):
        """Packed matrix of ``alpha^n`` (cached)."""
        while len(self._mat_powers) <= n:
            nxt = self.matrix @ self._mat_powers[-1]
            nxt.setflags(write=False)
            self._mat_powers.append(nxt)
        return self._mat_powers[n]

    def apply_packed(self, x, n=1):
        x = np.asarray(x)
        if n == 0:
            return x.astype(complex, copy=True)
        return x @ self.matrix_power(n).T

    def __call__(self, a):
        return apply(self, a)

    def image_unit_packed(self, n=1):
        """Packed ``alpha^n(1)`` (cached, read-only)."""
        cache = self._unit_images
        while len(cache) <= n:
            nxt = self.matrix @ cache[-1]
            nxt.setflags(write=False)
            cache.append(nxt)
        return cache[n]

    def support(self):
        return self.multiplicity > 0

    def __eq__(self, other):
        return (isinstance(other, Endomorphism) and other.algebra == self.algebra
                and np.array_equal(other.multiplicity, self.multiplicity)
                and all(np.allclose(x, y) for x, y in zip(self.unitaries, other.unitaries)))

    __hash__ = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_function(cls, algebra, f, tol=1e-10):
        """Recover the canonical form of a numerical *-homomorphism.

        ``f`` maps :class:`AlgElement` to :class:`AlgElement` and is assumed
        linear. The homomorphism identities are verified on matrix units; the
        multiplicity of block ``b`` in target ``c`` is read off from the rank
        of ``f(e_b)_c``.
        """
        A = algebra
        units = {}
        for b, i, j, _ in A.matrix_units():
            units[b, i, j] = f(A.matrix_unit(b, i, j)).data
        for (b, i, j), x in units.items():
            if not np.allclose(A.adj(x), units[b, j, i], atol=tol):
                raise ValidationError(f"f does not preserve adjoints on unit ({b},{i},{j})")
            n = A.dims[b]
            for k in range(n):
                for l in range(n):
                    want = units[b, i, l] if j == k else np.zeros(A.size)
                    if not np.allclose(A.mul(x, units[b, k, l]), want, atol=tol):
                        raise ValidationError(f"f is not multiplicative on block {b}")
        for b in range(A.num_blocks):
            for b2 in range(b + 1, A.num_blocks):
                if not np.allclose(A.mul(units[b, 0, 0], units[b2, 0, 0]), 0, atol=tol):
                    raise ValidationError(f"images of blocks {b} and {b2} are not orthogonal")
        B = A.num_blocks
        m = np.zeros((B, B), dtype=int)
        vs = []
        for c, nc in enumerate(A.dims):
            cols = []
            for b, nb in enumerate(A.dims):
                e00 = A.dense_slice(c)
                p = A.to_dense(units[b, 0, 0])[e00, e00]
                w, vecs = np.linalg.eigh((p + p.conj().T) / 2)
                range_vecs = vecs[:, w > 0.5]
                m[c, b] = range_vecs.shape[1]
                for k in range(m[c, b]):
                    for i in range(nb):
                        ei0 = A.to_dense(units[b, i, 0])[e00, e00]
                        cols.append(ei0 @ range_vecs[:, k])
            basis = np.array(cols).T if cols else np.zeros((nc, 0), dtype=complex)
            used = basis.shape[1]
            if used > nc:
                raise ValidationError(f"rank count exceeds size of block {c}")
            if used < nc:
                u, _, _ = np.linalg.svd(basis if used else np.zeros((nc, 1)), full_matrices=True)
                complement = u[:, used:]
                basis = np.hstack([basis, complement]) if used else complement
            vs.append(basis)
        endo = cls(A, m, vs)
        check = np.zeros((A.size, A.size), dtype=complex)
        for b, i, j, idx in A.matrix_units():
            check[:, idx] = units[b, i, j]
        if not np.allclose(endo.matrix, check, atol=1e-8):
            raise ValidationError("f is not a *-homomorphism of the expected form")
        return endo


# -- operations ---------------------------------------------------------------

def apply(alpha, a):
    """Evaluate ``alpha(a)``."""
    if a.algebra != alpha.algebra:
        raise ValidationError("element does not belong to the endomorphism's algebra")
    return AlgElement(alpha.algebra, alpha.matrix @ a.data)


def compose(alpha, beta):
    """The endomorphism ``alpha o beta`` in canonical form."""
    if alpha.algebra != beta.algebra:
        raise ValidationError("endomorphisms act on different algebras")
    A = alpha.algebra
    m = alpha.multiplicity @ beta.multiplicity
    vs = []
    for c, nc in enumerate(A.dims):
        # W~ places beta's unitary on every alpha-slot; identity on alpha's pad
        wt = np.zeros((nc, nc), dtype=complex)
        segments = []  # (source block b, start col) in the current order
        for d, pos in alpha.slots(c):
            nd = A.dims[d]
            wt[pos:pos + nd, pos:pos + nd] = beta.unitaries[d]
            for b, inner in beta.slots(d):
                segments.append((b, pos + inner))
        tail = sum(A.dims[d] for d, _ in alpha.slots(c))
        wt[tail:, tail:] = np.eye(nc - tail)
        order = []
        for b in range(A.num_blocks):
            for sb, start in segments:
                if sb == b:
                    order.extend(range(start, start + A.dims[b]))
        covered = set(order)
        order.extend(i for i in range(nc) if i not in covered)
        vs.append((alpha.unitaries[c] @ wt)[:, order])
    return Endomorphism(A, m, vs)


def power(alpha, n):
    """``alpha^n`` in canonical form (cached on ``alpha``)."""
    if n < 0:
        raise ValidationError("power must be nonnegative")
    if n == 0:
        return Endomorphism.identity(alpha.algebra)
    if n == 1:
        return alpha
    if n not in alpha._powers:
        alpha._powers[n] = compose(alpha, power(alpha, n - 1))
    return alpha._powers[n]


def image_unit(alpha, n=1):
    """The projection ``alpha^n(1)``."""
    return AlgElement(alpha.algebra, alpha.image_unit_packed(n))


def support_power(alpha, n):
    """Boolean ``n``-th power of the support of the multiplicity matrix."""
    B = alpha.algebra.num_blocks
    s = np.eye(B, dtype=bool)
    step = alpha.support()
    for _ in range(n):
        s = (step.astype(int) @ s.astype(int)) > 0
    return s


def kernel_ideal(alpha):
    """``ker alpha``: blocks whose column of the multiplicity matrix vanishes."""
    m = alpha.multiplicity
    return BlockIdeal(alpha.algebra, [b for b in range(m.shape[1]) if not m[:, b].any()])


def preimage_ideal(alpha, S):
    """``alpha^{-1}(S)``: blocks all of whose targets lie in ``S``."""
    m = alpha.multiplicity
    members = [b for b in range(m.shape[1])
               if all(c in S.members for c in np.nonzero(m[:, b])[0])]
    return BlockIdeal(alpha.algebra, members)


def invariant(alpha, S):
    """Whether ``alpha(S)`` is contained in ``S``."""
    return S.members <= preimage_ideal(alpha, S).members


def kernel_union(alpha):
    """Stabilized union of ``ker alpha^n`` (it stabilizes within B steps)."""
    B = alpha.algebra.num_blocks
    prev = None
    for n in range(1, B + 2):
        cur = frozenset(b for b in range(B) if not support_power(alpha, n)[:, b].any())
        if cur == prev:
            break
        prev = cur
    return BlockIdeal(alpha.algebra, prev)


def restrict(alpha, S):
    """The endomorphism induced on ``A/S`` by an ``alpha``-invariant ideal ``S``."""
    if not invariant(alpha, S):
        raise DomainError(f"ideal {S.sorted()} is not invariant under the endomorphism")
    q = QuotientMap(S)
    keep = q.kept
    m = alpha.multiplicity[np.ix_(keep, keep)]
    target = q.target
    if target.degenerate:
        return _ZeroEndomorphism(target), q
    vs = [alpha.unitaries[c] for c in keep]
    pad = [int(alpha.pad[c]) for c in keep]
    return Endomorphism(target, m, vs, pad), q


class _ZeroEndomorphism(Endomorphism):
    """Endomorphism of the zero algebra."""

    def __init__(self, algebra):
        self.algebra = algebra
        self.multiplicity = np.zeros((0, 0), dtype=np.int64)
        self.pad = np.zeros(0, dtype=np.int64)
        self.unitaries = ()
        self._matrix = np.zeros((0, 0), dtype=complex)
        self._powers = {}
        self._mat_powers = [np.zeros((0, 0), dtype=complex)]
        self._unit_images = [np.zeros(0, dtype=complex)]


# -- dual partial map ---------------------------------------------------------

@dataclass(frozen=True)
class DualSystem:
    """Partial map on the spectrum ``{0, ..., B-1}`` of the algebra.

    ``partial_map[c] = b`` means the irreducible representation of block
    ``c`` composed with ``alpha`` is the one of block ``b``.
    """

    num_points: int
    partial_map: dict

    @property
    def domain(self):
        return sorted(self.partial_map)

    @property
    def range(self):
        return sorted(set(self.partial_map.values()))

    def periodic_points(self):
        out = set()
        for start in self.partial_map:
            x = start
            for _ in range(self.num_points):
                if x not in self.partial_map:
                    break
                x = self.partial_map[x]
                if x == start:
                    out.add(start)
                    break
        return sorted(out)


def dual_partial_map(alpha):
    """The dual partial map; rows must have at most one entry, equal to 1."""
    m = alpha.multiplicity
    pmap = {}
    for c in range(m.shape[0]):
        nz = np.nonzero(m[c])[0]
        if len(nz) > 1 or (len(nz) == 1 and m[c, nz[0]] != 1):
            raise UnsupportedPatternError(
                f"row {c} of the multiplicity matrix is {m[c].tolist()}; the dual map is "
                "only defined when every row has at most one entry equal to 1. "
                "Use coefficient_algebra on a representation instead.")
        if len(nz) == 1 and alpha.pad[c] == 0:
            pmap[c] = int(nz[0])
    return DualSystem(m.shape[0], pmap)


def topologically_free(d):
    """On a finite discrete spectrum: no periodic points at all."""
    return not d.periodic_points()
