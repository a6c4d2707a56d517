"""The canonical system (A_J, alpha_J) and Katsura's pullback A_omega.

Both are again block algebras, and all maps between them send each target
block to a copy of one source block. :class:`BlockMap` records this as an
index list, which makes injectivity and bijectivity combinatorial questions.

Block order in ``A_J``: the blocks of ``A / ker alpha`` first, then those of
``A / J``. Block order in ``A_omega``: all blocks of ``A``, then one extra copy
of every block that lies outside both ``ker alpha`` and ``J``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import AlgElement, BlockIdeal, FdAlgebra
from .endo import Endomorphism, kernel_ideal
from .reduction import reduce


class BlockMap:
    """*-homomorphism that fills target block ``t`` with source block ``source_of[t]``."""

    def __init__(self, source, target, source_of):
        self.source = source
        self.target = target
        self.source_of = tuple(int(s) for s in source_of)
        if len(self.source_of) != target.num_blocks:
            raise ValueError("one source block per target block is required")
        for t, s in enumerate(self.source_of):
            if source.dims[s] != target.dims[t]:
                raise ValueError(f"block sizes differ for target {t} <- source {s}")
        self.index = np.concatenate(
            [np.arange(source.block_slice(s).start, source.block_slice(s).stop) for s in self.source_of]
        ) if self.source_of else np.zeros(0, dtype=int)

    def packed(self, x):
        return np.asarray(x)[..., self.index]

    def __call__(self, a):
        return AlgElement(self.target, self.packed(a.data))

    @property
    def injective(self):
        return set(self.source_of) == set(range(self.source.num_blocks))

    @property
    def isomorphism(self):
        return self.injective and len(self.source_of) == self.source.num_blocks

    def compose(self, inner):
        """``self o inner``."""
        return BlockMap(inner.source, self.target, [inner.source_of[s] for s in self.source_of])

    def to_dict(self):
        return {"source_of": list(self.source_of)}


@dataclass
class CanonicalSystem:
    """``(A_J, alpha_J)`` together with the embedding of (the reduced) ``A``.

    ``first`` and ``second`` list, for each block of ``A_J``, the block of the
    reduced algebra it comes from.
    """

    base_endo: object
    base_ideal: BlockIdeal
    algebra: FdAlgebra
    endo: object
    embed: BlockMap
    kernel_unit: AlgElement
    first: list
    second: list
    reduction: object
    degenerate: bool = False
    checks: dict = field(default_factory=dict)

    @property
    def kernel(self):
        n1 = len(self.first)
        return BlockIdeal(self.algebra, range(n1, n1 + len(self.second)))

    @property
    def covariance_ideal(self):
        """``(ker alpha_J)^perp``: the first part."""
        return BlockIdeal(self.algebra, range(len(self.first)))


def _reduced(endo, J):
    red = reduce(endo, J)
    if red.j_infinity.is_zero:
        return red, endo, J
    return red, red.reduced_endo, red.reduced_ideal


def _copy_rows(endo, rows, col_pos, ncols):
    """Multiplicity rows of ``endo`` for target blocks ``rows``, columns re-indexed."""
    m = np.zeros((len(rows), ncols), dtype=int)
    for r, c in enumerate(rows):
        for b in np.nonzero(endo.multiplicity[c])[0]:
            m[r, col_pos[b]] = endo.multiplicity[c, b]
    return m


def build_canonical(endo, J):
    """Construct the canonical system of the triple ``(A, alpha, J)``.

    A ``J`` that meets ``ker alpha`` is handled by reducing first; a
    degenerate reduction returns a result with ``degenerate=True`` and a zero
    algebra.
    """
    red, base, Jr = _reduced(endo, J)
    if red.degenerate:
        zero = FdAlgebra([], allow_empty=True)
        return CanonicalSystem(base, Jr, zero, None, None, AlgElement(zero, np.zeros(0)),
                               [], [], red, degenerate=True)
    A = base.algebra
    K = kernel_ideal(base)
    first = [c for c in range(A.num_blocks) if c not in K.members]
    second = [c for c in range(A.num_blocks) if c not in Jr.members]
    AJ = FdAlgebra([A.dims[c] for c in first + second])
    col_pos = {b: i for i, b in enumerate(first)}
    nJ = len(first) + len(second)
    m = np.vstack([_copy_rows(base, first, col_pos, nJ), _copy_rows(base, second, col_pos, nJ)])
    vs = [base.unitaries[c] for c in first + second]
    pad = [int(base.pad[c]) for c in first + second]
    alpha_J = Endomorphism(AJ, m, vs, pad)
    embed = BlockMap(A, AJ, first + second)
    unit = AJ.unit_packed(set(range(len(first), nJ)))
    return CanonicalSystem(base, Jr, AJ, alpha_J, embed, AlgElement(AJ, unit), first, second, red)


def canonical_checks(can, tol=1e-12):
    """Defining properties of a canonical system, as a dict of booleans and residuals."""
    if can.degenerate:
        return {"degenerate": True}
    AJ = can.algebra
    ker = kernel_ideal(can.endo)
    A = can.base_endo.algebra
    worst = 0.0
    for b, i, j, idx in A.matrix_units():
        e = A.matrix_unit(b, i, j)
        lhs = can.endo.apply_packed(can.embed.packed(e.data))
        rhs = can.embed.packed(can.base_endo.apply_packed(e.data))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    image_in_embed = True
    for b, i, j, idx in AJ.matrix_units():
        img = can.endo.apply_packed(AJ.matrix_unit(b, i, j).data)
        # candidate preimage: read every block of A off one of its copies
        y = np.zeros(A.size, dtype=complex)
        for t, s in enumerate(can.embed.source_of):
            y[A.block_slice(s)] = img[AJ.block_slice(t)]
        if np.max(np.abs(can.embed.packed(y) - img), initial=0.0) > tol:
            image_in_embed = False
    unit = can.kernel_unit
    return {
        "kernel_is_second_part": ker == can.kernel,
        "kernel_unit_is_projection": bool(np.allclose(AJ.mul(unit.data, unit.data), unit.data)),
        "kernel_unit_spans_kernel": ker == BlockIdeal(AJ, [b for b in range(AJ.num_blocks)
                                                           if np.any(unit.data[AJ.block_slice(b)])]),
        "extension_residual": worst,
        "extension_ok": worst <= tol,
        "image_in_embedded_copy": image_in_embed,
        "embed_injective": can.embed.injective,
        "annihilator_of_kernel_is_first_part": ker.complement() == can.covariance_ideal,
    }


@dataclass
class KatsuraPullback:
    """``A_omega`` with ``iota1 : A -> A_omega`` and ``iota2 : A_omega -> A_J``.

    Here ``A`` is the reduced algebra. ``extra`` lists the blocks of ``A``
    that get a second copy (outside both the kernel and ``J``).
    """

    base_endo: object
    base_ideal: BlockIdeal
    algebra: FdAlgebra
    endo: object
    iota1: BlockMap
    iota2: BlockMap
    extra: list
    canonical: CanonicalSystem
    degenerate: bool = False


def build_katsura(endo, J):
    """Build the pullback model; reduces first when ``J`` meets the kernel."""
    can = build_canonical(endo, J)
    if can.degenerate:
        zero = can.algebra
        return KatsuraPullback(can.base_endo, can.base_ideal, zero, None, None, None, [], can, True)
    base, Jr = can.base_endo, can.base_ideal
    A = base.algebra
    K = kernel_ideal(base)
    extra = [c for c in range(A.num_blocks) if c not in K.members and c not in Jr.members]
    B = A.num_blocks
    Aw = FdAlgebra(list(A.dims) + [A.dims[c] for c in extra])
    col_pos = {b: b for b in range(B)}
    m = np.vstack([_copy_rows(base, list(range(B)), col_pos, Aw.num_blocks),
                   _copy_rows(base, extra, col_pos, Aw.num_blocks)])
    rows = list(range(B)) + extra
    alpha_w = Endomorphism(Aw, m, [base.unitaries[c] for c in rows], [int(base.pad[c]) for c in rows])
    iota1 = BlockMap(A, Aw, rows)
    # iota2: first part of A_J <- the A-copy of that block; second part <- the
    # A-copy for kernel blocks and the extra copy for the rest
    extra_pos = {c: B + i for i, c in enumerate(extra)}
    src = [c for c in can.first]
    for c in can.second:
        src.append(c if c in K.members else extra_pos[c])
    iota2 = BlockMap(Aw, can.algebra, src)
    return KatsuraPullback(base, Jr, Aw, alpha_w, iota1, iota2, extra, can)


def _map_residual(f, g, source):
    """Largest entry difference of two linear maps on the matrix units of ``source``."""
    worst = 0.0
    for b, i, j, idx in source.matrix_units():
        e = np.zeros(source.size, dtype=complex)
        e[idx] = 1.0
        worst = max(worst, float(np.max(np.abs(f(e) - g(e)), initial=0.0)))
    return worst


def compare(kp, can=None, tol=1e-12):
    """Injectivity, diagram commutation and isomorphism criteria for the pullback."""
    can = can or kp.canonical
    if kp.degenerate:
        return {"degenerate": True}
    base = kp.base_endo
    A = base.algebra
    K = kernel_ideal(base)
    sq1 = _map_residual(lambda x: kp.iota1.packed(base.apply_packed(x)),
                        lambda x: kp.endo.apply_packed(kp.iota1.packed(x)), A)
    sq2 = _map_residual(lambda x: kp.iota2.packed(kp.endo.apply_packed(x)),
                        lambda x: can.endo.apply_packed(kp.iota2.packed(x)), kp.algebra)
    tri = _map_residual(lambda x: kp.iota2.packed(kp.iota1.packed(x)), can.embed.packed, A)
    j_is_annihilator = kp.base_ideal == K.complement()
    return {
        "iota1_injective": kp.iota1.injective,
        "iota2_injective": kp.iota2.injective,
        "iota1_isomorphism": kp.iota1.isomorphism,
        "iota2_isomorphism": kp.iota2.isomorphism,
        "J_is_kernel_annihilator": j_is_annihilator,
        "iota1_criterion_holds": kp.iota1.isomorphism == j_is_annihilator,
        "square_alpha_residual": sq1,
        "square_alpha_J_residual": sq2,
        "triangle_residual": tri,
        "diagram_commutes": max(sq1, sq2, tri) <= tol,
    }
