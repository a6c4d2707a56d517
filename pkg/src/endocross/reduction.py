"""Reduction of a system by a non-orthogonal ideal.

When ``J`` meets ``ker alpha`` the relations force more of ``A`` to vanish
in the crossed product. The ideals

    J_0 = 0,   J_{n+1} = {a in J : alpha(a) in J_n}

increase to the reduction ideal ``J_inf``; passing to ``A / J_inf`` gives a
system in which the image of ``J`` is orthogonal to the kernel. On block
algebras all of this is exact set arithmetic on block indices. A second,
independent computation runs the same recursion for the module
``X = alpha(1) A`` with numerical linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import BlockIdeal
from .endo import kernel_ideal, kernel_union, preimage_ideal, restrict, support_power


@dataclass
class ReductionResult:
    """Outcome of :func:`reduce`.

    Attributes
    ----------
    chain : list of BlockIdeal
        ``J_0, J_1, ...`` up to the first index after which the chain repeats.
    j_infinity, i_infinity : BlockIdeal
    reduced_endo : Endomorphism
        The endomorphism induced on ``A / J_inf``.
    reduced_ideal : BlockIdeal
        The image of ``J`` in ``A / J_inf``.
    quotient : QuotientMap
    """

    endo: object
    J: BlockIdeal
    chain: list
    j_infinity: BlockIdeal
    i_infinity: BlockIdeal
    reduced_endo: object
    reduced_ideal: BlockIdeal
    quotient: object
    checks: dict = field(default_factory=dict)

    @property
    def degenerate(self):
        """True when the reduced algebra is zero."""
        return self.j_infinity.is_full

    @property
    def reduced_algebra(self):
        return self.quotient.target


def reduction_chain(endo, J):
    """``J_0, J_1, ...`` by the recursion, stopping before the first repeat."""
    chain = [BlockIdeal(endo.algebra, ())]
    while True:
        nxt = J & preimage_ideal(endo, chain[-1])
        if nxt == chain[-1]:
            return chain
        chain.append(nxt)


def closed_form_ideal(endo, J, n):
    """``ker alpha^n`` intersected with ``alpha^{-k}(J)`` for ``k < n``."""
    A = endo.algebra
    B = A.num_blocks
    sup_n = support_power(endo, n)
    members = {b for b in range(B) if not sup_n[:, b].any()}
    for k in range(n):
        sup_k = support_power(endo, k)
        members &= {b for b in range(B) if all(c in J.members for c in np.nonzero(sup_k[:, b])[0])}
    return BlockIdeal(A, members)


def invariant_core(endo, J):
    """Intersection of ``alpha^{-n}(J)`` over all ``n >= 0`` (largest invariant ideal in J)."""
    cur = J
    while True:
        nxt = cur & preimage_ideal(endo, cur)
        if nxt == cur:
            return cur
        cur = nxt


def reduce(endo, J):
    """Reduction ideals, ``J_inf``, ``I_inf`` and the reduced system.

    The chain is computed twice (recursion and closed form) and the two are
    compared; so are the two descriptions of ``J_inf``. The outcomes of these
    comparisons are stored in ``result.checks``.
    """
    chain = reduction_chain(endo, J)
    closed = [closed_form_ideal(endo, J, n) for n in range(len(chain) + 1)]
    j_inf = chain[-1]
    i_inf = kernel_union(endo)
    j_inf_lemma = i_inf & invariant_core(endo, J)
    reduced_endo, q = restrict(endo, j_inf)
    reduced_ideal = q.image_of_ideal(J)
    checks = {
        "closed_form_matches": all(c == d for c, d in zip(chain, closed)) and closed[-1] == j_inf,
        "lemma_matches": j_inf_lemma == j_inf,
        "stabilized_within_blocks": len(chain) - 1 <= endo.algebra.num_blocks,
        "orthogonal_after_reduction": (
            reduced_endo.algebra.degenerate
            or not (reduced_ideal.members & kernel_ideal(reduced_endo).members)),
    }
    return ReductionResult(endo, J, chain, j_inf, i_inf, reduced_endo, reduced_ideal, q, checks)


# -- the module-side recursion --------------------------------------------------

def _orth_basis(vectors, tol=1e-10):
    if not len(vectors):
        return np.zeros((0, 0), dtype=complex)
    M = np.array(vectors).T
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    return u[:, s > tol * max(1.0, s[0] if len(s) else 1.0)]


def system_module_basis(endo):
    """Orthonormal basis (packed columns) of ``X = alpha(1) A``."""
    A = endo.algebra
    one = endo.image_unit_packed(1)
    vecs = []
    for b, i, j, idx in A.matrix_units():
        e = np.zeros(A.size, dtype=complex)
        e[idx] = 1.0
        vecs.append(A.mul(one, e))
    return _orth_basis(vecs)


def module_times_ideal(endo, X, members):
    """Orthonormal basis of ``X S`` for the ideal with the given blocks."""
    A = endo.algebra
    vecs = []
    for col in X.T:
        for b, i, j, idx in A.matrix_units():
            if b not in members:
                continue
            e = np.zeros(A.size, dtype=complex)
            e[idx] = 1.0
            vecs.append(A.mul(col, e))
    return _orth_basis(vecs)


def module_chain(endo, J, steps, tol=1e-9):
    """The recursion ``J_{n+1} = {a in J : phi(a) X in X J_n}`` computed numerically.

    ``phi(a)`` acts on ``X`` by left multiplication with ``alpha(a)``. Block
    ``b`` of ``J`` is admitted when every matrix unit of that block maps the
    basis of ``X`` into ``X J_n``.
    """
    A = endo.algebra
    X = system_module_basis(endo)
    chain = [BlockIdeal(A, ())]
    for _ in range(steps):
        XJ = module_times_ideal(endo, X, chain[-1].members)
        members = set()
        for b in J.members:
            ok = True
            for bb, i, j, idx in A.matrix_units():
                if bb != b:
                    continue
                e = np.zeros(A.size, dtype=complex)
                e[idx] = 1.0
                img = endo.apply_packed(e)
                act = A.mul(img, X.T)  # rows: phi(e) x_k
                resid = act.T - (XJ @ (XJ.conj().T @ act.T) if XJ.size else 0)
                if X.size and np.max(np.abs(resid)) > tol:
                    ok = False
                    break
            if ok:
                members.add(b)
        chain.append(BlockIdeal(A, members))
    return chain


def correspondence_cross_check(endo, J):
    """Whether the module recursion agrees with the closed form at every step."""
    B = endo.algebra.num_blocks
    steps = B + 1
    mod = module_chain(endo, J, steps)
    return all(mod[n] == closed_form_ideal(endo, J, n) for n in range(steps + 1))


def lemma_kernel_union(endo, tol=1e-9):
    """The two descriptions of ``I_inf`` as block sets.

    Returns ``(eventually_zero, tends_to_zero)``: the first from supports of
    powers of the multiplicity matrix, the second from the numerical norms
    ``||alpha^n(e_b)||`` at ``n = 2B``. The images are projections, so the
    norms are 0 or 1 and the threshold is safe.
    """
    A = endo.algebra
    first = kernel_union(endo)
    n = 2 * A.num_blocks
    numeric = [b for b in range(A.num_blocks)
               if A.norm(endo.apply_packed(A.unit_packed({b}), n)) < tol]
    return first, BlockIdeal(A, numeric)


@dataclass
class StaceyResult:
    reduction: ReductionResult
    kernel_union: BlockIdeal
    degenerate: bool
    reduced_injective: bool
    j_infinity_is_kernel_union: bool


def stacey_reduce(endo):
    """Reduction with ``J = A`` (the relations of a unital isometric crossed product)."""
    red = reduce(endo, BlockIdeal.full(endo.algebra))
    ku = kernel_union(endo)
    injective = red.degenerate or kernel_ideal(red.reduced_endo).is_zero
    return StaceyResult(red, ku, red.degenerate, injective, red.j_infinity == ku)
