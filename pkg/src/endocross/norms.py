"""Exact norms in the crossed product C*(A, alpha, J).

For a k-diagonal with entries ``a_0, ..., a_N`` the norm is a finite maximum
of quotient distances of the partial sums

    p_i = sum_{j <= i} alpha^{i-j}(a_j)

namely ``max(d(p_0, J), ..., d(p_N, J), d(p_N, ker alpha))``. Partial sums
beyond ``N`` are images ``alpha^{i-N}(p_N)`` and never raise the maximum.
The seminorm of a general element is the sum of its diagonal norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import BlockIdeal, packed_distance
from .endo import kernel_ideal
from .errors import DomainError, ResourceError, ValidationError
from .matcalc import DiagonalPart, MatElement, Pushforward, adjoint, diagonal, n_k, star


class NormContext:
    """The triple ``(A, alpha, J)`` with ``J`` orthogonal to ``ker alpha``.

    Use :meth:`build` to accept an arbitrary ``J``: it reduces the system by
    the reduction ideal first and maps every element into the reduced system.
    """

    def __init__(self, endo, J):
        if J.algebra != endo.algebra:
            raise ValidationError("ideal and endomorphism live on different algebras")
        I = kernel_ideal(endo)
        clash = J.members & I.members
        if clash:
            raise DomainError(
                f"J is not orthogonal to ker alpha (common blocks {sorted(clash)}); "
                "use NormContext.build to reduce the system first")
        self.endo = endo
        self.J = J
        self.I = I
        self.source = endo
        self.push = None
        self.reduction = None

    @classmethod
    def build(cls, endo, J):
        """Context for any ``J``; non-orthogonal ideals go through the reduced system."""
        if not (J.members & kernel_ideal(endo).members):
            return cls(endo, J)
        from .reduction import reduce
        red = reduce(endo, J)
        push = Pushforward(endo, red.j_infinity)
        if red.degenerate:
            ctx = _DegenerateContext(push.target)
        else:
            ctx = cls(push.target, red.reduced_ideal)
        ctx.source = endo
        ctx.push = push
        ctx.reduction = red
        return ctx

    @property
    def degenerate(self):
        return False

    def prepare(self, a):
        """Map an element of the source system into this context's system."""
        if self.push is None or a.endo is self.endo:
            return a
        return self.push(a)

    def _prepare_diagonal(self, d):
        if self.push is None or d.endo is not self.source:
            return d
        q = self.push.q
        return DiagonalPart(self.push.target, d.k, {n: q.packed(x) for n, x in d.rows.items()})


class _DegenerateContext(NormContext):
    """Context whose reduced algebra is zero: every norm vanishes."""

    def __init__(self, endo):
        self.endo = endo
        self.J = BlockIdeal(endo.algebra, ())
        self.I = BlockIdeal(endo.algebra, ())

    @property
    def degenerate(self):
        return True


def partial_sums(endo, d):
    """Packed partial sums ``p_0, ..., p_N`` of a diagonal (N = last support row)."""
    N = d.support_end
    size = endo.algebra.size
    out = np.zeros((max(N + 1, 0), size), dtype=complex)
    acc = np.zeros(size, dtype=complex)
    for i in range(N + 1):
        acc = endo.apply_packed(acc) if i else acc
        if i in d.rows:
            acc = acc + d.rows[i]
        out[i] = acc
    return out


def diagonal_norm(ctx, d):
    """Norm in C*(A, alpha, J) of the k-diagonal ``d``.

    Negative ``k`` needs no special treatment: the adjoint has the conjugate
    entries, and the distances below are invariant under the involution.
    """
    if not isinstance(d, DiagonalPart):
        raise ValidationError("diagonal_norm expects a DiagonalPart")
    d = ctx._prepare_diagonal(d)
    if ctx.degenerate or d.is_zero():
        return 0.0
    A = ctx.endo.algebra
    p = partial_sums(ctx.endo, d)
    head = packed_distance(A, p, ctx.J.members)
    tail = packed_distance(A, p[-1], ctx.I.members)
    return float(max(np.max(head), tail))


def diagonal_norms(ctx, a):
    """``{k: diagonal_norm}`` over the nonzero diagonals of ``a``."""
    a = ctx.prepare(a)
    if ctx.degenerate:
        return {}
    return {k: diagonal_norm(ctx, diagonal(a, k)) for k in a.degrees()}


def seminorm(ctx, a):
    """The seminorm: sum of the exact norms of all diagonals."""
    return float(sum(diagonal_norms(ctx, a).values()))


@dataclass
class EstimateResult:
    sequence: list
    lower: float
    upper: float
    entries: list


def norm_estimate(ctx, a, k_max, budget=20000):
    """Fourier-coefficient estimates ``r_k`` of the norm of ``a``.

    ``r_k = ||N_0((a a^*)^{2k})||^{1/(4k)}`` for ``k = 1..k_max``. Every
    ``r_k`` lies between the largest diagonal norm of ``a`` and its
    seminorm. Powers are renormalized after each product and the scale is
    tracked in log form, so large ``k`` neither overflows nor underflows.

    Raises
    ------
    ResourceError
        When an intermediate power has more than ``budget`` entries; the
        error's ``partial`` attribute holds the :class:`EstimateResult` so far.
    """
    if k_max < 1:
        raise ValidationError("k_max must be at least 1")
    a = ctx.prepare(a)
    norms = diagonal_norms(ctx, a)
    lower = max(norms.values(), default=0.0)
    upper = float(sum(norms.values()))
    result = EstimateResult([], lower, upper, [])
    if ctx.degenerate or a.is_zero():
        result.sequence = [0.0] * k_max
        return result
    b, log_b = _normalized(star(a, adjoint(a)))
    if b is None:
        result.sequence = [0.0] * k_max
        return result
    sq, log_sq = _normalized(star(b, b))
    log_sq += 2 * log_b
    cur, log_cur = sq, log_sq
    for k in range(1, k_max + 1):
        if k > 1:
            cur, log_step = _normalized(star(cur, sq))
            if cur is None:
                result.sequence.extend([0.0] * (k_max - k + 1))
                break
            log_cur += log_step + log_sq
        if len(cur) > budget:
            raise ResourceError(
                f"power (a a*)^{2 * k} has {len(cur)} entries, over the budget of {budget}",
                partial=result)
        result.entries.append(len(cur))
        val = diagonal_norm(ctx, diagonal(n_k(cur, 0), 0))
        if val <= 0.0:
            result.sequence.append(0.0)
        else:
            result.sequence.append(math.exp((math.log(val) + log_cur) / (4 * k)))
    return result


def _normalized(x):
    """Divide by the largest entry norm; returns ``(x / s, log s)`` or ``(None, 0)``."""
    if x.is_zero():
        return None, 0.0
    s = float(np.max(x.algebra.block_norms(x.data)))
    return x * (1.0 / s), math.log(s)


def main_diagonal(a):
    """Restriction of ``a`` to the entries ``a[m, m]``."""
    sel = a.rows == a.cols
    return MatElement._from_arrays(a.endo, a.rows[sel], a.cols[sel], a.data[sel])


def property_star_gap(ctx, a, rep):
    """``||Psi(diag a)|| - ||Psi(a)||`` in the windowed representation ``rep``.

    A value at or below tolerance means the sample satisfies property (*).
    """
    from .reps import psi_evaluate
    if rep.endo is not ctx.source and rep.endo != ctx.source:
        raise ValidationError("representation and context belong to different systems")
    full = psi_evaluate(rep, a)
    diag = psi_evaluate(rep, main_diagonal(a))
    W = rep.window
    return float(np.linalg.norm(W @ diag @ W, 2) - np.linalg.norm(W @ full @ W, 2))


def tail_domination_gap(ctx, d, extra):
    """Largest excess of the tail terms ``alpha^m(p_N)`` (m = 1..extra) over ``d(p_N, I)``.

    Non-positive values certify that the finite maximum already equals the
    limit over all partial sums.
    """
    d = ctx._prepare_diagonal(d)
    if d.is_zero():
        return 0.0
    A = ctx.endo.algebra
    pN = partial_sums(ctx.endo, d)[-1]
    base = packed_distance(A, pN, ctx.I.members)
    worst = -math.inf
    for m in range(1, extra + 1):
        img = ctx.endo.apply_packed(pN, m)
        worst = max(worst, packed_distance(A, img, ctx.J.members) - base,
                    packed_distance(A, img, ctx.I.members) - base)
    return worst
