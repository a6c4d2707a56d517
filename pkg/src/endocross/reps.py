"""Concrete representations ``(pi, U, H)`` by finite matrices.

Two sources of representations are provided:

* :func:`toeplitz_truncation` cuts the Toeplitz representation on
  ``sum_n alpha^n(1) H_0`` after level ``M``. The truncated shift is an exact
  compression of the infinite one, so ``Psi`` of any element is the exact
  compression of the infinite-dimensional operator. Identities that involve
  moving past level ``M`` are asserted only on a *window* of lower levels.
* :func:`exact_representation` builds a genuine finite-dimensional
  representation from block multiplicities, when one exists.

:func:`amplify` forms the two-sided ``l^2(Z)`` amplification used to obtain
representations with property (*).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import config
from .algebra import BlockIdeal
from .endo import kernel_ideal
from .errors import ResourceError, ValidationError
from .matcalc import DiagonalPart


def _opnorm(x):
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))


class Representation:
    """A representation of the system ``endo`` on ``C^H``.

    Parameters
    ----------
    endo : Endomorphism
    pi : callable
        Maps a packed element of ``endo.algebra`` to an ``(H, H)`` matrix.
    U : (H, H) array
    window : (H, H) projection or None
        Subspace on which identities are asserted; identity when ``None``.
    levels : int array of length H or None
        Level of each basis vector (Toeplitz-type representations).
    depth : int or None
        Largest matrix index of M(A) the representation can evaluate
        meaningfully; ``None`` for exact representations.
    """

    def __init__(self, endo, pi, U, window=None, levels=None, depth=None, name=""):
        U = np.asarray(U, dtype=complex)
        H = U.shape[0]
        if U.shape != (H, H):
            raise ValidationError("U must be square")
        self.endo = endo
        self.H = H
        self._pi = pi
        self.U = U
        self.exact = window is None
        self.window = np.eye(H, dtype=complex) if window is None else np.asarray(window, dtype=complex)
        self.levels = None if levels is None else np.asarray(levels, dtype=int)
        self.depth = depth
        self.name = name
        self._upow = [np.eye(H, dtype=complex)]
        self._units = None

    @classmethod
    def from_unit_images(cls, endo, images, U, window=None, levels=None, depth=None, name=""):
        """Build from images of the packed basis, ``images[idx]`` of shape (H, H)."""
        images = np.asarray(images, dtype=complex)
        if images.shape[0] != endo.algebra.size:
            raise ValidationError(
                f"need images of all {endo.algebra.size} matrix units, got {images.shape[0]}")
        rep = cls(endo, lambda x: np.tensordot(x, images, axes=(0, 0)), U, window, levels, depth, name)
        rep._units = images
        return rep

    def pi(self, x):
        """Image of an element (AlgElement or packed vector)."""
        data = getattr(x, "data", x)
        return self._pi(np.asarray(data, dtype=complex))

    def unit_images(self):
        if self._units is None:
            S = self.endo.algebra.size
            self._units = np.array([self.pi(np.eye(S, dtype=complex)[i]) for i in range(S)])
        return self._units

    def u_power(self, n):
        while len(self._upow) <= n:
            self._upow.append(self.U @ self._upow[-1])
        return self._upow[n]

    def compress(self, X):
        W = self.window
        return W @ X @ W

    def level_projection(self, upto):
        """Projection onto levels ``0..upto`` (identity for exact representations)."""
        if self.levels is None:
            return np.eye(self.H, dtype=complex)
        return np.diag((self.levels <= upto).astype(complex))


# -- constructions ------------------------------------------------------------------

def toeplitz_truncation(endo, M, window_depth=None):
    """The Toeplitz representation cut after level ``M``.

    Level ``n`` is the range of ``alpha^n(1)`` in ``H_0 = C^{sum n_b}``,
    with ``pi(a)`` acting there as ``alpha^n(a)`` and ``U`` mapping level
    ``n + 1`` into level ``n``. The window covers levels
    ``0..window_depth-1`` (default ``window_depth = M``).
    """
    if M < 0:
        raise ValidationError("truncation level must be nonnegative")
    if window_depth is None:
        window_depth = M
    if not 0 <= window_depth <= M:
        raise ValidationError(f"window depth must lie in 0..{M}")
    A = endo.algebra
    bases = []
    for n in range(M + 1):
        p = A.to_dense(endo.image_unit_packed(n))
        w, v = np.linalg.eigh((p + p.conj().T) / 2)
        bases.append(v[:, w > 0.5])
    sizes = [b.shape[1] for b in bases]
    starts = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    H = int(starts[-1])
    levels = np.concatenate([np.full(s, n) for n, s in enumerate(sizes)]).astype(int)
    U = np.zeros((H, H), dtype=complex)
    for n in range(M):
        U[starts[n]:starts[n + 1], starts[n + 1]:starts[n + 2]] = bases[n].conj().T @ bases[n + 1]

    def pi(x):
        out = np.zeros((H, H), dtype=complex)
        y = x
        for n in range(M + 1):
            if n:
                y = endo.apply_packed(y)
            if sizes[n]:
                s = slice(starts[n], starts[n + 1])
                out[s, s] = bases[n].conj().T @ A.to_dense(y) @ bases[n]
        return out

    window = np.diag((levels < window_depth).astype(complex))
    rep = Representation(endo, pi, U, window, levels, depth=M, name=f"toeplitz(M={M})")
    rep.level_bases = bases
    rep.level_starts = starts
    return rep


def amplify(rep, L):
    """Truncated ``l^2(Z)`` amplification over slots ``-L..L``.

    ``pi`` acts diagonally and ``U = S (x) U~`` with ``S`` the shift moving
    slot ``p`` to ``p + 1``. The window keeps slots ``-L+1..L-1`` and, inside
    each slot, the window of ``rep``.
    """
    if L < 1:
        raise ValidationError("amplification needs L >= 1")
    slots = 2 * L + 1
    S = np.zeros((slots, slots))
    for p in range(slots - 1):
        S[p + 1, p] = 1.0
    I = np.eye(slots)
    U = np.kron(S, rep.U)
    inner = np.zeros(slots)
    inner[1:-1] = 1.0
    window = np.kron(np.diag(inner), rep.window)
    levels = None if rep.levels is None else np.tile(rep.levels, slots)
    base_pi = rep.pi
    out = Representation(rep.endo, lambda x: np.kron(I, base_pi(x)), U, window, levels,
                         rep.depth, name=f"amplify({rep.name}, L={L})")
    out.exact = False
    out.slots = slots
    return out


def check_multiplicities(endo, mu):
    """``r_b = sum_c mu_c m_cb``; the construction needs ``r <= mu``."""
    mu = np.asarray(mu, dtype=int)
    r = endo.multiplicity.T @ mu
    return r


def exact_representation(endo, mu):
    """Finite-dimensional representation with block ``b`` repeated ``mu[b]`` times.

    ``U`` embeds ``pi o alpha`` into ``pi``; this needs, for every block,
    ``r_b = sum_c mu_c m_cb <= mu_b``. The covariance ideal is then the set of
    blocks with ``r_b == mu_b``.
    """
    A = endo.algebra
    mu = np.asarray(mu, dtype=int)
    if mu.shape != (A.num_blocks,) or np.any(mu < 0):
        raise ValidationError("mu must list one nonnegative integer per block")
    r = check_multiplicities(endo, mu)
    if np.any(r > mu):
        b = int(np.argmax(r > mu))
        raise ValidationError(
            f"no exact representation with these multiplicities: block {b} needs {r[b]} > {mu[b]} copies")
    sizes = [A.dims[b] * int(mu[b]) for b in range(A.num_blocks)]
    base = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    H = int(base[-1])
    U = np.zeros((H, H), dtype=complex)
    used = [0] * A.num_blocks
    for c, nc in enumerate(A.dims):
        V = endo.unitaries[c]
        for g in range(int(mu[c])):
            row0 = base[c] + g * nc
            for b, pos in endo.slots(c):
                nb = A.dims[b]
                col0 = base[b] + used[b] * nb
                used[b] += 1
                U[row0:row0 + nc, col0:col0 + nb] = V[:, pos:pos + nb]
    images = np.zeros((A.size, H, H), dtype=complex)
    for b, i, j, idx in A.matrix_units():
        nb = A.dims[b]
        for g in range(int(mu[b])):
            o = base[b] + g * nb
            images[idx, o + i, o + j] = 1.0
    rep = Representation.from_unit_images(endo, images, U, name=f"exact(mu={mu.tolist()})")
    rep.mu = mu
    return rep


def find_multiplicities(endo, max_mu=3, faithful=True):
    """Smallest (in sum) ``mu`` with entries ``<= max_mu`` admitting an exact representation."""
    import itertools
    B = endo.algebra.num_blocks
    lo = 1 if faithful else 0
    best = None
    for mu in itertools.product(range(lo, max_mu + 1), repeat=B):
        mu = np.array(mu)
        if mu.sum() == 0:
            continue
        if np.all(check_multiplicities(endo, mu) <= mu):
            if best is None or mu.sum() < best.sum():
                best = mu
    return best


# -- checks ---------------------------------------------------------------------

def _units(endo):
    A = endo.algebra
    eye = np.eye(A.size, dtype=complex)
    return [(b, i, j, eye[idx]) for b, i, j, idx in A.matrix_units()]


def check_representation(rep):
    """Residuals of the defining identities (windowed where needed)."""
    A = rep.endo.algebra
    units = _units(rep.endo)
    imgs = {(b, i, j): rep.pi(x) for b, i, j, x in units}
    hom = 0.0
    for (b, i, j), x in imgs.items():
        hom = max(hom, _opnorm(x.conj().T - imgs[b, j, i]))
        for k in range(A.dims[b]):
            want = imgs[b, i, k]
            hom = max(hom, _opnorm(x @ imgs[b, j, k] - want))
    unital = _opnorm(rep.pi(A.unit_packed()) - np.eye(rep.H))
    U = rep.U
    UsU = U.conj().T @ U
    cov = 0.0
    comm = 0.0
    for b, i, j, x in units:
        lhs = U @ imgs[b, i, j] @ U.conj().T
        rhs = rep.pi(rep.endo.apply_packed(x))
        cov = max(cov, _opnorm(rep.compress(lhs - rhs)))
        comm = max(comm, _opnorm(rep.compress(UsU @ imgs[b, i, j] - imgs[b, i, j] @ UsU)))
    piso = _opnorm(rep.compress(U @ UsU - U))
    return {
        "homomorphism": hom,
        "unital": unital,
        "covariance": cov,
        "partial_isometry": piso,
        "commutes_with_range": comm,
    }


def iterated_commutators(rep, n_max):
    """``max ||W [U^{*n} U^n, pi(e)] W||`` for ``n = 1..n_max``."""
    out = []
    units = _units(rep.endo)
    for n in range(1, n_max + 1):
        Un = rep.u_power(n)
        P = Un.conj().T @ Un
        worst = 0.0
        for b, i, j, x in units:
            X = rep.pi(x)
            worst = max(worst, _opnorm(rep.compress(P @ X - X @ P)))
        out.append(worst)
    return out


def covariance_ideal(rep, tol=None):
    """Blocks ``b`` with ``W (U^*U - 1) pi(e_b) W = 0``."""
    tol = config.tol() if tol is None else tol
    A = rep.endo.algebra
    UsU = rep.U.conj().T @ rep.U
    members = []
    for b in range(A.num_blocks):
        X = rep.pi(A.unit_packed({b}))
        if _opnorm(rep.compress(UsU @ X - X)) <= tol:
            members.append(b)
    return BlockIdeal(A, members)


def kernel_report(rep, tol=None):
    """The ideals ``I`` and ``J`` of the representation and the identities relating them."""
    tol = config.tol() if tol is None else tol
    A = rep.endo.algebra
    UsU = rep.U.conj().T @ rep.U
    I, ker_pi, ker_pi_alpha = [], [], []
    for b in range(A.num_blocks):
        e = A.unit_packed({b})
        X = rep.pi(e)
        if _opnorm(rep.compress(UsU @ X)) <= tol:
            I.append(b)
        if _opnorm(rep.compress(X)) <= tol:
            ker_pi.append(b)
        if _opnorm(rep.compress(rep.pi(rep.endo.apply_packed(e)))) <= tol:
            ker_pi_alpha.append(b)
    I = BlockIdeal(A, I)
    J = covariance_ideal(rep, tol)
    ker_pi = BlockIdeal(A, ker_pi)
    ker_pi_alpha = BlockIdeal(A, ker_pi_alpha)
    report = {"I": I, "J": J, "ker_pi": ker_pi, "ker_pi_alpha": ker_pi_alpha, "warning": None}
    if ker_pi.is_zero or rep.exact:
        report["I_is_ker_pi_alpha"] = I == ker_pi_alpha
        report["I_meet_J_is_ker_pi"] = (I & J) == ker_pi
    else:
        report["warning"] = "pi is not injective on the window; only inclusions are checked"
        report["I_is_ker_pi_alpha"] = ker_pi_alpha <= I
        report["I_meet_J_is_ker_pi"] = ker_pi <= (I & J)
    return report


def _required_level(a):
    return a.max_index()


def psi_evaluate(rep, a):
    """``Psi(a) = sum U^{*m} pi(a[m, n]) U^n``."""
    if isinstance(a, DiagonalPart):
        a = a.to_element()
    if a.endo is not rep.endo and a.endo != rep.endo:
        raise ValidationError("element and representation belong to different systems")
    need = _required_level(a)
    if rep.depth is not None and need > rep.depth:
        raise ValidationError(
            f"element uses index {need} but the representation is truncated at level "
            f"{rep.depth}; use a truncation level of at least {need}")
    out = np.zeros((rep.H, rep.H), dtype=complex)
    for m, n, x in zip(a.rows, a.cols, a.data):
        out += rep.u_power(int(m)).conj().T @ rep.pi(x) @ rep.u_power(int(n))
    return out


def product_window(rep, a):
    """Projection on which ``Psi(a * b) = Psi(a) Psi(b)`` holds exactly."""
    if rep.levels is None or rep.depth is None:
        return rep.window
    return rep.level_projection(rep.depth - max(a.max_col(), 0))


def psi_product_residual(rep, a, b):
    """``||Q (Psi(a * b) - Psi(a) Psi(b))||`` with ``Q`` from :func:`product_window`."""
    Q = product_window(rep, a)
    return _opnorm(Q @ (psi_evaluate(rep, a @ b) - psi_evaluate(rep, a) @ psi_evaluate(rep, b)))


def required_truncation(*elements):
    """Truncation level that keeps ``Psi`` of all elements and products exact on a nonempty window."""
    need = max(e.max_index() for e in elements) + max(e.max_col() for e in elements) + 1
    return max(need, 1)


# -- norm oracles ------------------------------------------------------------------

def toeplitz_norm_sequence(endo, a, M_cap):
    """``||Psi_M(a)||`` for ``M = 0..M_cap`` from one truncation at ``M_cap``.

    Each ``Psi_M(a)`` is the compression of ``Psi_{M_cap}(a)`` to levels
    ``0..M``. A single-diagonal element is a block shift between levels,
    so its norm is the largest level-block norm; other elements fall back to
    a full singular value computation per ``M``.
    """
    if isinstance(a, DiagonalPart):
        a = a.to_element()
    rep = toeplitz_truncation(endo, M_cap)
    X = psi_evaluate(rep, a)
    st = rep.level_starts
    degs = a.degrees()
    seq = []
    if len(degs) == 1:
        k = degs[0]
        block = {}
        for h in range(M_cap + 1):
            g = h - k
            if 0 <= g <= M_cap:
                block[h] = _opnorm(X[st[g]:st[g + 1], st[h]:st[h + 1]])
        for M in range(M_cap + 1):
            vals = [v for h, v in block.items() if h <= M and h - k <= M]
            seq.append(max(vals, default=0.0))
    else:
        for M in range(M_cap + 1):
            e = st[M + 1]
            seq.append(_opnorm(X[:e, :e]))
    return seq


def toeplitz_norm(endo, a, stop=1e-10, cap=None):
    """Stabilized norm of ``Psi(a)`` over growing Toeplitz truncations.

    Returns ``(value, M, sequence)``. Stabilization is only tested once every
    level touched by the support (plus ``B`` more) is inside the truncation,
    so an early plateau cannot end the search.
    """
    if isinstance(a, DiagonalPart):
        a = a.to_element()
    N = a.max_index()
    cap = N + 50 if cap is None else cap
    seq = toeplitz_norm_sequence(endo, a, cap)
    start = N + endo.algebra.num_blocks + 1
    for M in range(max(start, 1), cap + 1):
        if abs(seq[M] - seq[M - 1]) < stop:
            return seq[M], M, seq
    return seq[cap], cap, seq


def exact_norm(rep, a):
    """Operator norm of ``Psi(a)`` in an exact representation."""
    return _opnorm(psi_evaluate(rep, a))


def windowed_norm(rep, a):
    return _opnorm(rep.compress(psi_evaluate(rep, a)))


# -- correspondence bridge ------------------------------------------------------------

def module_basis(endo):
    """Packed basis ``v_k e_j^T`` of ``X = alpha(1) A`` with ``v_k`` spanning ``alpha(1)_c``."""
    A = endo.algebra
    out = []
    frame = []
    for c, nc in enumerate(A.dims):
        r = nc - int(endo.pad[c])
        V = endo.unitaries[c][:, :r]
        for k in range(r):
            for j in range(nc):
                x = np.zeros(A.size, dtype=complex)
                blk = np.zeros((nc, nc), dtype=complex)
                blk[:, j] = V[:, k]
                x[A.block_slice(c)] = blk.reshape(-1)
                out.append(x)
                if j == 0:
                    frame.append(x)
    return out, frame


def correspondence_bridge(rep, tol=None):
    """Check that ``t(x) = U^* pi(x)`` represents the module ``alpha(1) A``."""
    tol = config.tol() if tol is None else tol
    endo = rep.endo
    A = endo.algebra
    basis, frame = module_basis(endo)
    Us = rep.U.conj().T
    t = [Us @ rep.pi(x) for x in basis]
    inner = 0.0
    for x, tx in zip(basis, t):
        for y, ty in zip(basis, t):
            inner = max(inner, _opnorm(rep.compress(tx.conj().T @ ty - rep.pi(A.mul(A.adj(x), y)))))
    left = right = theta = 0.0
    for b, i, j, e in _units(endo):
        pe = rep.pi(e)
        ae = endo.apply_packed(e)
        for x, tx in zip(basis, t):
            left = max(left, _opnorm(rep.compress(pe @ tx - Us @ rep.pi(A.mul(ae, x)))))
            right = max(right, _opnorm(rep.compress(tx @ pe - Us @ rep.pi(A.mul(x, e)))))
            # phi(a) z = alpha(a) z against theta_{alpha(a), alpha(1)} z = alpha(a) alpha(1)^* z
            one = endo.image_unit_packed(1)
            theta = max(theta, float(np.max(np.abs(A.mul(ae, x) - A.mul(A.mul(ae, A.adj(one)), x)))))
    t_one = Us @ rep.pi(endo.image_unit_packed(1))
    recon = _opnorm(rep.compress(t_one.conj().T - rep.U))
    # covariance ideal seen through the module
    members = []
    for b in range(A.num_blocks):
        e = A.unit_packed({b})
        ae = endo.apply_packed(e)
        acc = np.zeros((rep.H, rep.H), dtype=complex)
        for x in frame:
            acc += Us @ rep.pi(A.mul(ae, x)) @ rep.pi(x).conj().T @ rep.U
        if _opnorm(rep.compress(acc - rep.pi(e))) <= tol:
            members.append(b)
    J_mod = BlockIdeal(A, members)
    J_rep = covariance_ideal(rep, tol)
    return {
        "inner_product": inner,
        "left_action": left,
        "right_action": right,
        "phi_is_rank_one": theta,
        "U_reconstruction": recon,
        "axioms_hold": max(inner, left, right, theta, recon) <= tol,
        "module_covariance_ideal": J_mod,
        "covariance_ideal": J_rep,
        "ideals_agree": J_mod == J_rep,
        "windowed": not rep.exact,
    }


# -- coefficient algebra ---------------------------------------------------------------

@dataclass
class CoefficientAlgebra:
    basis: list
    n_max: int
    iterations: int
    checks: dict

    @property
    def dim(self):
        return len(self.basis)


def _span_add(Q, vecs, tol):
    """Extend an orthonormal column basis ``Q`` by ``vecs``; returns the new basis."""
    if not len(vecs):
        return Q
    M = np.array(vecs).T
    if Q.shape[1]:
        M = M - Q @ (Q.conj().T @ M)
        M = M - Q @ (Q.conj().T @ M)
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    new = u[:, s > tol]
    return np.hstack([Q, new]) if new.shape[1] else Q


def _in_span(Q, x, tol):
    if Q.shape[1] == 0:
        return float(np.linalg.norm(x)) <= tol, float(np.linalg.norm(x))
    r = x - Q @ (Q.conj().T @ x)
    res = float(np.linalg.norm(r))
    return res <= tol, res


def coefficient_algebra(rep, n_max=None, max_iter=50, tol=1e-9):
    """Algebra generated by ``U^{*k} pi(A) U^k`` (``k <= n_max``) and its checks.

    With ``n_max=None`` the depth of a truncated representation is used; for
    exact representations ``k`` grows until new generators add nothing.

    Raises
    ------
    ResourceError
        When the span is still growing after ``max_iter`` closure rounds; the
        error carries the dimension reached.
    """
    H = rep.H
    units = [x for _, _, _, x in _units(rep.endo)]
    if n_max is None:
        n_max = rep.depth if rep.depth is not None else None

    def gens_at(k):
        Uk = rep.u_power(k)
        return [Uk.conj().T @ rep.pi(x) @ Uk for x in units]

    gens = []
    Q = np.zeros((H * H, 0), dtype=complex)
    k = 0
    while True:
        g = gens_at(k)
        before = Q.shape[1]
        Q = _span_add(Q, [m.reshape(-1) for m in g], tol)
        gens.extend(g)
        k += 1
        if n_max is not None:
            if k > n_max:
                break
        elif Q.shape[1] == before or k > 4 * H:
            break
    n_used = k - 1
    it = 0
    while True:
        it += 1
        if it > max_iter:
            raise ResourceError(f"span still growing after {max_iter} rounds (dimension {Q.shape[1]})",
                                partial=Q.shape[1])
        before = Q.shape[1]
        basis = [Q[:, i].reshape(H, H) for i in range(Q.shape[1])]
        prods = [(gm @ b).reshape(-1) for gm in gens for b in basis]
        Q = _span_add(Q, prods, tol)
        if Q.shape[1] == before:
            break
    basis = [Q[:, i].reshape(H, H) for i in range(Q.shape[1])]
    checks = _coefficient_checks(rep, basis, tol)
    return CoefficientAlgebra(basis, n_used, it, checks)


def _coefficient_checks(rep, basis, tol):
    U = rep.U
    Us = U.conj().T
    W = rep.window
    Wb = np.array([(W @ b @ W).reshape(-1) for b in basis]).T
    QW = _span_add(np.zeros((rep.H * rep.H, 0), dtype=complex), list(Wb.T), tol)

    def windowed_member(x):
        return _in_span(QW, (W @ x @ W).reshape(-1), 1e-8)[1]

    up = max((windowed_member(U @ b @ Us) for b in basis), default=0.0)
    down = max((windowed_member(Us @ b @ U) for b in basis), default=0.0)
    UsU = Us @ U
    center = max((_opnorm(W @ (UsU @ b - b @ UsU) @ W) for b in basis), default=0.0)
    member = windowed_member(UsU)
    L = lambda x: Us @ x @ U  # noqa: E731
    t1 = max((_opnorm(W @ (L(U @ b @ Us) - UsU @ b) @ W) for b in basis), default=0.0)
    t2 = 0.0
    for a in basis[:12]:
        for b in basis[:12]:
            t2 = max(t2, _opnorm(W @ (L(U @ a @ Us @ b) - a @ L(b)) @ W))
    return {
        "U_B_Ustar_in_B": up,
        "Ustar_B_U_in_B": down,
        "UstarU_in_B": member,
        "UstarU_central": center,
        "transfer_alpha": t1,
        "transfer_module": t2,
        "all_pass": max(up, down, member) <= 1e-8 and max(center, t1, t2) <= 1e-10,
    }


def algebra_image_dim(rep):
    """Dimension of ``pi(A)`` as a linear space."""
    Q = _span_add(np.zeros((rep.H * rep.H, 0), dtype=complex),
                  [rep.pi(x).reshape(-1) for _, _, _, x in _units(rep.endo)], 1e-9)
    return Q.shape[1]


# -- canonical systems -------------------------------------------------------------------

def extend_to_canonical(rep, can):
    """Representation of ``(A_J, alpha_J)`` from a ``J``-covariant one of ``(A, alpha)``.

    ``pi~(a + b) = U^*U pi(a) + (1 - U^*U) pi(b)`` for ``a`` in the first
    part (a quotient by the kernel) and ``b`` in the second (a quotient by J).
    """
    base = can.base_endo
    if rep.endo is not base and rep.endo != base:
        raise ValidationError("representation is not of the canonical system's base")
    A = base.algebra
    AJ = can.algebra
    UsU = rep.U.conj().T @ rep.U
    comp = np.eye(rep.H) - UsU
    n1 = len(can.first)

    def pi(x):
        a = np.zeros(A.size, dtype=complex)
        b = np.zeros(A.size, dtype=complex)
        for t, c in enumerate(can.first + can.second):
            target = a if t < n1 else b
            target[A.block_slice(c)] = x[AJ.block_slice(t)]
        return UsU @ rep.pi(a) + comp @ rep.pi(b)

    out = Representation(can.endo, pi, rep.U, None if rep.exact else rep.window,
                         rep.levels, rep.depth, name=f"canonical({rep.name})")
    out.exact = rep.exact
    return out


def _span_residual(images, X, W):
    """Distance (Frobenius) from ``W X W`` to the span of ``W Y W`` for ``Y`` in images."""
    Q = _span_add(np.zeros((X.size, 0), dtype=complex), [(W @ y @ W).reshape(-1) for y in images], 1e-10)
    return _in_span(Q, (W @ X @ W).reshape(-1), 0.0)[1]


def covariance_equivalences(rep, tol=1e-9):
    """The four conditions on ``U^*U`` that coincide for faithful representations.

    i) the covariance ideal is ``(ker alpha)^perp``; ii) ``U^*U`` lies in
    ``pi(A)``; iii) in ``pi(Z(A))``; iv) ``U^*U`` is the unit of
    ``pi((ker alpha)^perp)``.
    """
    endo = rep.endo
    A = endo.algebra
    W = rep.window
    perp = kernel_ideal(endo).complement()
    UsU = rep.U.conj().T @ rep.U
    c1 = covariance_ideal(rep, tol) == perp
    r2 = _span_residual([rep.pi(x) for _, _, _, x in _units(endo)], UsU, W)
    r3 = _span_residual([rep.pi(A.unit_packed({b})) for b in range(A.num_blocks)], UsU, W)
    r4 = _opnorm(W @ (UsU - rep.pi(A.unit_packed(perp.members))) @ W)
    out = {
        "covariant": c1,
        "UstarU_in_pi_A": r2 <= tol,
        "UstarU_in_pi_center": r3 <= tol,
        "UstarU_is_unit_of_annihilator": r4 <= tol,
        "residuals": {"pi_A": r2, "pi_center": r3, "unit": r4},
    }
    flags = [out["covariant"], out["UstarU_in_pi_A"], out["UstarU_in_pi_center"],
             out["UstarU_is_unit_of_annihilator"]]
    out["equivalent"] = all(flags) or not any(flags)
    return out


def motivation_homomorphism_residual(rep):
    """How far the extended ``pi~`` is from multiplicative and *-preserving (windowed)."""
    units = _units(rep.endo)
    imgs = {(b, i, j): rep.pi(x) for b, i, j, x in units}
    worst = 0.0
    for (b, i, j), X in imgs.items():
        worst = max(worst, _opnorm(rep.compress(X.conj().T - imgs[b, j, i])))
        for (b2, k, l), Y in imgs.items():
            want = imgs[b, i, l] if (b2 == b and k == j) else np.zeros_like(X)
            worst = max(worst, _opnorm(rep.compress(X @ Y - want)))
    return worst

