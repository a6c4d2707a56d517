import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from endocross import kernels
from endocross.algebra import BlockIdeal
from endocross.errors import DomainError
from endocross.matcalc import (
    MatElement, adjoint, diagonal, diagonals, dot, gauge, lambda_shift, n_k, pushforward,
    random_element, restrict_to_diagonal, star, u_power,
)
from endocross.norms import NormContext, seminorm
from endocross.sampling import random_system

seeds = st.integers(0, 2**31 - 1)


def dense_star(a, b):
    """a . sum_j Lambda^j(b) + sum_{j>=1} Lambda^j(a) . b, truncated where terms vanish."""
    depth = max(a.max_index(), b.max_index()) + 1
    acc = dot(a, b)
    for j in range(1, depth + 1):
        acc = acc + dot(a, lambda_shift(b, j)) + dot(lambda_shift(a, j), b)
    return acc


def _sample(seed, max_index=3):
    rng = np.random.default_rng(seed)
    e = random_system(rng)
    return e, rng, [random_element(e, rng, max_index=max_index) for _ in range(3)]


def test_u_conjugation(sys2):
    A = sys2.algebra
    u, us = MatElement.u(sys2), MatElement.u_star(sys2)
    a = MatElement.embed(sys2, A.element([2, 5]))
    assert (u @ a @ us).max_abs_diff(MatElement.embed(sys2, A.element([2, 2]))) < 1e-14
    back = us @ a @ u
    assert back.support() == [(1, 1)]
    assert np.allclose(back.entry(1, 1).data, [2, 5])


def test_u_conjugation_non_unital():
    from endocross.algebra import FdAlgebra
    from endocross.endo import Endomorphism
    e = Endomorphism(FdAlgebra([2, 1]), [[0, 1], [0, 0]])
    a = MatElement.embed(e, e.algebra.element([[[1, 2], [3, 4]], 7]))
    back = MatElement.u_star(e) @ a @ MatElement.u(e)
    one = e.image_unit_packed(1)
    A = e.algebra
    assert np.allclose(back.entry(1, 1).data, A.mul(A.mul(one, a.entry(0, 0).data), one))


def test_left_unit_on_row_zero(sys1, rng):
    one = MatElement.embed(sys1, sys1.algebra.one())
    a = random_element(sys1, rng, max_index=2)
    row0 = MatElement._from_arrays(sys1, a.rows[a.rows == 0], a.cols[a.rows == 0], a.data[a.rows == 0])
    assert (one @ row0).max_abs_diff(row0) < 1e-14


def test_u_adjoint_and_diagonals(sys1):
    u = MatElement.u(sys1)
    assert adjoint(u).support() == [(1, 0)]
    assert np.allclose(adjoint(u).entry(1, 0).data, sys1.image_unit_packed(1))
    assert diagonal(u, 1).rows.keys() == {0}
    assert diagonal(u, 0).is_zero() and diagonal(u, -1).is_zero()


def test_lambda_examples(sys2, rng):
    a = sys2.algebra.element([3, 7])
    lam = lambda_shift(MatElement.embed(sys2, a))
    assert lam.support() == [(1, 1)] and np.allclose(lam.entry(1, 1).data, [3, 3])
    assert lambda_shift(MatElement.zero(sys2)).is_zero()


def test_pushforward_example(sys1):
    x = MatElement.embed(sys1, sys1.algebra.element([1, 2, 3]))
    y = pushforward(x, BlockIdeal(sys1.algebra, [0, 1]))
    assert np.allclose(y.entry(0, 0).data, [3])
    with pytest.raises(DomainError):
        pushforward(x, BlockIdeal(sys1.algebra, [1]))
    assert pushforward(x, BlockIdeal(sys1.algebra, [])).max_abs_diff(x) == 0.0


def test_gauge_domain(sys1):
    with pytest.raises(DomainError):
        gauge(MatElement.u(sys1), 1.1)
    z = np.exp(0.3j)
    assert gauge(MatElement.u(sys1), z).max_abs_diff(MatElement.u(sys1) * z) < 1e-15


@pytest.mark.parametrize("backend", kernels.available_backends())
@given(seed=seeds)
def test_star_matches_dense_definition(backend, seed):
    prev = kernels.use_backend(backend)
    try:
        e, rng, (a, b, _) = _sample(seed)
        assert star(a, b).max_abs_diff(dense_star(a, b)) < 1e-10
    finally:
        kernels.use_backend(prev)


@given(seeds)
def test_backends_agree(seed):
    if len(kernels.available_backends()) < 2:
        pytest.skip("compiled kernel not built")
    e, rng, (a, b, _) = _sample(seed)
    prev = kernels.use_backend("python")
    try:
        p = star(a, b)
        kernels.use_backend("compiled")
        c = star(a, b)
    finally:
        kernels.use_backend(prev)
    assert p.max_abs_diff(c) < 1e-13


@given(seeds)
def test_associativity(seed):
    e, rng, (a, b, c) = _sample(seed)
    assert ((a @ b) @ c).max_abs_diff(a @ (b @ c)) < 1e-9


@given(seeds)
def test_involution_is_anti_multiplicative(seed):
    e, rng, (a, b, _) = _sample(seed)
    assert adjoint(a @ b).max_abs_diff(adjoint(b) @ adjoint(a)) < 1e-10
    assert adjoint(adjoint(a)).max_abs_diff(a) == 0.0
    u = MatElement.u(e)
    assert adjoint(u @ a).max_abs_diff(adjoint(a) @ adjoint(u)) < 1e-10


@given(seeds)
def test_compression_invariant(seed):
    e, rng, (a, b, _) = _sample(seed)
    A = e.algebra
    for x in (a, b, a @ b, adjoint(a), a + b):
        for (i, j), v in x.entries().items():
            w = A.mul(A.mul(e.image_unit_packed(i), v.data), e.image_unit_packed(j))
            assert np.allclose(w, v.data, atol=1e-12)


@given(seeds)
def test_lambda_respects_standard_product(seed):
    e, rng, (a, b, _) = _sample(seed)
    assert lambda_shift(dot(a, b)).max_abs_diff(dot(lambda_shift(a), lambda_shift(b))) < 1e-10


@given(seeds, st.integers(-2, 2), st.integers(-2, 2))
def test_grading(seed, k, l):
    rng = np.random.default_rng(seed)
    e = random_system(rng)
    a = random_element(e, rng, max_index=3, diagonal_k=k)
    b = random_element(e, rng, max_index=3, diagonal_k=l)
    prod = a @ b
    assert set(prod.degrees()) <= {k + l}
    assert set(adjoint(a).degrees()) <= {-k}


@given(seeds)
def test_diagonals_reassemble(seed):
    e, rng, (a, _, _) = _sample(seed)
    acc = MatElement.zero(e)
    for k, d in diagonals(a).items():
        acc = acc + d.to_element()
        assert d.to_element().max_abs_diff(restrict_to_diagonal(a, k)) < 1e-12
    assert acc.max_abs_diff(a) < 1e-12


@given(seeds)
def test_unique_presentation(seed):
    e, rng, (a, _, _) = _sample(seed)
    acc = MatElement.zero(e)
    for k in a.degrees():
        ak = n_k(a, k)
        term = ak @ u_power(e, k) if k >= 0 else u_power(e, k) @ ak
        acc = acc + term
    assert acc.max_abs_diff(a) < 1e-12


@given(seeds)
def test_gauge_is_an_action(seed):
    e, rng, (a, _, _) = _sample(seed)
    z, w = np.exp(1j * rng.uniform(0, 6.3)), np.exp(1j * rng.uniform(0, 6.3))
    assert gauge(gauge(a, z), w).max_abs_diff(gauge(a, z * w)) < 1e-12
    emb = MatElement.embed(e, e.algebra.random_element(rng))
    assert gauge(emb, z).max_abs_diff(emb) == 0.0
    ctx = NormContext(e, BlockIdeal(e.algebra, []))
    assert seminorm(ctx, gauge(a, z)) == pytest.approx(seminorm(ctx, a), abs=1e-12)


@given(seeds)
def test_pushforward_is_multiplicative(seed):
    from endocross.endo import kernel_union
    e, rng, (a, b, _) = _sample(seed)
    S = kernel_union(e)
    assert pushforward(a @ b, S).max_abs_diff(pushforward(a, S) @ pushforward(b, S)) < 1e-10


def test_pruning(sys2):
    tiny = MatElement(sys2, {(0, 0): np.array([1e-16, 0])})
    assert tiny.is_zero()
    a = MatElement.embed(sys2, sys2.algebra.element([1, 2]))
    assert (a + a * -1).is_zero()
