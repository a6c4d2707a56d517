import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from endocross.algebra import BlockIdeal, FdAlgebra
from endocross.canonical import build_canonical, build_katsura, canonical_checks, compare
from endocross.endo import Endomorphism
from endocross.sampling import random_automorphism, random_ideal, random_system

from conftest import ideal

seeds = st.integers(0, 2**31 - 1)


def test_sys1_annihilator_ideal(sys1):
    can = build_canonical(sys1, ideal(sys1, 1, 2))
    assert list(can.algebra.dims) == [1, 1, 1]
    assert can.first == [1, 2] and can.second == [0]
    # alpha_J((y, z) + (x)) = ((z, z) + (y))
    x = can.algebra.element([2, 3, 5])
    assert np.allclose(can.endo.apply_packed(x.data), [3, 3, 2])
    assert can.kernel == BlockIdeal(can.algebra, [2])
    assert np.allclose(can.kernel_unit.data, [0, 0, 1])
    checks = canonical_checks(can)
    assert all(v for k, v in checks.items() if k != "extension_residual")


def test_automorphism_full_ideal(rng):
    e = random_automorphism(rng)
    can = build_canonical(e, BlockIdeal.full(e.algebra))
    assert can.second == []
    assert can.endo == e


def test_sys1_full_ideal_reduces_to_point(sys1):
    can = build_canonical(sys1, BlockIdeal.full(sys1.algebra))
    assert list(can.algebra.dims) == [1]
    assert can.endo.multiplicity.tolist() == [[1]]


def test_degenerate():
    nil = Endomorphism(FdAlgebra([1, 1]), [[0, 1], [0, 0]])
    can = build_canonical(nil, BlockIdeal.full(nil.algebra))
    assert can.degenerate
    assert build_katsura(nil, BlockIdeal.full(nil.algebra)).degenerate


def test_katsura_sys2(sys2):
    kp = build_katsura(sys2, ideal(sys2))
    assert list(kp.algebra.dims) == [1, 1, 1]
    rep = compare(kp)
    assert rep["iota2_isomorphism"] and not rep["iota1_isomorphism"]
    assert rep["diagram_commutes"] and rep["iota1_criterion_holds"]
    kp2 = build_katsura(sys2, ideal(sys2, 0))
    assert compare(kp2)["iota1_isomorphism"]


@given(seeds)
def test_canonical_invariants(seed):
    rng = np.random.default_rng(seed)
    e = random_system(rng)
    can = build_canonical(e, random_ideal(rng, e.algebra))
    if can.degenerate:
        return
    checks = canonical_checks(can)
    assert checks["kernel_is_second_part"]
    assert checks["extension_residual"] <= 1e-12
    assert checks["image_in_embedded_copy"]
    assert checks["embed_injective"]
    assert checks["annihilator_of_kernel_is_first_part"]
    assert checks["kernel_unit_is_projection"]


@given(seeds)
def test_katsura_invariants(seed):
    rng = np.random.default_rng(seed)
    e = random_system(rng)
    kp = build_katsura(e, random_ideal(rng, e.algebra))
    if kp.degenerate:
        return
    rep = compare(kp)
    assert rep["iota1_injective"] and rep["iota2_injective"]
    assert rep["diagram_commutes"]
    assert rep["iota2_isomorphism"]
    assert rep["iota1_criterion_holds"]


@given(seeds)
def test_idempotence(seed):
    rng = np.random.default_rng(seed)
    e = random_system(rng)
    can = build_canonical(e, random_ideal(rng, e.algebra))
    if can.degenerate:
        return
    again = build_canonical(can.endo, can.covariance_ideal)
    assert list(again.algebra.dims) == list(can.algebra.dims)
    assert np.array_equal(again.endo.multiplicity, can.endo.multiplicity)
    assert again.embed.isomorphism
