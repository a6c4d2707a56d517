"""Acceptance suite: one PASS/FAIL line per criterion.

Run directly (``python3 tests/test_acceptance.py``) or under pytest with
``-s`` to see the lines. Tolerances and runtime limits are pinned below.
"""

import time

import numpy as np
import pytest

from endocross import reps
from endocross.algebra import BlockIdeal, FdAlgebra
from endocross.canonical import build_canonical, build_katsura, canonical_checks, compare
from endocross.endo import Endomorphism, kernel_ideal, kernel_union
from endocross.matcalc import MatElement, diagonal, random_element, star
from endocross.norms import NormContext, diagonal_norm, diagonal_norms, norm_estimate, property_star_gap, seminorm
from endocross.reduction import (correspondence_cross_check, lemma_kernel_union, reduce,
                                 stacey_reduce)
from endocross.sampling import random_automorphism, random_ideal, random_system

SEED = 7

ASSOC_TOL, ASSOC_TIME = 1e-9, 30.0
PSI_TOL, PSI_TIME = 1e-9, 60.0
ORACLE_TOL, AUTO_TOL, ORACLE_TIME = 1e-8, 1e-10, 120.0
RELATION_TOL = 1e-12
REDUCTION_TIME = 30.0
CANONICAL_TOL = 1e-12
ESTIMATE_REL, SANDWICH_SLACK = 0.05, 1e-9
STAR_TOL = 1e-8


def _sys1():
    return Endomorphism(FdAlgebra([1, 1, 1]), [[0, 1, 0], [0, 0, 1], [0, 0, 1]])


def _sys2():
    return Endomorphism(FdAlgebra([1, 1]), [[1, 0], [1, 0]])


def _orthogonal_ideal(rng, e):
    K = kernel_ideal(e)
    return BlockIdeal(e.algebra, [b for b in range(e.algebra.num_blocks)
                                  if b not in K.members and rng.random() < 0.5])


def check_1():
    rng = np.random.default_rng(SEED)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(500):
        e = random_system(rng)
        a, b, c = (random_element(e, rng, 2) for _ in range(3))
        worst = max(worst, star(star(a, b), c).max_abs_diff(star(a, star(b, c))))
    dt = time.perf_counter() - t0
    return worst < ASSOC_TOL and dt < ASSOC_TIME, f"max residual {worst:.2e}, {dt:.1f} s"


def check_2():
    rng = np.random.default_rng(SEED + 1)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        e = random_system(rng)
        a, b = random_element(e, rng, 2), random_element(e, rng, 2)
        r = reps.toeplitz_truncation(e, reps.required_truncation(a, b, star(a, b)))
        worst = max(worst, reps.psi_product_residual(r, a, b))
    dt = time.perf_counter() - t0
    return worst < PSI_TOL and dt < PSI_TIME, f"max residual {worst:.2e}, {dt:.1f} s"


def check_3():
    rng = np.random.default_rng(SEED + 2)
    t0 = time.perf_counter()
    worst = worst_auto = 0.0
    for _ in range(100):
        e = random_system(rng)
        k = int(rng.integers(-2, 3))
        a = random_element(e, rng, 2, diagonal_k=k)
        value, _, _ = reps.toeplitz_norm(e, a)
        exact = diagonal_norm(NormContext(e, BlockIdeal(e.algebra, ())), diagonal(a, k))
        worst = max(worst, abs(value - exact))
    for _ in range(100):
        e = random_automorphism(rng)
        r = reps.exact_representation(e, np.ones(e.algebra.num_blocks, dtype=int))
        k = int(rng.integers(-2, 3))
        a = random_element(e, rng, 2, diagonal_k=k)
        exact = diagonal_norm(NormContext(e, BlockIdeal.full(e.algebra)), diagonal(a, k))
        worst_auto = max(worst_auto, abs(reps.exact_norm(r, a) - exact))
    dt = time.perf_counter() - t0
    ok = worst < ORACLE_TOL and worst_auto < AUTO_TOL and dt < ORACLE_TIME
    return ok, f"Toeplitz {worst:.2e}, automorphic {worst_auto:.2e}, {dt:.1f} s"


def check_4():
    e = _sys2()
    A = e.algebra
    # pi(a) - U* pi(alpha(a)) U with a = (1, 0) in J = {b1}
    x = MatElement(e, {(0, 0): A.element([1, 0]), (1, 1): A.element([-1, -1])})
    killed = seminorm(NormContext(e, BlockIdeal(A, [0])), x)
    kept = seminorm(NormContext(e, BlockIdeal(A, [])), x)
    ok = abs(killed) <= RELATION_TOL and abs(kept - 1.0) <= RELATION_TOL
    return ok, f"J={{b1}}: {killed!r}, J=0: {kept!r}"


def _reduction_samples():
    rng = np.random.default_rng(SEED + 4)
    return [(e, random_ideal(rng, e.algebra)) for e in (random_system(rng, twist=False) for _ in range(200))]


def check_5():
    t0 = time.perf_counter()
    bad = 0
    for e, J in _reduction_samples():
        red = reduce(e, J)
        if not (correspondence_cross_check(e, J) and red.checks["closed_form_matches"]
                and red.checks["stabilized_within_blocks"]):
            bad += 1
    dt = time.perf_counter() - t0
    return bad == 0 and dt < REDUCTION_TIME, f"{bad} mismatches in 200, {dt:.1f} s"


def check_6():
    bad = 0
    systems = [e for e, _ in _reduction_samples()] + [_sys1(), _sys2()]
    for e in systems:
        first, second = lemma_kernel_union(e)
        if first != second:
            bad += 1
    for e, J in _reduction_samples():
        if not reduce(e, J).checks["lemma_matches"]:
            bad += 1
    return bad == 0, f"{bad} mismatches over {len(systems)} systems"


def check_7():
    rng = np.random.default_rng(SEED + 6)
    bad_can = 0
    worst = 0.0
    for _ in range(100):
        e = random_system(rng)
        can = build_canonical(e, random_ideal(rng, e.algebra))
        if can.degenerate:
            continue
        ch = canonical_checks(can, CANONICAL_TOL)
        worst = max(worst, ch["extension_residual"])
        if not (ch["kernel_is_second_part"] and ch["kernel_unit_is_projection"]
                and ch["kernel_unit_spans_kernel"] and ch["extension_ok"]):
            bad_can += 1
    tested = bad_eq = 0
    while tested < 60:
        e = random_system(rng, max_dim=2)
        mu = reps.find_multiplicities(e, 3)
        if mu is None:
            continue
        tested += 1
        r = reps.exact_representation(e, mu)
        if not reps.covariance_equivalences(r)["equivalent"]:
            bad_eq += 1
            continue
        x = reps.extend_to_canonical(r, build_canonical(e, reps.covariance_ideal(r)))
        eq = reps.covariance_equivalences(x)
        if not (eq["covariant"] and eq["equivalent"]):
            bad_eq += 1
    ok = bad_can == 0 and bad_eq == 0
    return ok, f"canonical failures {bad_can}, extension {worst:.2e}, equivalence failures {bad_eq}/{tested}"


def check_8():
    rng = np.random.default_rng(SEED + 7)
    bad = 0
    both = {True: 0, False: 0}
    for i in range(100):
        e = random_system(rng)
        K = kernel_ideal(e)
        J = K.complement() if i % 2 == 0 else random_ideal(rng, e.algebra)
        kp = build_katsura(e, J)
        if kp.degenerate:
            continue
        c = compare(kp, tol=CANONICAL_TOL)
        both[c["J_is_kernel_annihilator"]] += 1
        if not (c["iota1_injective"] and c["iota2_injective"] and c["diagram_commutes"]
                and c["iota2_isomorphism"] and c["iota1_criterion_holds"]):
            bad += 1
    ok = bad == 0 and both[True] > 0 and both[False] > 0
    return ok, f"{bad} failures; J = annihilator in {both[True]}, otherwise {both[False]}"


def check_9():
    rng = np.random.default_rng(SEED + 8)
    worst_rel = 0.0
    violations = 0
    for _ in range(40):
        e = random_system(rng, max_blocks=2, max_dim=2)
        ctx = NormContext(e, _orthogonal_ideal(rng, e))
        k = int(rng.integers(-2, 3))
        a = random_element(e, rng, 2, diagonal_k=k)
        exact = diagonal_norm(ctx, diagonal(a, k))
        r16 = norm_estimate(ctx, a, 16).sequence[-1]
        if exact > 0:
            worst_rel = max(worst_rel, abs(r16 - exact) / exact)
        elif r16 > SANDWICH_SLACK:
            worst_rel = np.inf
    for _ in range(40):
        e = random_system(rng, max_blocks=2, max_dim=2)
        ctx = NormContext.build(e, random_ideal(rng, e.algebra))
        a = random_element(e, rng, 2)
        est = norm_estimate(ctx, a, 6)
        per = diagonal_norms(ctx, a)
        lo, hi = max(per.values(), default=0.0), sum(per.values())
        violations += sum(not (lo - SANDWICH_SLACK <= r <= hi + SANDWICH_SLACK) for r in est.sequence)
    ok = worst_rel <= ESTIMATE_REL and violations == 0
    return ok, f"max relative error of r_16 {worst_rel:.2e}, sandwich violations {violations}"


def check_10():
    rng = np.random.default_rng(SEED + 9)
    worst_gap = -np.inf
    worst_diff = 0.0
    for _ in range(200):
        e = random_system(rng, max_blocks=2, max_dim=2)
        ctx = NormContext(e, BlockIdeal(e.algebra, ()))
        a = random_element(e, rng, 2)
        amp = reps.amplify(reps.toeplitz_truncation(e, 4), 2)
        worst_gap = max(worst_gap, property_star_gap(ctx, a, amp))
        # a deeper truncation seen through the same window
        other = reps.amplify(reps.toeplitz_truncation(e, 7, window_depth=4), 2)
        worst_diff = max(worst_diff, abs(reps.windowed_norm(amp, a) - reps.windowed_norm(other, a)))
    ok = worst_gap <= STAR_TOL and worst_diff < STAR_TOL
    return ok, f"max gap {worst_gap:.2e}, amplification disagreement {worst_diff:.2e}"


def check_11():
    st = stacey_reduce(_sys1())
    red = st.reduction
    shape_ok = (red.j_infinity.sorted() == [0, 1] and list(red.reduced_endo.algebra.dims) == [1]
                and red.reduced_endo.multiplicity.tolist() == [[1]] and st.reduced_injective)
    rng = np.random.default_rng(SEED + 10)
    bad = 0
    fired = 0
    for _ in range(200):
        e = random_system(rng)
        s = stacey_reduce(e)
        fired += s.degenerate
        if s.degenerate != kernel_union(e).is_full:
            bad += 1
    return shape_ok and bad == 0 and fired > 0, (
        f"SYS1 J_inf {red.j_infinity.sorted()}, reduced blocks {list(red.reduced_endo.algebra.dims)}; "
        f"degenerate {fired}/200, mismatches {bad}")


CHECKS = [check_1, check_2, check_3, check_4, check_5, check_6,
          check_7, check_8, check_9, check_10, check_11]


def _line(n, fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  ({detail}; total {time.perf_counter() - t0:.1f} s)"
    print(line)
    return ok


@pytest.mark.parametrize("n", range(1, len(CHECKS) + 1))
def test_criterion(n):
    assert _line(n, CHECKS[n - 1])


if __name__ == "__main__":
    results = [_line(n, fn) for n, fn in enumerate(CHECKS, 1)]
    raise SystemExit(0 if all(results) else 1)
