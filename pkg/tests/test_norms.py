import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polytor.errors import BudgetExceeded, DimensionMismatch, DomainError
from polytor.norms import (
    SamplerSpec,
    coefficient_lq,
    cube_lq,
    cube_lq_exact,
    cube_lq_mc,
    eval_at,
    l2_parseval,
    lq_norm,
    lq_norm_grid,
    lq_norm_mc,
    sup_grid,
)
from polytor.poly import MultiIndex, VPoly, WalshPoly
from polytor.spaces import NormedSpace

E1 = NormedSpace.euclidean(1)
E2 = NormedSpace.euclidean(2)
L1 = NormedSpace.ellp(1, 2)
x = np.array([3.0, 4j])  # euclidean norm 5


def mono(*e):
    return MultiIndex.from_exponents(e)


def scalar(terms, n):
    return VPoly(n, {mono(*e): np.array([c]) for e, c in terms.items()}, E1)


def random_poly(space, n, deg, rng, terms=5):
    out = {}
    for _ in range(terms):
        e = tuple(int(v) for v in rng.integers(0, deg + 1, size=n))
        out[mono(*e)] = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return VPoly(n, out, space)


# --- evaluation -------------------------------------------------------------------


def test_eval_at_examples():
    assert np.allclose(eval_at(VPoly(2, {mono(0, 0): x}, E2), [1j, -1]), x)
    assert np.allclose(eval_at(VPoly(1, {mono(1): x}, E2), [-1]), -x)
    assert np.allclose(eval_at(VPoly(2, {mono(1, 2): x}, E2), [1j, 1j]), -1j * x)


def test_eval_at_guards():
    P = VPoly(2, {mono(1, 0): x}, E2)
    with pytest.raises(DimensionMismatch):
        eval_at(P, [1])
    with pytest.raises(DomainError):
        eval_at(P, [1, 0.5])


# --- Parseval and grids -------------------------------------------------------------


def test_parseval_examples():
    P = VPoly(2, {mono(1, 0): np.array([3.0, 0]), mono(0, 1): np.array([0, 4.0])}, E2)
    est = l2_parseval(P)
    assert est.value == 5 and est.error == "exact" and est.method == "parseval"
    assert l2_parseval(VPoly(1, {mono(3): x}, E2)).value == pytest.approx(5)
    with pytest.raises(DomainError):
        l2_parseval(VPoly(1, {mono(1): x}, L1))


def test_grid_constant_integrand():
    P = VPoly(1, {mono(1): x}, L1)
    for q in (1, 1.5, 3):
        assert lq_norm_grid(P, q, 2).value == pytest.approx(7)


def test_grid_fourth_moment_of_two_variables():
    # |z1 + z2|^4 = |1 + w|^4 has mean 1 + 4 + 1 = 6 (constant, |w|^2 and |w^2| terms: 1 + 4|w|^2 + |w|^4)
    est = lq_norm_grid(scalar({(1, 0): 1, (0, 1): 1}, 2), 4, 8)
    assert est.value == pytest.approx(6**0.25, rel=1e-14)
    assert est.error == "exact"


def test_grid_first_moment_against_closed_form():
    # E|1 + e^{it}| = 4/pi
    est = lq_norm_grid(scalar({(1, 0): 1, (0, 1): 1}, 2), 1, 512)
    assert est.error == "grid_gap_unknown"
    assert est.value == pytest.approx(4 / math.pi, abs=1e-5)


def test_grid_matches_parseval_on_random_instances():
    rng = np.random.default_rng(7)
    for _ in range(30):
        P = random_poly(E2, int(rng.integers(1, 4)), 3, rng)
        exact = l2_parseval(P).value
        grid = lq_norm_grid(P, 2, 2 * P.max_var_degree() + 1)
        assert grid.value == pytest.approx(exact, rel=1e-12)
        assert lq_norm_grid(P, 2, 64).value == pytest.approx(exact, rel=1e-9)


def test_grid_budget_guard():
    P = VPoly(10, {mono(*([1] * 10)): x}, E2)
    with pytest.raises(BudgetExceeded):
        lq_norm_grid(P, 2, 8**9)
    with pytest.raises(DomainError):
        lq_norm_grid(P, 0.5, 4)


def test_grid_uses_active_variables_only():
    P = VPoly(40, {MultiIndex(40, [(3, 1)]): x, MultiIndex(40, [(17, 2)]): x}, E2)
    assert lq_norm_grid(P, 2, 8).value == pytest.approx(math.sqrt(50))


def test_zero_polynomial():
    Z = VPoly(2, {}, E2)
    assert lq_norm_grid(Z, 2, 4).value == 0
    assert cube_lq_exact(WalshPoly(2, {}, E2), 1).value == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([(1, 2), (2, 3), (1.5, 4), (3, 8)]))
def test_grid_moments_increase_with_q(seed, qs):
    # power means over one fixed discrete measure are nondecreasing in q
    rng = np.random.default_rng(seed)
    P = random_poly(L1, 2, 2, rng)
    lo, hi = (lq_norm_grid(P, q, 12).value for q in qs)
    assert lo <= hi * (1 + 1e-12)


# --- Monte Carlo --------------------------------------------------------------------


def test_mc_constant_polynomial_is_exact():
    est = lq_norm_mc(VPoly(1, {mono(0): x}, E2), 3, SamplerSpec(seed=1, samples=500))
    assert est.value == pytest.approx(5, rel=1e-14)
    assert est.halfwidth == 0
    # a monomial has constant modulus: the interval collapses to roundoff
    est = lq_norm_mc(VPoly(1, {mono(2): x}, E2), 3, SamplerSpec(seed=1, samples=500))
    assert est.value == pytest.approx(5, rel=1e-14) and est.halfwidth < 1e-12


def test_mc_is_deterministic_per_seed():
    P = random_poly(L1, 3, 2, np.random.default_rng(1))
    a = lq_norm_mc(P, 1.5, SamplerSpec(seed=42, samples=4000))
    b = lq_norm_mc(P, 1.5, SamplerSpec(seed=42, samples=4000))
    c = lq_norm_mc(P, 1.5, SamplerSpec(seed=43, samples=4000))
    assert a == b and a.value != c.value


def test_mc_interval_covers_parseval_value():
    rng = np.random.default_rng(11)
    hits = 0
    for i in range(40):
        P = random_poly(E2, 3, 2, rng)
        mc = lq_norm_mc(P, 2, SamplerSpec(seed=i, samples=20000))
        assert mc.error == "ci" and mc.level == 0.99
        hits += abs(mc.value - l2_parseval(P).value) <= mc.halfwidth
    assert hits >= 37  # 99% intervals; 40 draws


def test_mc_agrees_with_fine_grid():
    P = random_poly(L1, 2, 2, np.random.default_rng(5))
    mc = lq_norm_mc(P, 1, SamplerSpec(seed=9, samples=40000))
    grid = lq_norm_grid(P, 1, 128)
    assert abs(mc.value - grid.value) <= 2 * mc.halfwidth


def test_lq_norm_falls_back_to_mc():
    P = VPoly(12, {mono(*([1] * 12)): x, mono(*([0] * 11 + [1])): x}, E2)
    est = lq_norm(P, 2, M=8, spec=SamplerSpec(seed=0, samples=2000))
    assert est.method == "mc"


# --- cube -----------------------------------------------------------------------------


def brute_cube(W, q):
    vals = []
    for eps in itertools.product([-1, 1], repeat=W.n_vars):
        v = sum(c * np.prod([eps[i - 1] for i in A]) for A, c in W.terms.items())
        vals.append(W.space.norm(np.asarray(v, dtype=complex) + W.space.zero()) ** q)
    return float(np.mean(vals)) ** (1 / q)


def test_cube_examples():
    W = WalshPoly(2, {(1,): x}, E2)
    for q in (1, 2, 3.5):
        assert cube_lq_exact(W, q).value == pytest.approx(5)
    W2 = WalshPoly(2, {(1,): x, (2,): x}, E2)
    assert cube_lq_exact(W2, 2).value == pytest.approx(5 * math.sqrt(2))
    W3 = WalshPoly(2, {(1,): np.array([1.0]), (2,): np.array([1.0])}, E1)
    assert cube_lq_exact(W3, 1).value == pytest.approx(1.0)


def test_cube_matches_brute_force():
    rng = np.random.default_rng(2)
    for _ in range(15):
        n = int(rng.integers(1, 6))
        terms = {}
        for d in range(n + 1):
            for A in itertools.combinations(range(1, n + 1), d):
                if rng.random() < 0.5:
                    terms[A] = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        W = WalshPoly(n, terms, L1)
        for q in (1, 2, 3):
            assert cube_lq_exact(W, q).value == pytest.approx(brute_cube(W, q), rel=1e-12)


def test_cube_guard_and_fallback():
    W = WalshPoly(30, {tuple(range(1, 31)): x, (1,): x}, E2)
    with pytest.raises(BudgetExceeded):
        cube_lq_exact(W, 2)
    est = cube_lq(W, 2, SamplerSpec(seed=0, samples=4000))
    assert est.method.startswith("cube_mc")
    assert abs(est.value - 5 * math.sqrt(2)) <= est.halfwidth + 1e-9


def test_cube_mc_constant():
    est = cube_lq_mc(WalshPoly(3, {(2,): x}, E2), 2, SamplerSpec(samples=100))
    assert est.value == pytest.approx(5) and est.halfwidth == 0


# --- sup ------------------------------------------------------------------------------


def test_sup_examples():
    assert sup_grid(VPoly(1, {mono(0): x}, E2), 4).value == pytest.approx(5)
    assert sup_grid(scalar({(1,): 1}, 1), 16, "torus").value == pytest.approx(1)
    Q = scalar({(1, 0): 1, (0, 1): 1j}, 2)
    assert sup_grid(Q, 99, "cube").value == pytest.approx(math.sqrt(2))
    assert sup_grid(Q, 5, "box").value == pytest.approx(math.sqrt(2))
    with pytest.raises(DomainError):
        sup_grid(Q, 4, "ball")


def test_coefficient_lq():
    assert coefficient_lq([3, 4], 2) == pytest.approx(5)
    assert coefficient_lq([3, 4], 1, [1, 0.5]) == pytest.approx(5)
    assert coefficient_lq([], 2) == 0
