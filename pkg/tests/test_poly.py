import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polytor.errors import DimensionMismatch, DomainError, FactorizationError, NotHomogeneous, NotTetrahedral
from polytor.poly import (
    DirichletPoly,
    MultiIndex,
    VPoly,
    WalshPoly,
    bohr_lift,
    bohr_push,
    combinatorial_identity_check,
    combinatorial_triple_sum,
    factorize,
    homogeneous_part,
    is_tetrahedral,
    omega,
    parity_decompose,
    parity_label,
    poly_from_json,
    prime_table,
    reassemble,
    stirling_ratio,
    stirling_ratio_exact,
    subset_index,
    tetra_to_walsh,
    walsh_to_tetra,
)
from polytor.spaces import NormedSpace

E2 = NormedSpace.euclidean(2)
x = np.array([1.0, 2j])
y = np.array([-1.5, 0.5])
w = np.array([0.25j, 3.0])


def mono(*exps):
    return MultiIndex.from_exponents(exps)


def trial_division(n):
    """Independent factorization oracle."""
    out, d = {}, 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# --- indices -----------------------------------------------------------------


def test_multi_index_basics():
    a = mono(2, 0, 1)
    assert a.degree == 3 and a.exponents == (2, 0, 1) and len(a) == 3
    assert a == (2, 0, 1)
    assert a[0] == 2 and a[1] == 0
    assert not a.is_tetrahedral() and mono(1, 0, 1).is_tetrahedral()
    with pytest.raises(DimensionMismatch):
        MultiIndex(2, [(5, 1)])
    with pytest.raises(DomainError):
        MultiIndex(2, [(0, -1)])


def test_multi_index_order_is_degree_then_dense_lex():
    idx = [mono(*e) for e in itertools.product(range(3), repeat=3)]
    assert sorted(idx) == sorted(idx, key=lambda a: (a.degree, a.exponents))


def test_subset_index():
    assert subset_index([3, 1]) == (1, 3)
    assert subset_index([2, 2, 1]) == (1, 2)
    with pytest.raises(DomainError):
        subset_index([0, 2])
    with pytest.raises(DimensionMismatch):
        subset_index([4], n=3)


def test_zero_coefficients_dropped():
    P = VPoly(2, {mono(1, 0): x, mono(0, 1): np.zeros(2)}, E2)
    assert len(P) == 1
    assert VPoly(2, {mono(0, 1): np.zeros(2)}, E2).is_zero()


def test_coefficients_are_read_only():
    P = VPoly(1, {mono(1): x}, E2)
    with pytest.raises(ValueError):
        P.terms[mono(1)][0] = 5


def test_coefficient_dimension_checked():
    with pytest.raises(DimensionMismatch):
        VPoly(1, {mono(1): np.ones(3)}, E2)


# --- primes and the Bohr transform ---------------------------------------------


def test_factorize_examples():
    assert factorize(12, 2) == (2, 1)
    assert factorize(1, 3) == (0, 0, 0)
    assert factorize(30, 3) == (1, 1, 1)


def test_factorize_names_offending_prime():
    with pytest.raises(FactorizationError) as info:
        factorize(14, 3)
    assert info.value.prime == 7


def test_omega_examples():
    assert [omega(1), omega(12), omega(64)] == [0, 3, 6]


def test_prime_table_against_trial_division():
    t = prime_table()
    assert t.first(10) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert t.prime(78497) == 999983  # pi(10^6) = 78498
    for n in [2, 97, 360, 999983, 2 * 999983, 10**6]:
        assert t.factor(n) == trial_division(n)


def test_bohr_lift_example():
    D = DirichletPoly({1: x, 2: y, 6: w}, E2)
    P = bohr_lift(D, 2)
    assert P == VPoly(2, {mono(0, 0): x, mono(1, 0): y, mono(1, 1): w}, E2)
    assert bohr_push(P) == D


def test_bohr_lift_constant():
    P = bohr_lift(DirichletPoly({1: x}, E2), 4)
    assert P.degree() == 0 and len(P) == 1


def test_bohr_lift_large_prime_is_sparse():
    D = DirichletPoly({999983: x, 2 * 999983: y}, E2)
    P = bohr_lift(D, 78498)
    assert P.n_vars == 78498 and P.active_vars() == [0, 78497]
    assert bohr_push(P) == D


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 10**4), min_size=1, max_size=8, unique=True))
def test_bohr_round_trip_and_degree(support):
    D = DirichletPoly({n: x * (i + 1) for i, n in enumerate(support)}, E2)
    P = bohr_lift(D, 1229)  # pi(10^4)
    assert bohr_push(P) == D
    assert bohr_lift(bohr_push(P), 1229) == P
    for a, _ in P:
        n = 1
        for p, e in zip(prime_table().first(P.n_vars), a.exponents):
            n *= p**e
        assert omega(n) == a.degree == sum(trial_division(n).values())


# --- homogeneous parts and the Walsh bridge --------------------------------------


def test_homogeneous_part_examples():
    P = VPoly(2, {mono(1, 0): x, mono(1, 1): y}, E2)
    assert homogeneous_part(P, 1) == VPoly(2, {mono(1, 0): x}, E2)
    assert homogeneous_part(P, 5).is_zero()
    with pytest.raises(DomainError):
        homogeneous_part(P, -1)


def test_is_tetrahedral_examples():
    assert is_tetrahedral(VPoly(2, {mono(1, 1): x}, E2))
    assert not is_tetrahedral(VPoly(2, {mono(2, 0): x}, E2))
    assert is_tetrahedral(VPoly(2, {mono(0, 0): x}, E2))


def test_walsh_bridge_examples():
    P = VPoly(3, {mono(1, 0, 1): x}, E2)
    assert tetra_to_walsh(P) == WalshPoly(3, {(1, 3): x}, E2)
    assert tetra_to_walsh(VPoly(3, {}, E2)).is_zero()
    with pytest.raises(NotTetrahedral):
        tetra_to_walsh(VPoly(1, {mono(2): x}, E2))


poly_terms = st.dictionaries(
    st.tuples(*[st.integers(0, 3)] * 3), st.tuples(st.floats(-5, 5), st.floats(-5, 5)), max_size=10
)


def build(terms, tetra=False):
    out = {}
    for e, (re, im) in terms.items():
        if tetra:
            e = tuple(min(v, 1) for v in e)
        out[mono(*e)] = np.array([re + 1j * im, im - re])
    return VPoly(3, out, E2)


@settings(max_examples=80, deadline=None)
@given(poly_terms)
def test_homogeneous_parts_partition(terms):
    P = build(terms)
    merged = {}
    for m in range(P.degree() + 1):
        merged.update(homogeneous_part(P, m).terms)
    assert VPoly(3, merged, E2) == P


@settings(max_examples=80, deadline=None)
@given(poly_terms)
def test_walsh_bridge_is_bijection_on_coefficients(terms):
    P = build(terms, tetra=True)
    W = tetra_to_walsh(P)
    assert walsh_to_tetra(W) == P
    left = sorted(tuple(v) for _, v in P)
    right = sorted(tuple(v) for _, v in W)
    assert left == right


@settings(max_examples=60, deadline=None)
@given(poly_terms)
def test_json_round_trip(terms):
    P = build(terms)
    assert poly_from_json(json.loads(json.dumps(P.to_json()))) == P
    W = tetra_to_walsh(build(terms, tetra=True))
    assert poly_from_json(json.loads(json.dumps(W.to_json()))) == W
    D = bohr_push(P)
    assert poly_from_json(json.loads(json.dumps(D.to_json()))) == D


# --- parity decomposition ------------------------------------------------------


def test_parity_all_even():
    lab = parity_label(mono(2), 2)
    assert (lab.A, lab.k, lab.l, lab.beta, lab.gamma) == ((), 0, 0, (1,), (0,))


def test_parity_all_odd():
    lab = parity_label(mono(1, 1), 2)
    assert (lab.A, lab.k, lab.l, lab.beta, lab.gamma) == ((1, 2), 1, 1, (0, 0), (0, 0))


def test_parity_mixed_degree_four():
    P = VPoly(2, {mono(3, 1): x, mono(2, 2): y}, E2)
    dec = parity_decompose(P)
    assert set(dec.parts) == {(1, 2), ()}
    assert dec.parts[(1, 2)][2] == VPoly(2, {mono(3, 1): x}, E2)
    assert dec.parts[()][0] == VPoly(2, {mono(2, 2): y}, E2)
    by_alpha = {lab.alpha: lab for lab in dec.labels}
    assert by_alpha[mono(3, 1)].gamma == (1, 0) and by_alpha[mono(3, 1)].beta == (0, 0)
    assert by_alpha[mono(2, 2)].beta == (1, 1)


def test_parity_odd_degree():
    lab = parity_label(mono(3, 0, 2), 5)
    # one odd exponent: |A| = 2k+1 with k = 0, sum over A = 2l+1 with l = 1
    assert (lab.A, lab.k, lab.l) == ((1,), 0, 1)
    assert lab.beta == (0, 0, 1) and lab.gamma == (1, 0, 0)


def test_parity_rejects_non_homogeneous():
    with pytest.raises(NotHomogeneous):
        parity_decompose(VPoly(2, {mono(1, 0): x, mono(1, 1): y}, E2))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.data())
def test_parity_reconstruction(m, n, data):
    pool = [c for c in itertools.combinations_with_replacement(range(n), m)]
    picks = data.draw(st.lists(st.sampled_from(pool), min_size=1, max_size=6, unique=True))
    terms = {}
    for j, c in enumerate(picks):
        e = [0] * n
        for i in c:
            e[i] += 1
        terms[mono(*e)] = x * (j + 1)
    P = VPoly(n, terms, E2)
    dec = parity_decompose(P, m)
    assert dec.flatten() == P
    assert dec.parity == ("even" if m % 2 == 0 else "odd")
    seen = set()
    for lab in dec.labels:
        assert reassemble(lab) == lab.alpha
        assert len(lab.A) == 2 * lab.k + (m % 2)
        assert lab.beta.degree == m // 2 - lab.l and lab.gamma.degree == lab.l - lab.k
        assert all(lab.beta[i - 1] == 0 for i in lab.A)
        assert all(lab.gamma[i] == 0 for i in range(n) if i + 1 not in lab.A)
        key = (lab.A, lab.l, lab.beta, lab.gamma)
        assert key not in seen
        seen.add(key)
    # P(eps z) = sum_A eps_A P_A(z) at a random sign/point
    rng = np.random.default_rng(m * 10 + n)
    eps = rng.choice([-1.0, 1.0], size=n)
    z = np.exp(2j * np.pi * rng.random(n))
    lhs = sum(v * np.prod((eps * z) ** np.array(a.exponents)) for a, v in P)
    rhs = 0
    for A, PA in dec.signed_parts().items():
        sign = np.prod([eps[i - 1] for i in A]) if A else 1.0
        rhs = rhs + sign * sum(v * np.prod(z ** np.array(a.exponents)) for a, v in PA)
    assert np.allclose(lhs, rhs, atol=1e-9)


# --- combinatorics ---------------------------------------------------------------


def count_by_bitmask(n, m, k):
    """Independent oracle: hits of A = {1..m} by k-subsets B with |A & B| = 1."""
    A = (1 << m) - 1
    return sum(1 for B in range(1 << n) if bin(B).count("1") == k and bin(A & B).count("1") == 1)


def test_combinatorial_examples():
    assert combinatorial_identity_check(2, 1, 1) == (1, 1)
    assert combinatorial_identity_check(4, 2, 2) == (4, 4)
    assert combinatorial_identity_check(4, 3, 3) == (0, 0)  # k-1 > n-m
    with pytest.raises(DomainError):
        combinatorial_identity_check(3, 0, 1)


def test_combinatorial_identity_matches_bitmask_oracle():
    for n in range(1, 9):
        for m in range(1, n + 1):
            for k in range(1, n + 1):
                lhs, rhs = combinatorial_identity_check(n, m, k)
                assert lhs == rhs == count_by_bitmask(n, m, k)


def test_triple_sum_regroups_to_weighted_sum():
    n, m, k = 5, 2, 3
    rng = np.random.default_rng(3)
    v = {A: Fraction(int(rng.integers(-9, 10))) for A in itertools.combinations(range(1, n + 1), m)}
    assert combinatorial_triple_sum(n, m, k, v) == m * math.comb(n - m, k - 1) * sum(v.values())


def test_stirling_examples():
    assert stirling_ratio(4, 2, 2) == 1.5
    assert all(stirling_ratio(n, 1, n) == 1 for n in range(1, 10))
    with pytest.raises(DomainError):
        stirling_ratio(5, 2, 2)


def test_stirling_bounds_up_to_forty():
    for n in range(1, 41):
        for k in range(1, n + 1):
            if n % k == 0:
                r = stirling_ratio_exact(n, n // k, k)
                assert Fraction(1, 2) <= r <= 4
