from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import invhilbert

from polytor.errors import DomainError
from polytor.norms import cube_lq_exact
from polytor.poly import WalshPoly
from polytor.projections import (
    RationalMatrix,
    biorthogonality_defect,
    hilbert_inverse,
    hilbert_inverse_growth,
    hilbert_matrix,
    lemma3_projection,
    lemma3_weights,
    projection_polynomials,
    projection_sup_on_grid,
    rademacher_projection_norm,
    random_walsh,
    walsh_homog_filter,
)
from polytor.harness.checks import lemma3_envelope
from polytor.harness.runner import growth_fit_deviation
from polytor.spaces import NormedSpace

E2 = NormedSpace.euclidean(2)
x = np.array([1.0, 2j])
y = np.array([-3.0, 0.5])


def test_hilbert_matrix_examples():
    assert hilbert_matrix(0).entries == ((Fraction(1),),)
    assert hilbert_matrix(1) == RationalMatrix.from_rows([[1, Fraction(1, 2)], [Fraction(1, 2), Fraction(1, 3)]])
    for m in range(13):
        H = hilbert_matrix(m)
        assert H == H.transpose()


def test_hilbert_inverse_small():
    assert hilbert_inverse(1) == RationalMatrix.from_rows([[4, -6], [-6, 12]])


def test_hilbert_inverse_matches_independent_exact_oracle():
    for m in range(13):
        oracle = invhilbert(m + 1, exact=True)
        A = hilbert_inverse(m)
        assert all(A[i, j] == int(oracle[i, j]) for i in range(m + 1) for j in range(m + 1))
        assert hilbert_matrix(m) @ A == RationalMatrix.identity(m + 1)


def test_hilbert_inverse_guard():
    with pytest.raises(DomainError):
        hilbert_inverse(21)
    with pytest.raises(DomainError):
        hilbert_matrix(-1)


def test_rational_matrix_json_round_trip():
    A = hilbert_inverse(3)
    assert RationalMatrix.from_json(A.to_json()) == A
    assert hilbert_matrix(1).to_json() == [["1/1", "1/2"], ["1/2", "1/3"]]


def test_projection_polynomials_examples():
    (p1,) = projection_polynomials(0)
    assert p1.coeffs == (1,)
    p1, p2 = projection_polynomials(1)
    assert p1.coeffs == (4, -6) and p2.coeffs == (-6, 12)
    assert p1(0.5) == pytest.approx(1.0)


def test_biorthogonality_exact():
    for m in range(13):
        assert biorthogonality_defect(m) == []


def test_projection_sup_bounded_by_envelope():
    for m in range(1, 9):
        top = float(hilbert_inverse(m).max_abs())
        assert projection_sup_on_grid(m, 2001) <= (m + 1) * top


def test_growth_is_exponential_shaped():
    rows = hilbert_inverse_growth(range(2, 13))
    slopes = [lg / m for m, _, lg in rows]
    assert max(slopes) < 5
    dev, slope = growth_fit_deviation(range(4, 13))
    assert dev < 0.05 and 3 < slope < 4


def test_homog_filter_examples():
    W = WalshPoly(2, {(1,): x, (1, 2): y}, E2)
    assert walsh_homog_filter(W, 1) == WalshPoly(2, {(1,): x}, E2)
    assert walsh_homog_filter(W, 3).is_zero()
    merged = {}
    for k in range(3):
        merged.update(walsh_homog_filter(W, k).terms)
    assert WalshPoly(2, merged, E2) == W


def test_lemma3_example():
    W = WalshPoly(2, {(1,): x, (1, 2): y}, E2)
    assert lemma3_weights(2, 2) == [0, 0, 1]
    assert lemma3_projection(W, 2, 2) == WalshPoly(2, {(1, 2): y}, E2)
    assert lemma3_projection(W, 0, 2).is_zero()
    with pytest.raises(DomainError):
        lemma3_projection(W, 1, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1), st.data())
def test_lemma3_equals_filter(n, seed, data):
    m = data.draw(st.integers(0, n))
    W = random_walsh(E2, n, np.random.default_rng(seed), max_degree=m, density=0.6)
    for k in range(m + 1):
        assert lemma3_projection(W, k, m) == walsh_homog_filter(W, k)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 4]))
def test_lemma3_norm_bound(n, seed, q):
    # ||P_k||_q <= B^m ||P||_q with B the measured (m+1) max|a_ij| envelope
    space = NormedSpace.ellp(1, 2)
    W = random_walsh(space, n, np.random.default_rng(seed), density=0.7)
    if W.is_zero():
        return
    m = W.degree()
    B = lemma3_envelope(m)
    whole = cube_lq_exact(W, q).value
    for k in range(m + 1):
        assert cube_lq_exact(walsh_homog_filter(W, k), q).value <= B ** max(m, 1) * whole * (1 + 1e-12)


def test_rademacher_projection_hilbert_and_average():
    for m in (0, 1, 2):
        assert rademacher_projection_norm(E2, 4, m, trials=4, seed=1) <= 1 + 1e-9
    assert rademacher_projection_norm(NormedSpace.ellp(1, 2), 4, 0, trials=4, seed=1) <= 1 + 1e-9


def test_rademacher_projection_is_reproducible():
    sp = NormedSpace.ellp(1, 2)
    a = rademacher_projection_norm(sp, 4, 2, trials=3, seed=5)
    assert a == rademacher_projection_norm(sp, 4, 2, trials=3, seed=5)
    assert a >= 0.5
