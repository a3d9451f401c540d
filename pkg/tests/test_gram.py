import mpmath
import pytest
from mpmath import matrix, mp, mpf, sqrt

from muntzlab import (
    DegenerateInputError,
    InputError,
    ParameterError,
    PrecisionInsufficientError,
    cauchy_determinant,
    cauchy_inverse,
    distance,
    distance_lower_bound_check,
    generate_exponents,
    gram_matrix,
    working_precision,
)
from muntzlab.gram import inverse_with_escalation

LAM_12 = generate_exponents("integers", {"values": [1, 2]}, 2)
LAM_1 = generate_exponents("integers", {"values": [1]}, 1)


def test_entries_hand_values():
    G = gram_matrix(LAM_12, 256)
    assert abs(G.entry(1, 1) - mpf(1) / 3) < 1e-70
    assert abs(G.entry(1, 2) - mpf(1) / 4) < 1e-70
    assert abs(G.entry(2, 2) - mpf(1) / 5) < 1e-70
    assert abs(gram_matrix(LAM_1, 256).entry(1, 1) - mpf(1) / 3) < 1e-70

    lam149 = generate_exponents("integers", {"values": [1, 4, 9]}, 3)
    assert abs(gram_matrix(lam149, 256).entry(1, 3) - mpf(1) / 11) < 1e-70


def test_entries_range_and_symmetry():
    lam = generate_exponents("power", {"p": 2}, 8)
    G = gram_matrix(lam, 256)
    hi = 1 / (2 * mpf(lam.values[0]) + 1)
    for i in range(8):
        for j in range(8):
            assert G.entries[i, j] == G.entries[j, i]
            assert 0 < G.entries[i, j] <= hi * (1 + mpf(10) ** -70)


@pytest.mark.parametrize("kind,params,n", [
    ("power", {"p": 2}, 8),
    ("lacunary", {"q": 2}, 8),
    ("custom", {"values": [0.5, 1.25, 3.75, 4.5, 7.25, 9.5, 12.0, 15.5]}, 8),
])
def test_positive_definite_via_cholesky(kind, params, n):
    lam = generate_exponents(kind, params, n)
    G = gram_matrix(lam, 256)
    with working_precision(256):
        L = mpmath.cholesky(G.entries)  # raises if not positive definite
        assert all(L[i, i] > 0 for i in range(n))


def test_precision_floor():
    with pytest.raises(ParameterError):
        gram_matrix(LAM_12, 32)


def test_determinant_hand_values():
    with working_precision(256):
        assert abs(cauchy_determinant(gram_matrix(LAM_12, 256)) - mpf(1) / 240) < 1e-70
        assert abs(cauchy_determinant(gram_matrix(LAM_1, 256)) - mpf(1) / 3) < 1e-70


@pytest.mark.parametrize("kind,params", [
    ("power", {"p": 2}),
    ("lacunary", {"q": 2}),
    ("custom", {"values": [0.5, 1.25, 3.75, 4.5, 7.25, 9.5, 12.0, 15.5]}),
])
@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_determinant_matches_lu_oracle(kind, params, n):
    lam = generate_exponents(kind, params, n)
    G = gram_matrix(lam, 256)
    det = cauchy_determinant(G)
    with working_precision(256):
        lu_det = mpmath.det(G.entries)
        assert abs(det - lu_det) / abs(lu_det) < 1e-30


@pytest.mark.parametrize("kind,params", [
    ("power", {"p": 2}),
    ("lacunary", {"q": 2}),
    ("custom", {"values": [0.5, 1.25, 3.75, 4.5, 7.25, 9.5, 12.0, 15.5]}),
])
@pytest.mark.parametrize("n", [1, 2, 4, 8])
def test_inverse_matches_columnwise_solve_oracle(kind, params, n):
    lam = generate_exponents(kind, params, n)
    G = gram_matrix(lam, 256)
    M, residual = cauchy_inverse(G)
    assert residual < mpf(10) ** (-256 / 8)
    with working_precision(256):
        for j in range(n):
            e = matrix([1 if i == j else 0 for i in range(n)])
            col = mpmath.lu_solve(G.entries, e)
            for i in range(n):
                assert abs(M[i, j] - col[i]) / abs(col[i]) < 1e-25


def test_inverse_hand_values():
    M, _ = cauchy_inverse(gram_matrix(LAM_12, 256))
    with working_precision(256):
        assert abs(M[0, 0] - 48) < 1e-60
        assert abs(M[0, 1] + 60) < 1e-60
        assert abs(M[1, 1] - 80) < 1e-60
    M1, _ = cauchy_inverse(gram_matrix(LAM_1, 256))
    assert abs(M1[0, 0] - 3) < 1e-70


def test_duplicate_exponents_rejected():
    lam = generate_exponents("custom", {"values": [1.0, 2.0]}, 2)
    bad = type(lam)(values=(mpf(1), mpf(1)), gap=mpf(0), kind="custom", params={})
    with pytest.raises(DegenerateInputError):
        cauchy_determinant(gram_matrix(bad, 256))
    with pytest.raises(DegenerateInputError):
        cauchy_inverse(gram_matrix(bad, 256))


def test_insufficient_precision_raises_and_escalation_recovers():
    lam = generate_exponents("power", {"p": 2}, 8)
    G = gram_matrix(lam, 64)
    with pytest.raises(PrecisionInsufficientError) as info:
        cauchy_inverse(G, residual_tol=1e-60)
    assert info.value.residual is not None
    G2, M, residual = inverse_with_escalation(lam, 64, residual_tol=1e-60)
    assert residual < mpf("1e-60")
    assert G2.precision_bits > 64


def test_distance_hand_values():
    d1 = distance(LAM_12, 1, 2)
    d2 = distance(LAM_12, 2, 2)
    with working_precision(256):
        assert abs(d1.distance - 1 / (4 * sqrt(mpf(3)))) < 1e-60
        assert abs(d2.distance - 1 / (4 * sqrt(mpf(5)))) < 1e-60
        assert abs(d1.distance - 1 / sqrt(mpf(48))) < 1e-60
        assert abs(d2.distance - 1 / sqrt(mpf(80))) < 1e-60
    # singleton: empty competitor product, distance is the norm of t itself
    d = distance(LAM_1, 1, 1)
    with working_precision(256):
        assert abs(d.distance - 1 / sqrt(mpf(3))) < 1e-70


def test_distance_duality_and_range():
    lam = generate_exponents("power", {"p": 2}, 10)
    for n in range(1, 11):
        rep = distance(lam, n, 10)
        assert abs(rep.distance * rep.dual_norm - 1) < 1e-25
    with pytest.raises(InputError):
        distance(lam, 0, 10)
    with pytest.raises(InputError):
        distance(lam, 11, 10)


def test_distance_nonincreasing_in_truncation():
    lam = generate_exponents("power", {"p": 2}, 10)
    for n in range(1, 5):
        values = [distance(lam, n, N).distance for N in range(max(n, 4), 11)]
        assert all(values[i + 1] <= values[i] for i in range(len(values) - 1))


def test_lower_bound_fit_hand_value():
    reports, m_fit = distance_lower_bound_check(LAM_12, 2, 0.5)
    with working_precision(256):
        # min(D_1/0.5, D_2/0.25) = D_1/0.5 = 1/(2 sqrt(3))
        assert abs(m_fit - 1 / (2 * sqrt(mpf(3)))) < 1e-60
    assert all(r.m_fit == m_fit and r.epsilon == 0.5 for r in reports)


def test_lower_bound_single_term():
    for eps in (0.1, 0.5, 0.9):
        _, m_fit = distance_lower_bound_check(LAM_1, 1, eps)
        with working_precision(256):
            expected = (1 / sqrt(mpf(3))) / (1 - mpf(eps))
            assert abs(m_fit - expected) < 1e-55


def test_lower_bound_trend_nonincreasing_in_truncation():
    lam = generate_exponents("power", {"p": 2}, 10)
    fits = [distance_lower_bound_check(lam, N, 0.5)[1] for N in range(2, 11)]
    assert all(f > 0 for f in fits)
    assert all(fits[i + 1] <= fits[i] for i in range(len(fits) - 1))


def test_lower_bound_epsilon_domain():
    with pytest.raises(ParameterError):
        distance_lower_bound_check(LAM_12, 2, 0.0)
    with pytest.raises(ParameterError):
        distance_lower_bound_check(LAM_12, 2, 1.0)
