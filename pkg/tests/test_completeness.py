import pytest
from mpmath import mpf, sqrt

from muntzlab import (
    InputError,
    Partition,
    all_partitions,
    dual_family,
    finite_series,
    generate_exponents,
    mixed_completeness_check,
    mixed_reconstruction_residual,
    mixed_system_matrix,
    projection_residual,
    sample_partitions,
    working_precision,
)
from muntzlab.linalg import LUFactors

LAM_12 = generate_exponents("integers", {"values": [1, 2]}, 2)
T3 = finite_series(generate_exponents("integers", {"values": [3]}, 1), [1])


def test_partition_validation():
    Partition(frozenset({1}), frozenset({2}), 2)
    with pytest.raises(InputError):
        Partition(frozenset({1, 2}), frozenset({2}), 2)
    with pytest.raises(InputError):
        Partition(frozenset({1}), frozenset(), 2)
    with pytest.raises(InputError):
        Partition(frozenset({1}), frozenset({3}), 2)


def test_all_partitions_enumeration():
    parts = list(all_partitions(4))
    assert len(parts) == 16
    keys = [p.key() for p in parts]
    assert len(set(keys)) == 16


def test_sample_partitions_deterministic():
    a = [p.key() for p in sample_partitions(12, 20, seed=3)]
    b = [p.key() for p in sample_partitions(12, 20, seed=3)]
    c = [p.key() for p in sample_partitions(12, 20, seed=4)]
    assert a == b
    assert a != c


def test_mixed_matrix_columns(fam_12):
    part = Partition.from_monomial_set({1}, 2)
    X = mixed_system_matrix(part, fam_12)
    with working_precision(256):
        Lt = fam_12.cholesky_factor.T
        # column 1: monomial coordinates L^T e_1; column 2: L^T (-60, 80)
        assert abs(X[0, 0] - Lt[0, 0]) < 1e-60 and abs(X[1, 0] - Lt[1, 0]) < 1e-60
        want = (Lt[0, 0] * -60 + Lt[0, 1] * 80, Lt[1, 0] * -60 + Lt[1, 1] * 80)
        assert abs(X[0, 1] - want[0]) < 1e-55 and abs(X[1, 1] - want[1]) < 1e-55


def test_mixed_pair_gram_is_diagonal(fam_12):
    # Gram of {e_1, r_2} = [[1/3, 0], [0, 80]] by biorthogonality
    part = Partition.from_monomial_set({1}, 2)
    X = mixed_system_matrix(part, fam_12)
    with working_precision(256):
        P = X.T * X
        assert abs(P[0, 0] - mpf(1) / 3) < 1e-55
        assert abs(P[0, 1]) < 1e-55
        assert abs(P[1, 0]) < 1e-55
        assert abs(P[1, 1] - 80) < 1e-50
        det = P[0, 0] * P[1, 1] - P[0, 1] * P[1, 0]
        assert abs(det - mpf(80) / 3) < 1e-50


def test_extreme_partitions(fam_squares_10):
    N = 10
    all_monomials = Partition.from_monomial_set(range(1, N + 1), N)
    all_duals = Partition.from_monomial_set((), N)
    with working_precision(fam_squares_10.precision_bits):
        X = mixed_system_matrix(all_monomials, fam_squares_10)
        Lt = fam_squares_10.cholesky_factor.T
        assert max(abs(X[i, j] - Lt[i, j]) for i in range(N) for j in range(N)) == 0
        Y = mixed_system_matrix(all_duals, fam_squares_10)
        Linv = fam_squares_10.cholesky_inverse_factor
        assert max(abs(Y[i, j] - Linv[i, j]) for i in range(N) for j in range(N)) == 0
    assert mixed_completeness_check(all_duals, fam_squares_10).invertible


def test_exhaustive_small_truncation():
    lam = generate_exponents("power", {"p": 2}, 4)
    fam = dual_family(lam, 4, 256)
    for part in all_partitions(4):
        check = mixed_completeness_check(part, fam)
        assert check.invertible
        assert check.min_singular > 0


def test_sampled_larger_truncation(fam_squares_12):
    for part in sample_partitions(12, 100, seed=0):
        assert mixed_completeness_check(part, fam_squares_12).invertible


def test_threshold_controls_flag(fam_12):
    part = Partition.from_monomial_set({1}, 2)
    strict = mixed_completeness_check(part, fam_12, threshold=1e6)
    assert not strict.invertible
    assert mixed_completeness_check(part, fam_12).invertible


def test_singleton_partition_trivially_invertible():
    lam1 = generate_exponents("integers", {"values": [1]}, 1)
    fam = dual_family(lam1, 1, 256)
    for part in all_partitions(1):
        assert mixed_completeness_check(part, fam).invertible


def test_residual_in_span_target(fam_12):
    e1 = finite_series(LAM_12, [1, 0])
    for part in all_partitions(2):
        assert mixed_reconstruction_residual(e1, part, fam_12) < 1e-30


def test_residual_outside_target_matches_projection(fam_12):
    want = projection_residual(T3, fam_12)
    values = [mixed_reconstruction_residual(T3, part, fam_12) for part in all_partitions(2)]
    for v in values:
        assert abs(v - want) < 1e-25
        assert abs(v - mpf("0.02520")) < 1e-4
    spread = max(values) - min(values)
    assert spread < 1e-20


def test_residual_zero_once_exponent_joins_span():
    lam123 = generate_exponents("integers", {"values": [1, 2, 3]}, 3)
    fam = dual_family(lam123, 3, 256)
    part = Partition.from_monomial_set({1, 3}, 3)
    assert mixed_reconstruction_residual(T3, part, fam) < 1e-30


def test_residual_partition_invariance_squares(fam_squares_10):
    values = [mixed_reconstruction_residual(T3, part, fam_squares_10)
              for part in sample_partitions(10, 16, seed=1)]
    assert max(values) - min(values) < 1e-20


def test_residual_monotone_in_truncation(lam_squares):
    res = []
    for N in (4, 6, 8, 10):
        fam = dual_family(lam_squares, N, 256)
        part = Partition.from_monomial_set(range(1, N + 1, 2), N)
        res.append(mixed_reconstruction_residual(T3, part, fam))
    assert all(res[i + 1] <= res[i] for i in range(len(res) - 1))
    # frozen from the Gram/normal-equations oracle at 320 bits
    expected = [0.0056694671, 0.0035483044, 0.0027626366, 0.0023644919]
    for got, want in zip(res, expected):
        assert abs(float(got) - want) < 1e-9


def test_mixed_matrix_truncation_mismatch(fam_12, fam_squares_10):
    part = Partition.from_monomial_set({1}, 2)
    with pytest.raises(InputError):
        mixed_system_matrix(part, fam_squares_10)


def test_lu_solver_roundtrip(fam_squares_10):
    # LUFactors is the solve engine under the residuals; check it directly
    X = mixed_system_matrix(Partition.from_monomial_set({2, 4, 6, 8, 10}, 10), fam_squares_10)
    with working_precision(256):
        lu = LUFactors(X)
        b = [mpf(k + 1) for k in range(10)]
        x = lu.solve(b)
        for i in range(10):
            ri = b[i] - sum(X[i, j] * x[j] for j in range(10))
            assert abs(ri) < 1e-50
        y = lu.solve_adjoint(b)
        for j in range(10):
            rj = b[j] - sum(X[i, j] * y[i] for i in range(10))
            assert abs(rj) < 1e-50
