"""Gram matrix of {t^lambda_n} in L2(0,1) and its closed-form Cauchy algebra.

With nodes x_i = lambda_i + 1/2 the Gram matrix is the symmetric Cauchy
matrix G_jk = 1/(x_j + x_k), so its determinant, inverse, and the distance
from each monomial to the span of the others all have product formulas.
Products are accumulated in log-space with sign tracking: already for
lambda = {n^2} and N around 12 they span more than thirty orders of
magnitude, which would overflow any fixed-exponent representation of the
intermediate factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from mpmath import exp, log, matrix, mp, mpf

from .config import inverse_residual_tolerance, working_precision
from .errors import DegenerateInputError, InputError, ParameterError, PrecisionInsufficientError
from .exponents import ExponentSequence


@dataclass
class GramMatrix:
    """Gram matrix of a Muntz monomial prefix at a stated precision."""

    lam: ExponentSequence
    entries: matrix
    precision_bits: int

    @property
    def size(self) -> int:
        return self.entries.rows

    def entry(self, j: int, k: int):
        """G_jk with 1-based indices."""
        return self.entries[j - 1, k - 1]


@dataclass(frozen=True)
class DistanceReport:
    """Distance from e_n to the span of the other monomials at truncation N.

    distance * dual_norm = 1 is the defining duality (dual_norm is the
    norm of the n-th biorthogonal element of the truncated system).
    epsilon and m_fit are filled by distance_lower_bound_check.
    """

    n: int
    truncation: int
    distance: object
    dual_norm: object
    epsilon: Optional[float] = None
    m_fit: Optional[object] = None


def _nodes(lam: ExponentSequence):
    return [mpf(v) + mpf(1) / 2 for v in lam.values]


def _check_distinct(lam: ExponentSequence):
    for i in range(len(lam) - 1):
        if lam.values[i + 1] == lam.values[i]:
            raise DegenerateInputError(f"duplicate exponent {lam.values[i]} at positions {i + 1}, {i + 2}")


def gram_matrix(lam: ExponentSequence, precision_bits: int = 256) -> GramMatrix:
    """Build G_jk = 1/(lambda_j + lambda_k + 1) at the given precision."""
    if precision_bits < 64:
        raise ParameterError(f"precision_bits must be >= 64, got {precision_bits}")
    with working_precision(precision_bits):
        N = len(lam)
        G = matrix(N, N)
        for j in range(N):
            for k in range(j, N):
                G[j, k] = G[k, j] = 1 / (mpf(lam.values[j]) + mpf(lam.values[k]) + 1)
    return GramMatrix(lam, G, precision_bits)


def cauchy_determinant(G: GramMatrix):
    """det G via the Cauchy product formula, assembled in log-space.

    Every factor is positive for a strictly increasing node set, so no
    sign tracking is needed here; the result is exp of a sum of logs.
    """
    _check_distinct(G.lam)
    with working_precision(G.precision_bits):
        x = _nodes(G.lam)
        N = len(x)
        acc = mpf(0)
        for j in range(N):
            for k in range(j + 1, N):
                acc += 2 * log(x[k] - x[j])
        for j in range(N):
            for k in range(N):
                acc -= log(x[j] + x[k])
        return exp(acc)


def _log_row_factors(x):
    """log|A_i| and sign(A_i) for A_i = prod_k (x_i+x_k) / prod_{k!=i} (x_i-x_k)."""
    N = len(x)
    logs, signs = [], []
    for i in range(N):
        s = mpf(0)
        for k in range(N):
            s += log(x[i] + x[k])
        sign = 1
        for k in range(N):
            if k == i:
                continue
            d = x[i] - x[k]
            if d < 0:
                sign = -sign
            s -= log(abs(d))
        logs.append(s)
        signs.append(sign)
    return logs, signs


def cauchy_inverse(G: GramMatrix, residual_tol: Optional[float] = None):
    """Closed-form inverse of the Gram matrix, with its identity residual.

    Returns
    -------
    (M, residual)
        M is the symmetric inverse with (M)_ij = A_i A_j / (x_i + x_j);
        residual is max|G*M - I| computed at working precision.

    Raises
    ------
    PrecisionInsufficientError
        If the residual exceeds ``residual_tol`` (default 10^(-bits/8));
        the caller must raise precision_bits and rebuild.
    """
    _check_distinct(G.lam)
    if residual_tol is None:
        residual_tol = inverse_residual_tolerance(G.precision_bits)
    with working_precision(G.precision_bits):
        x = _nodes(G.lam)
        N = len(x)
        logs, signs = _log_row_factors(x)
        M = matrix(N, N)
        for i in range(N):
            for j in range(i, N):
                val = signs[i] * signs[j] * exp(logs[i] + logs[j] - log(x[i] + x[j]))
                M[i, j] = M[j, i] = val
        residual = identity_residual(G.entries, M)
    if not residual <= mpf(residual_tol):
        raise PrecisionInsufficientError(
            f"G*M - I residual {mp.nstr(residual, 5)} exceeds {residual_tol} "
            f"at {G.precision_bits} bits; raise precision_bits",
            residual=residual,
            precision_bits=G.precision_bits,
        )
    return M, residual


def identity_residual(G: matrix, M: matrix):
    """max-norm of G*M - I."""
    N = G.rows
    P = G * M
    worst = mpf(0)
    for i in range(N):
        for j in range(N):
            target = 1 if i == j else 0
            worst = max(worst, abs(P[i, j] - target))
    return worst


def inverse_with_escalation(lam: ExponentSequence, precision_bits: int = 256,
                            residual_tol: Optional[float] = None, max_doublings: int = 6):
    """gram_matrix + cauchy_inverse, doubling precision until the residual passes.

    The residual target stays pinned to the *requested* precision, so
    escalation refines the arithmetic without moving the goalposts.
    Returns (GramMatrix, inverse, residual); the GramMatrix carries the
    precision that finally succeeded.
    """
    if residual_tol is None:
        residual_tol = inverse_residual_tolerance(precision_bits)
    bits = precision_bits
    last_exc = None
    for _ in range(max_doublings + 1):
        G = gram_matrix(lam, bits)
        try:
            M, residual = cauchy_inverse(G, residual_tol=residual_tol)
            return G, M, residual
        except PrecisionInsufficientError as exc:
            last_exc = exc
            bits *= 2
    raise last_exc


def log_distance(lam: ExponentSequence, n: int, N: int):
    """log of the closed-form distance D_{n,N}; exact up to rounding."""
    if not 1 <= n <= N <= len(lam):
        raise InputError(f"need 1 <= n <= N <= {len(lam)}, got n={n}, N={N}")
    _check_distinct(lam.prefix(N))
    ln = mpf(lam.values[n - 1])
    acc = -log(2 * ln + 1) / 2
    for k in range(N):
        if k == n - 1:
            continue
        lk = mpf(lam.values[k])
        acc += log(abs(ln - lk)) - log(ln + lk + 1)
    return acc


def distance(lam: ExponentSequence, n: int, N: int, precision_bits: int = 256) -> DistanceReport:
    """Distance from e_n to the span of the remaining N-1 monomials.

    D_{n,N} = (2 lambda_n + 1)^(-1/2) * prod_{k<=N, k!=n}
    |lambda_n - lambda_k| / (lambda_n + lambda_k + 1), evaluated in
    log-space; the dual norm is ((G_N^-1)_nn)^(1/2) and the two satisfy
    distance * dual_norm = 1.
    """
    with working_precision(precision_bits):
        d = exp(log_distance(lam, n, N))
        x = _nodes(lam.prefix(N))
        logs, _ = _log_row_factors(x)
        # (G^-1)_nn = A_n^2 / (2 x_n), so the dual norm needs only row n
        dual = exp(logs[n - 1] - log(2 * x[n - 1]) / 2)
    return DistanceReport(n=n, truncation=N, distance=d, dual_norm=dual)


def distance_lower_bound_check(lam: ExponentSequence, N: int, epsilon: float,
                               precision_bits: int = 256):
    """Fit the constant in the lower bound D_n >= m * (1-eps)^lambda_n.

    Returns (reports, m_fit) where m_fit = min_n D_{n,N} / (1-eps)^lambda_n
    over n <= N.  m_fit is positive whenever the exponents are distinct;
    its trend over N is the quantity worth watching, so each report
    carries the shared fit.
    """
    if not 0 < epsilon < 1:
        raise ParameterError(f"epsilon must lie in (0,1), got {epsilon}")
    with working_precision(precision_bits):
        eps = mpf(epsilon)
        base = []
        for n in range(1, N + 1):
            rep = distance(lam, n, N, precision_bits)
            ratio = rep.distance / (1 - eps) ** mpf(lam.values[n - 1])
            base.append((rep, ratio))
        m_fit = min(r for _, r in base)
    reports = [
        DistanceReport(rep.n, rep.truncation, rep.distance, rep.dual_norm, epsilon, m_fit)
        for rep, _ in base
    ]
    return reports, m_fit
