"""Small dense linear-algebra kernels at mpmath working precision.

Everything here operates on mpmath matrices of modest size (N <= ~16 in
practice) where dense O(N^3) factorizations are cheap even at 512 bits.
Operator norms are largest singular values obtained by power iteration on
A^H A; smallest singular values use inverse iteration through a reusable
LU factorization.  Start vectors are fixed (no RNG) so results are
deterministic.
"""

from __future__ import annotations

from mpmath import conj, matrix, mp, mpf, sqrt

from .errors import ConvergenceError, DegenerateInputError

SIGMA_REL_TOL = 1e-20
MAX_POWER_ITER = 2000


def frobenius_norm(A: matrix):
    acc = mpf(0)
    for i in range(A.rows):
        for j in range(A.cols):
            acc += abs(A[i, j]) ** 2
    return sqrt(acc)


def max_abs(A: matrix):
    worst = mpf(0)
    for i in range(A.rows):
        for j in range(A.cols):
            worst = max(worst, abs(A[i, j]))
    return worst


def conj_transpose(A: matrix) -> matrix:
    B = matrix(A.cols, A.rows)
    for i in range(A.rows):
        for j in range(A.cols):
            B[j, i] = conj(A[i, j])
    return B


def _vec_norm(v):
    return sqrt(sum(abs(x) ** 2 for x in v))


def _start_vector(n):
    # fixed, mildly uneven start so it is not orthogonal to the top
    # singular vector by accident of symmetry
    return [mpf(1) + mpf(i) / (2 * n) for i in range(n)]


def sigma_max(A: matrix, rel_tol: float = SIGMA_REL_TOL, max_iter: int = MAX_POWER_ITER):
    """Largest singular value of A by power iteration on A^H A."""
    n = A.cols
    if n == 0:
        return mpf(0)
    AH = conj_transpose(A)
    v = _start_vector(n)
    nv = _vec_norm(v)
    v = [x / nv for x in v]
    sigma = mpf(0)
    for _ in range(max_iter):
        w = A * matrix(v)
        z = AH * w
        zn = _vec_norm(z)
        if zn == 0:
            return mpf(0)
        new_sigma = sqrt(zn)
        v = [z[i] / zn for i in range(n)]
        if sigma > 0 and abs(new_sigma - sigma) <= mpf(rel_tol) * new_sigma:
            return new_sigma
        sigma = new_sigma
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps")


class LUFactors:
    """In-place LU with partial pivoting, reusable for many solves."""

    def __init__(self, A: matrix):
        n = A.rows
        self.n = n
        self.lu = A.copy()
        self.perm = list(range(n))
        self.sign = 1
        lu = self.lu
        for col in range(n):
            pivot_row = max(range(col, n), key=lambda r: abs(lu[r, col]))
            if lu[pivot_row, col] == 0:
                raise DegenerateInputError("matrix is numerically singular")
            if pivot_row != col:
                for j in range(n):
                    lu[col, j], lu[pivot_row, j] = lu[pivot_row, j], lu[col, j]
                self.perm[col], self.perm[pivot_row] = self.perm[pivot_row], self.perm[col]
                self.sign = -self.sign
            for r in range(col + 1, n):
                f = lu[r, col] / lu[col, col]
                lu[r, col] = f
                for j in range(col + 1, n):
                    lu[r, j] -= f * lu[col, j]

    def solve(self, b):
        """Solve A x = b (b is a list or mpmath column)."""
        n, lu = self.n, self.lu
        y = [b[self.perm[i]] for i in range(n)]
        for i in range(n):
            for j in range(i):
                y[i] -= lu[i, j] * y[j]
        for i in reversed(range(n)):
            for j in range(i + 1, n):
                y[i] -= lu[i, j] * y[j]
            y[i] /= lu[i, i]
        return y

    def solve_adjoint(self, b):
        """Solve A^H x = b using the same factorization."""
        n, lu = self.n, self.lu
        # A^H = (P^T L U)^H = U^H L^H P, so solve U^H z = b, L^H w = z, x = P^T w
        z = list(b)
        for i in range(n):
            for j in range(i):
                z[i] -= conj(lu[j, i]) * z[j]
            z[i] /= conj(lu[i, i])
        for i in reversed(range(n)):
            for j in range(i + 1, n):
                z[i] -= conj(lu[j, i]) * z[j]
        x = [None] * n
        for i in range(n):
            x[self.perm[i]] = z[i]
        return x

    def det(self):
        d = mpf(self.sign)
        for i in range(self.n):
            d *= self.lu[i, i]
        return d


def sigma_min(A: matrix, rel_tol: float = SIGMA_REL_TOL, max_iter: int = MAX_POWER_ITER):
    """Smallest singular value via inverse iteration on (A^H A)^-1.

    Each step solves A z = v and A^H w = z through one shared LU, so the
    per-iteration cost is O(N^2).  Returns 0 when the matrix is exactly
    singular at working precision.
    """
    n = A.cols
    if n == 0:
        return mpf(0)
    try:
        lu = LUFactors(A)
    except DegenerateInputError:
        return mpf(0)
    v = _start_vector(n)
    nv = _vec_norm(v)
    v = [x / nv for x in v]
    mu = mpf(0)
    for _ in range(max_iter):
        z = lu.solve(v)
        w = lu.solve_adjoint(z)
        wn = _vec_norm(w)
        if wn == 0 or not mp.isfinite(wn):
            return mpf(0)
        new_mu = sqrt(wn)  # converges to 1/sigma_min^2 under the sqrt pairing
        v = [w[i] / wn for i in range(n)]
        if mu > 0 and abs(new_mu - mu) <= mpf(rel_tol) * new_mu:
            return 1 / new_mu
        mu = new_mu
    raise ConvergenceError(f"inverse iteration did not converge in {max_iter} steps")


def lower_triangular_inverse(L: matrix) -> matrix:
    """Inverse of a lower-triangular matrix by forward substitution."""
    n = L.rows
    inv = matrix(n, n)
    for col in range(n):
        x = [mpf(0)] * n
        x[col] = 1 / L[col, col]
        for i in range(col + 1, n):
            s = mpf(0)
            for j in range(col, i):
                s += L[i, j] * x[j]
            x[i] = -s / L[i, i]
        for i in range(n):
            inv[i, col] = x[i]
    return inv
