"""Truncated biorthogonal duals of a Muntz monomial system.

The dual of {e_1 .. e_N} inside its own span is determined by the Gram
inverse: column n of G_N^-1 lists the monomial coefficients of r_n^(N),
the unique element of span{e_1..e_N} with <e_j, r_n^(N)> = delta_jn.
These truncated duals are computable proxies for the duals of the full
system; their drift under growing N is measured, never assumed away.

All inner products among monomials use the exact formula
<t^a, t^b> = 1/(a+b+1); no quadrature enters any check in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from mpmath import cholesky, log, matrix, mpf, sqrt

from .config import working_precision
from .errors import InputError, ParameterError
from .exponents import ExponentSequence
from .gram import GramMatrix, identity_residual, inverse_with_escalation
from .linalg import lower_triangular_inverse


@dataclass
class BiorthogonalFamily:
    """Truncated dual family r_n^(N), with norms and projection deficits.

    coeffs column n (0-based n-1) gives r_n^(N) = sum_k coeffs[k, n-1] * t^lambda_k.
    norms[n-1]^2 = (G^-1)_nn and norms[n-1] * projection_deficit[n-1] = 1:
    the deficit is the distance D_{n,N} from e_n to the span of the others.
    """

    lam: ExponentSequence
    truncation: int
    coeffs: matrix
    norms: tuple
    projection_deficit: tuple
    gram: GramMatrix
    precision_bits: int
    biorthogonality_residual: object

    @property
    def size(self) -> int:
        return self.truncation

    @cached_property
    def cholesky_factor(self) -> matrix:
        """Lower-triangular L with G = L L^T (positive definiteness witness)."""
        with working_precision(self.precision_bits):
            return cholesky(self.gram.entries)

    @cached_property
    def cholesky_inverse_factor(self) -> matrix:
        with working_precision(self.precision_bits):
            return lower_triangular_inverse(self.cholesky_factor)

    def dual_coefficients(self, n: int):
        """Monomial coefficients of r_n^(N), 1-based n."""
        if not 1 <= n <= self.truncation:
            raise InputError(f"n={n} outside 1..{self.truncation}")
        return [self.coeffs[k, n - 1] for k in range(self.truncation)]

    def dual_callable(self, n: int):
        """r_n^(N) as a plain function on (0,1)."""
        cs = self.dual_coefficients(n)
        lams = [mpf(v) for v in self.lam.values[: self.truncation]]

        def rn(t):
            t = mpf(t)
            return sum(c * t ** l for c, l in zip(cs, lams))

        return rn


@dataclass(frozen=True)
class NormGrowthReport:
    """Per-n growth diagnostics log||r_n|| / lambda_n and the fitted constant.

    m_fit = max_n ||r_n|| / (1+eps)^lambda_n is the smallest constant that
    makes ||r_n|| <= m * (1+eps)^lambda_n hold over the prefix.  The ratio
    sequence is the desk-scale trend to watch: it should be bounded and
    eventually decrease (limsup <= 0 as eps -> 0 in the limit statement).
    """

    epsilon: float
    ratios: tuple
    m_fit: object
    max_ratio: object

    def trailing_nonincreasing_from(self, start: int = 1) -> bool:
        """True if ratios are non-increasing from 1-based index ``start``."""
        seq = self.ratios[start - 1:]
        return all(seq[i + 1] <= seq[i] for i in range(len(seq) - 1))


def dual_family(lam: ExponentSequence, N: int, precision_bits: int = 256) -> BiorthogonalFamily:
    """Construct the truncated dual family via the closed-form Gram inverse.

    Escalates precision (doubling) if the inverse residual misses the
    10^(-bits/8) target at the requested precision; the reported
    biorthogonality residual max_{j,n} |<e_j, r_n> - delta_jn| is exactly
    the Gram identity residual because the inner products are analytic.
    """
    if N < 1:
        raise ParameterError(f"N must be >= 1, got {N}")
    if len(lam) < N:
        raise InputError(f"exponent prefix has {len(lam)} terms, need {N}")
    prefix = lam.prefix(N)
    G, Minv, residual = inverse_with_escalation(prefix, precision_bits)
    with working_precision(G.precision_bits):
        norms = tuple(sqrt(Minv[n, n]) for n in range(N))
        deficits = tuple(1 / v for v in norms)
    return BiorthogonalFamily(
        lam=prefix,
        truncation=N,
        coeffs=Minv,
        norms=norms,
        projection_deficit=deficits,
        gram=G,
        precision_bits=G.precision_bits,
        biorthogonality_residual=residual,
    )


def biorthogonality_residual(family: BiorthogonalFamily):
    """Recompute max_{j,n} |<e_j, r_n^(N)> - delta_jn| from scratch."""
    with working_precision(family.precision_bits):
        return identity_residual(family.gram.entries, family.coeffs)


def norm_growth_check(family: BiorthogonalFamily, epsilon: float) -> NormGrowthReport:
    """Fit m in ||r_n|| <= m (1+eps)^lambda_n and report the ratio trend."""
    if not 0 < epsilon < 1:
        raise ParameterError(f"epsilon must lie in (0,1), got {epsilon}")
    with working_precision(family.precision_bits):
        eps = mpf(epsilon)
        lams = [mpf(v) for v in family.lam.values[: family.truncation]]
        ratios = tuple(log(nrm) / l for nrm, l in zip(family.norms, lams))
        m_fit = max(nrm / (1 + eps) ** l for nrm, l in zip(family.norms, lams))
        max_ratio = max(ratios)
    return NormGrowthReport(epsilon=epsilon, ratios=ratios, m_fit=m_fit, max_ratio=max_ratio)


def truncation_convergence(lam: ExponentSequence, n: int, N1: int, N2: int,
                           precision_bits: int = 256):
    """L2 drift ||r_n^(N2) - r_n^(N1)|| between truncation levels.

    The N1 coefficient vector is zero-padded to length N2 and the
    difference is measured through the Gram quadratic form at size N2.
    """
    if not 1 <= n <= N1 <= N2 <= len(lam):
        raise InputError(f"need 1 <= n <= N1 <= N2 <= {len(lam)}, got n={n}, N1={N1}, N2={N2}")
    if N1 == N2:
        return mpf(0)
    fam1 = dual_family(lam, N1, precision_bits)
    fam2 = dual_family(lam, N2, precision_bits)
    bits = max(fam1.precision_bits, fam2.precision_bits)
    with working_precision(bits):
        d = matrix(N2, 1)
        for k in range(N2):
            d[k] = fam2.coeffs[k, n - 1] - (fam1.coeffs[k, n - 1] if k < N1 else mpf(0))
        q = (d.T * (fam2.gram.entries * d))[0]
        return sqrt(abs(q))
