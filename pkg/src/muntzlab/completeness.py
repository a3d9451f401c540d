"""Mixed monomial/dual systems over index partitions at finite truncation.

For a partition {1..N} = N1 (disjoint union) N2 the mixed system keeps the
monomial e_n for n in N1 and swaps in the dual r_n^(N) for n in N2.  In
orthonormal coordinates (G = L L^T) the monomial column is column n of
L^T and the dual column is column n of L^(-1), so every mixed system is a
square matrix whose smallest singular value witnesses invertibility.
At finite truncation invertibility always holds (principal structure of a
positive definite inverse); the sigma_min trend over N is the reported
desk-scale evidence, with no uniform-conditioning claim attached.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from random import Random
from typing import Optional

from mpmath import matrix, mpf, sqrt

from .biorthogonal import BiorthogonalFamily
from .config import rank_collapse_threshold, working_precision
from .errors import InputError
from .linalg import LUFactors, sigma_min
from .muntz_space import (
    MuntzSeries,
    QuadratureSpec,
    SeriesOrCallable,
    l2_norm,
    monomial_moments,
    quad_unit_interval,
)


@dataclass(frozen=True)
class Partition:
    """Disjoint cover {1..N} = n1 | n2 (1-based indices)."""

    n1: frozenset
    n2: frozenset
    truncation: int

    def __post_init__(self):
        full = set(range(1, self.truncation + 1))
        if self.n1 & self.n2:
            raise InputError(f"index sets overlap: {sorted(self.n1 & self.n2)}")
        if self.n1 | self.n2 != full:
            raise InputError("index sets do not cover 1..N")

    @classmethod
    def from_monomial_set(cls, n1, N: int) -> "Partition":
        n1 = frozenset(n1)
        return cls(n1, frozenset(range(1, N + 1)) - n1, N)

    def key(self) -> str:
        """Stable text key: which indices kept their monomial."""
        return ",".join(str(i) for i in sorted(self.n1)) or "-"


def all_partitions(N: int):
    """All 2^N partitions, in a deterministic order."""
    for size in range(N + 1):
        for combo in combinations(range(1, N + 1), size):
            yield Partition.from_monomial_set(combo, N)


def sample_partition(N: int, rng: Random) -> Partition:
    n1 = frozenset(i for i in range(1, N + 1) if rng.random() < 0.5)
    return Partition.from_monomial_set(n1, N)


def sample_partitions(N: int, count: int, seed: int = 0):
    rng = Random(seed)
    return [sample_partition(N, rng) for _ in range(count)]


@dataclass(frozen=True)
class MixedCheck:
    partition: Partition
    min_singular: object
    invertible: bool
    threshold: float


def mixed_system_matrix(partition: Partition, family: BiorthogonalFamily) -> matrix:
    """Orthonormal coordinates of the mixed system, one column per index."""
    N = family.truncation
    if partition.truncation != N:
        raise InputError("partition truncation differs from the family's")
    with working_precision(family.precision_bits):
        Lt = family.cholesky_factor.T
        Linv = family.cholesky_inverse_factor
        X = matrix(N, N)
        for j in range(1, N + 1):
            src = Lt if j in partition.n1 else Linv
            for i in range(N):
                X[i, j - 1] = src[i, j - 1]
        return X


def mixed_completeness_check(partition: Partition, family: BiorthogonalFamily,
                             threshold: Optional[float] = None) -> MixedCheck:
    """Smallest singular value of the mixed system and the invertibility flag."""
    if threshold is None:
        threshold = rank_collapse_threshold(family.precision_bits)
    X = mixed_system_matrix(partition, family)
    with working_precision(family.precision_bits):
        sigma = sigma_min(X)
    return MixedCheck(partition, sigma, bool(sigma > mpf(threshold)), threshold)


def mixed_reconstruction_residual(target: SeriesOrCallable, partition: Partition,
                                  family: BiorthogonalFamily,
                                  quad: QuadratureSpec = QuadratureSpec()):
    """Least-squares residual of the target against the mixed system.

    Split into the distance from the target to the truncated span (shared
    by every partition) and the in-span solve residual of the square mixed
    system (rounding-level when the system is invertible); the total is
    the root of the sum of squares.  Partition dependence can only enter
    through the solve, which is what the invariance tests exercise.
    """
    N = family.truncation
    bits = family.precision_bits
    with working_precision(bits):
        b = monomial_moments(target, family.lam, N, quad, bits)
        # coefficients of the in-span part and its orthonormal coordinates
        a = [sum(family.coeffs[k, n] * b[k] for k in range(N)) for n in range(N)]
        Lt = family.cholesky_factor.T
        y = [sum(Lt[i, j] * a[j] for j in range(N)) for i in range(N)]
        if isinstance(target, MuntzSeries):
            norm2 = l2_norm(target, bits) ** 2
        else:
            norm2, _ = quad_unit_interval(lambda t: abs(target(t)) ** 2, quad, bits)
        inside2 = sum(abs(v) ** 2 for v in y)
        dist2 = norm2 - inside2
        if dist2 < 0:
            dist2 = mpf(0)

        X = mixed_system_matrix(partition, family)
        beta = LUFactors(X).solve(y)
        solve_res2 = mpf(0)
        for i in range(N):
            ri = y[i] - sum(X[i, j] * beta[j] for j in range(N))
            solve_res2 += abs(ri) ** 2
        return sqrt(dist2 + solve_res2)
