"""Muntz series on the slit disk: evaluation, inner products, projection.

A MuntzSeries pairs an exponent prefix with coefficients (stored, or
produced by a named rule).  Inner products between monomials are always
the exact rational formula <t^a, t^b> = 1/(a+b+1); quadrature only ever
touches genuine black-box integrands.  Coefficient recovery against a
dual family is organised as moments-first: the moment vector b_k = <f, e_k>
is computed once (analytically or by quadrature) and every dual pairing
<f, r_n> is an exact linear combination of it, so the huge alternating
dual coefficients cancel inside working-precision sums instead of inside
an oscillatory integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from mpmath import conj, mp, mpc, mpf, sqrt

from .biorthogonal import BiorthogonalFamily
from .config import working_precision
from .errors import (
    ConvergenceError,
    DomainError,
    InputError,
    NonMemberSignal,
    ParameterError,
    QuadratureError,
)
from .exponents import ExponentSequence


# ---------------------------------------------------------------------------
# coefficient rules


@dataclass(frozen=True)
class CoefficientRule:
    """Named coefficient generator with comparison certificates.

    l2_class records what is *provable* about sum |c_n|^2 from the rule's
    closed form: "convergent", "divergent", or None (no certificate).
    """

    name: str
    params: dict
    fn: Callable[[int], complex]
    l2_class: Optional[str] = None

    def coefficient(self, n: int):
        if n < 1:
            raise InputError(f"rule index must be >= 1, got {n}")
        return self.fn(n)

    def sup_bound(self, n0: int):
        """Upper bound on sup_{n >= n0} |c_n|, or None if not monotone."""
        if self.name == "power":
            alpha, scale = self.params["alpha"], abs(self.params["scale"])
            if alpha >= 0:
                return scale * mpf(n0) ** mpf(-alpha)
            return None
        if self.name == "geometric":
            ratio, scale = abs(self.params["ratio"]), abs(self.params["scale"])
            return scale * mpf(ratio) ** n0
        if self.name == "unit":
            return mpf(1)
        return None

    def l2_tail_bound(self, K: int):
        """Bound on sum_{n>K} |c_n|^2 when the rule certifies convergence."""
        if self.l2_class != "convergent":
            return None
        if self.name == "power":
            alpha, scale = mpf(self.params["alpha"]), mpf(abs(self.params["scale"]))
            return scale ** 2 * mpf(K) ** (1 - 2 * alpha) / (2 * alpha - 1)
        if self.name == "geometric":
            r, scale = mpf(abs(self.params["ratio"])), mpf(abs(self.params["scale"]))
            return scale ** 2 * r ** (2 * (K + 1)) / (1 - r ** 2)
        return None


def power_rule(alpha: float, scale: float = 1.0) -> CoefficientRule:
    """c_n = scale * n^(-alpha); p-series comparison decides the l2 class."""
    a = float(alpha)
    l2 = "convergent" if a > 0.5 else "divergent"
    return CoefficientRule("power", {"alpha": a, "scale": float(scale)},
                           lambda n, a=a, s=scale: s * n ** (-a), l2)


def geometric_rule(ratio: float, scale: float = 1.0) -> CoefficientRule:
    if not 0 < abs(ratio) < 1:
        raise ParameterError(f"geometric rule needs 0 < |ratio| < 1, got {ratio}")
    return CoefficientRule("geometric", {"ratio": float(ratio), "scale": float(scale)},
                           lambda n, r=ratio, s=scale: s * r ** n, "convergent")


NAMED_RULES = {
    "inv_n": lambda: power_rule(1.0),
    "inv_sqrt_n": lambda: power_rule(0.5),
    "unit": lambda: CoefficientRule("unit", {}, lambda n: 1.0, "divergent"),
}


def rule_from_name(name: str, **params) -> CoefficientRule:
    if name in NAMED_RULES:
        return NAMED_RULES[name]()
    if name == "power":
        return power_rule(**params)
    if name == "geometric":
        return geometric_rule(**params)
    raise ParameterError(f"unknown coefficient rule {name!r}")


# ---------------------------------------------------------------------------
# series


@dataclass(frozen=True)
class MuntzSeries:
    """A series sum_n c_n t^lambda_n over a stored exponent prefix.

    coeffs holds explicitly stored coefficients; when a rule is present it
    supplies c_n for every index up to the exponent prefix length, and the
    series is treated as a (prefix of an) infinite object.
    """

    lam: ExponentSequence
    coeffs: tuple = ()
    rule: Optional[CoefficientRule] = None

    def __post_init__(self):
        if len(self.coeffs) > len(self.lam):
            raise InputError(f"{len(self.coeffs)} coefficients but only {len(self.lam)} exponents")
        if not self.coeffs and self.rule is None:
            raise InputError("series needs stored coefficients or a rule")

    @property
    def finite(self) -> bool:
        return self.rule is None

    @property
    def n_terms(self) -> int:
        return len(self.coeffs) if self.finite else len(self.lam)

    def coefficient(self, n: int):
        """c_n, 1-based; stored prefix wins over the rule."""
        if n <= len(self.coeffs):
            return self.coeffs[n - 1]
        if self.rule is not None and n <= len(self.lam):
            return self.rule.coefficient(n)
        if self.finite:
            return 0
        raise InputError(f"coefficient index {n} beyond exponent prefix {len(self.lam)}")

    def term_items(self):
        """(lambda_n, c_n) pairs over the usable prefix."""
        return [(self.lam.values[n - 1], self.coefficient(n)) for n in range(1, self.n_terms + 1)]


def finite_series(lam: ExponentSequence, coeffs: Sequence) -> MuntzSeries:
    return MuntzSeries(lam, tuple(coeffs))


SeriesOrCallable = Union[MuntzSeries, Callable]


# ---------------------------------------------------------------------------
# slit-disk evaluation


def check_slit_point(z, lam: ExponentSequence, finite: bool = True):
    """Reject points outside the disk or on the slit (-1, 0).

    Convergence of an infinite series is only guaranteed strictly inside
    the disk; a finite Muntz polynomial is a plain sum, so the boundary
    |z| = 1 is admitted for it.  For all-integer exponent prefixes the
    powers are entire and negative reals are admitted too; z = 0 is always
    admitted (the series value there is 0 by continuity since every
    exponent is positive).
    """
    z = mpc(z)
    r = abs(z)
    if r > 1 or (r == 1 and not finite):
        raise DomainError(f"|z| = {mp.nstr(r, 8)} is outside the evaluation domain")
    if z.imag == 0 and z.real < 0 and not lam.all_integer:
        raise DomainError(f"z = {mp.nstr(z.real, 8)} lies on the slit (-1, 0)")
    return z


def _power(z, lam_val):
    if lam_val == int(lam_val):
        return z ** int(lam_val)
    return mp.power(z, mpf(lam_val))  # principal branch, argument in (-pi, pi)


def evaluate(f: MuntzSeries, z, tol: float = 1e-30, precision_bits: int = 256):
    """Evaluate the series at a slit-disk point by bounded partial sums.

    Finite series are summed exactly.  Rule-based series accumulate terms
    until the geometric tail bound (coefficient sup bound times
    r^lambda / (1 - r^gap), using the uniform exponent gap) drops below
    ``tol``; if the stored prefix is too short for that, a
    ConvergenceError says so rather than returning an unbounded guess.
    """
    with working_precision(precision_bits):
        z = check_slit_point(z, f.lam, finite=f.finite)
        if z == 0:
            return mpc(0)
        r = abs(z)
        acc = mpc(0)
        n_terms = f.n_terms
        for n in range(1, n_terms + 1):
            acc += f.coefficient(n) * _power(z, f.lam.values[n - 1])
            if f.rule is not None and n < n_terms:
                bound = _tail_bound_at(f, n + 1, r)
                if bound is not None and bound < mpf(tol):
                    return acc
        if f.finite:
            return acc
        bound = _tail_bound_at(f, n_terms + 1, r, extrapolate=True)
        if bound is None or not bound < mpf(tol):
            shown = "unknown" if bound is None else mp.nstr(bound, 5)
            raise ConvergenceError(
                f"tail bound {shown} after {n_terms} terms exceeds tol={tol}; "
                "extend the exponent prefix or relax tol")
        return acc


def _tail_bound_at(f: MuntzSeries, n_next: int, r, extrapolate: bool = False):
    """Bound sum_{n >= n_next} |c_n| r^lambda_n via sup|c| and the gap."""
    sup = f.rule.sup_bound(n_next)
    if sup is None:
        return None
    gap = f.lam.gap
    if not gap > 0 or not mp.isfinite(gap):
        return None
    if extrapolate:
        lam_next = mpf(f.lam.values[-1]) + gap
    else:
        lam_next = mpf(f.lam.values[n_next - 1])
    return sup * r ** lam_next / (1 - r ** gap)


# ---------------------------------------------------------------------------
# exact inner products


def l2_norm(f: MuntzSeries, precision_bits: int = 256):
    """Prefix L2 norm via the Gram quadratic form (exact kernel)."""
    with working_precision(precision_bits):
        items = f.term_items()
        acc = mpf(0)
        for lj, cj in items:
            for lk, ck in items:
                acc += (cj * conj(ck)).real / (mpf(lj) + mpf(lk) + 1)
        return sqrt(acc) if acc > 0 else mpf(0)


def series_inner_product(f: MuntzSeries, g: MuntzSeries, precision_bits: int = 256):
    """<f, g> = integral of f * conj(g), exact per-monomial formula."""
    with working_precision(precision_bits):
        acc = mpc(0)
        for lj, cj in f.term_items():
            for lk, ck in g.term_items():
                acc += cj * conj(ck) / (mpf(lj) + mpf(lk) + 1)
        return acc


# ---------------------------------------------------------------------------
# adaptive panel quadrature on (0, 1)


@dataclass(frozen=True)
class QuadratureSpec:
    """Adaptive panel quadrature targets.

    Panels are geometrically refined toward t = 0 (integrands behave like
    t^lambda_1 there); each panel runs tanh-sinh at working precision with
    its own error estimate, and the whole ladder escalates (more panels,
    higher degree) until the summed estimate meets ``tol``.
    """

    tol: float = 1e-30
    levels: int = 6
    ratio: float = 0.5
    maxdegree: int = 6
    max_rounds: int = 3

    def __post_init__(self):
        if not self.tol > 0:
            raise ParameterError("quadrature tol must be positive")
        if not 0 < self.ratio < 1:
            raise ParameterError("panel ratio must lie in (0,1)")
        # below degree 3 tanh-sinh has no comparison level and reports a
        # meaningless zero error estimate
        if self.maxdegree < 3:
            raise ParameterError("maxdegree must be >= 3 for a usable error estimate")


def quad_unit_interval(integrand: Callable, spec: QuadratureSpec = QuadratureSpec(),
                       precision_bits: int = 256):
    """Integrate over (0,1) with panelled tanh-sinh; returns (value, error)."""
    with working_precision(precision_bits):
        levels, degree = spec.levels, spec.maxdegree
        achieved = None
        for _ in range(spec.max_rounds + 1):
            points = [mpf(0)]
            points += [mpf(spec.ratio) ** j for j in range(levels, 0, -1)]
            points.append(mpf(1))
            total = mpc(0)
            err = mpf(0)
            for a, b in zip(points[:-1], points[1:]):
                val, e = mp.quad(integrand, [a, b], error=True, maxdegree=degree)
                total += val
                err += abs(e)
            achieved = (total, err)
            if err <= mpf(spec.tol):
                return (total if total.imag != 0 else total.real), err
            levels += 4
            degree += 1
    raise QuadratureError(
        f"quadrature error {mp.nstr(achieved[1], 5)} above tol={spec.tol}",
        achieved=achieved[0])


def quadrature_inner_product(f: SeriesOrCallable, g: MuntzSeries,
                             quad: QuadratureSpec = QuadratureSpec(),
                             precision_bits: int = 256):
    """<f, g> for black-box f against a finite series g.

    Realised as sum_k conj(c_k) * integral f(t) t^lambda_k dt: one smooth,
    well-scaled integral per monomial of g, so coefficient cancellation
    happens in exact sums rather than inside the integrand.
    Returns (value, error_estimate).
    """
    if isinstance(f, MuntzSeries):
        return series_inner_product(f, g, precision_bits), mpf(0)
    with working_precision(precision_bits):
        total = mpc(0)
        err = mpf(0)
        for lam_val, ck in g.term_items():
            if ck == 0:
                continue
            val, e = quad_unit_interval(
                lambda t, lv=lam_val: f(t) * _power(mpf(t), lv), quad, precision_bits)
            total += conj(ck) * val
            err += abs(ck) * e
        return (total if total.imag != 0 else total.real), err


def monomial_moments(f: SeriesOrCallable, lam: ExponentSequence, N: int,
                     quad: QuadratureSpec = QuadratureSpec(), precision_bits: int = 256):
    """Moment vector b_k = <f, e_k> = integral f(t) t^lambda_k dt, k <= N."""
    with working_precision(precision_bits):
        if isinstance(f, MuntzSeries):
            items = f.term_items()
            return [sum(cj / (mpf(lj) + mpf(lam.values[k]) + 1) for lj, cj in items)
                    for k in range(N)]
        out = []
        for k in range(N):
            val, _ = quad_unit_interval(
                lambda t, lv=lam.values[k]: f(t) * _power(mpf(t), lv), quad, precision_bits)
            out.append(val)
        return out


# ---------------------------------------------------------------------------
# coefficient recovery and projection


def recovered_coefficients(f: SeriesOrCallable, family: BiorthogonalFamily,
                           quad: QuadratureSpec = QuadratureSpec()):
    """All dual pairings <f, r_n^(N)>, n = 1..N, moments computed once."""
    N = family.truncation
    bits = family.precision_bits
    with working_precision(bits):
        b = monomial_moments(f, family.lam, N, quad, bits)
        out = []
        for n in range(N):
            acc = mpc(0)
            for k in range(N):
                acc += family.coeffs[k, n] * b[k]
            out.append(acc if acc.imag != 0 else acc.real)
        return out


def coefficient_recover(f: SeriesOrCallable, family: BiorthogonalFamily, n: int,
                        quad: QuadratureSpec = QuadratureSpec()):
    """Single dual pairing <f, r_n^(N)> (1-based n)."""
    if not 1 <= n <= family.truncation:
        raise InputError(f"n={n} outside 1..{family.truncation}")
    return recovered_coefficients(f, family, quad)[n - 1]


def project(f: SeriesOrCallable, family: BiorthogonalFamily,
            quad: QuadratureSpec = QuadratureSpec()) -> MuntzSeries:
    """Associated series f* = sum_n <f, r_n^(N)> t^lambda_n.

    This is the orthogonal projection onto the truncated span: its
    coefficients coincide with the solution of the Gram normal equations
    G a = b, which tests verify independently.
    """
    coeffs = recovered_coefficients(f, family, quad)
    return MuntzSeries(family.lam.prefix(family.truncation), tuple(coeffs))


def projection_residual(f: SeriesOrCallable, family: BiorthogonalFamily,
                        f_star: Optional[MuntzSeries] = None,
                        quad: QuadratureSpec = QuadratureSpec()):
    """L2 distance ||f - f*|| from f to the truncated span."""
    bits = family.precision_bits
    if f_star is None:
        f_star = project(f, family, quad)
    with working_precision(bits):
        if isinstance(f, MuntzSeries):
            norm2 = l2_norm(f, bits) ** 2
            cross = series_inner_product(f, f_star, bits)
        else:
            norm2, _ = quad_unit_interval(lambda t: abs(f(t)) ** 2, quad, bits)
            cross, _ = quadrature_inner_product(f, f_star, quad, bits)
        star2 = l2_norm(f_star, bits) ** 2
        res2 = norm2 - 2 * mpc(cross).real + star2
        return sqrt(res2) if res2 > 0 else mpf(0)


# ---------------------------------------------------------------------------
# dilation approximation (two-stage: pick rho, then truncate)


@dataclass(frozen=True)
class SpanApproximation:
    """Result of approximate_in_span.

    certified_error is the exactly computed prefix error
    ||f_prefix - polynomial||; tail_bound is the analytic bound on the
    neglected rule tail (None when the rule/kind pair has no closed form),
    and tail_certified says whether certified_error + tail_bound < 2*eps.
    For an already-finite series rho = 1.0 marks the exact short-circuit.
    """

    rho: float
    n_terms: int
    polynomial: MuntzSeries
    certified_error: float
    dilation_error: float
    prefix_terms: int
    tail_bound: Optional[float] = None
    tail_certified: bool = False


def _rule_series_tail_product_bound(rule: CoefficientRule, lam: ExponentSequence, K: int):
    """Bound sum_{n>K} |c_n| (2 lambda_n + 1)^(-1/2): the L2 norm of the tail."""
    if rule.name == "power":
        alpha, scale = rule.params["alpha"], abs(rule.params["scale"])
        if lam.kind == "power":
            p = float(lam.params["p"])
            beta = alpha + p / 2.0
            if beta > 1:
                return scale / np.sqrt(2.0) * K ** (1 - beta) / (beta - 1)
        if lam.kind == "lacunary":
            q = float(lam.params["q"])
            if alpha >= 0:
                r = q ** -0.5
                return scale / np.sqrt(2.0) * (K + 1) ** (-alpha) * r ** (K + 1) / (1 - r)
        return None
    if rule.name == "geometric":
        r, scale = abs(rule.params["ratio"]), abs(rule.params["scale"])
        return scale * r ** (K + 1) / (1 - r)
    return None


def _prefix_arrays(f: MuntzSeries, K: int):
    lam = f.lam if len(f.lam) >= K else f.lam.extended(K)
    lams = np.array([float(v) for v in lam.values[:K]])
    cs = np.array([complex(f.coefficient(n)) if n <= len(f.coeffs)
                   else complex(f.rule.coefficient(n)) for n in range(1, K + 1)])
    if np.allclose(cs.imag, 0.0):
        cs = cs.real
    return lam, lams, cs


def _gram_kernel(lams: np.ndarray) -> np.ndarray:
    return 1.0 / (lams[:, None] + lams[None, :] + 1.0)


def _quad_form_norm(d: np.ndarray, A: np.ndarray) -> float:
    val = float(np.real(np.conj(d) @ A @ d))
    return float(np.sqrt(max(val, 0.0)))


def _check_prefix_norm_bounded(cs, A):
    """Monotone-bounded check on the prefix quadratic form.

    Partial norms at K/4, K/2, K must show shrinking increments; a flat
    increment trend (like c_n = 1 on squares, whose norm diverges
    logarithmically) is treated as a non-membership signal.
    """
    K = len(cs)
    ks = [max(1, K // 4), max(1, K // 2), K]
    sums = []
    for k in ks:
        d = cs[:k]
        sums.append(float(np.real(np.conj(d) @ A[:k, :k] @ d)))
    inc1 = sums[1] - sums[0]
    inc2 = sums[2] - sums[1]
    if inc2 > 1e-12 and inc1 > 1e-12 and inc2 > 0.9 * inc1:
        raise NonMemberSignal(
            f"prefix norm increments do not decay ({inc1:.3e} -> {inc2:.3e}); "
            "the quadratic form looks divergent")


def approximate_in_span(f: MuntzSeries, eps: float, max_terms: int = 4096,
                        rho_cap: float = 1 - 1e-9) -> SpanApproximation:
    """Two-stage span approximation: dilate, then truncate.

    Stage 1 bisects on rho until the dilation error ||f(rho t) - f(t)||
    lands in [eps/2, eps] (determinism; the existence argument only needs
    it below eps).  Stage 2 picks the shortest head of the dilated series
    whose dropped-term bound stays below eps, so the prefix error of the
    returned polynomial is below 2*eps.  Runs in float64: the certificate
    tolerances (eps >= ~1e-6) are far above double rounding.

    Raises NonMemberSignal when the dilation error cannot be brought
    below eps for rho up to ``rho_cap``, or when the prefix quadratic
    form fails its monotone-bounded precondition.
    """
    if not eps > 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    if f.finite:
        return SpanApproximation(
            rho=1.0, n_terms=len(f.coeffs), polynomial=f, certified_error=0.0,
            dilation_error=0.0, prefix_terms=len(f.coeffs), tail_bound=0.0,
            tail_certified=True)

    # grow the working prefix until the analytic tail bound fits in eps/2
    K = 256
    tail = _rule_series_tail_product_bound(f.rule, f.lam, K)
    extendable = f.lam.kind in ("power", "lacunary")
    while tail is not None and tail > eps / 2 and K < max_terms and extendable:
        K = min(2 * K, max_terms)
        tail = _rule_series_tail_product_bound(f.rule, f.lam, K)
    if not extendable:
        K = min(K, len(f.lam))

    lam, lams, cs = _prefix_arrays(f, K)
    A = _gram_kernel(lams)
    _check_prefix_norm_bounded(cs, A)

    def dilation_error(rho: float) -> float:
        with np.errstate(under="ignore"):
            d = cs * (np.power(rho, lams) - 1.0)
        return _quad_form_norm(d, A)

    lo, hi = 0.5, rho_cap
    if dilation_error(hi) > eps:
        raise NonMemberSignal(
            f"dilation error {dilation_error(hi):.3e} still above eps={eps} at rho={hi}")
    e_lo = dilation_error(lo)
    while e_lo <= eps and lo > 1e-6:
        lo /= 2
        e_lo = dilation_error(lo)
    if e_lo <= eps:
        rho, e_rho = lo, e_lo
    else:
        rho, e_rho = hi, dilation_error(hi)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            e_mid = dilation_error(mid)
            if eps / 2 <= e_mid <= eps:
                rho, e_rho = mid, e_mid
                break
            if e_mid > eps:
                lo = mid
            else:
                hi = mid
                rho, e_rho = mid, e_mid

    # stage 2: shortest head of the dilated series with dropped terms under eps
    with np.errstate(under="ignore"):
        dilated = cs * np.power(rho, lams)
    weights = np.abs(dilated) / np.sqrt(2.0 * lams + 1.0)
    suffix = np.concatenate([np.cumsum(weights[::-1])[::-1], [0.0]])
    n_terms = K
    for N in range(1, K + 1):
        if suffix[N] <= eps:
            n_terms = N
            break

    poly = MuntzSeries(lam.prefix(n_terms), tuple(dilated[:n_terms]))
    d = np.array(cs, dtype=complex)
    d[:n_terms] -= dilated[:n_terms]
    certified = _quad_form_norm(d, A)
    tail_val = None if tail is None else float(tail)
    certified_ok = tail_val is not None and certified + tail_val < 2 * eps
    return SpanApproximation(
        rho=float(rho), n_terms=n_terms, polynomial=poly,
        certified_error=float(certified), dilation_error=float(e_rho),
        prefix_terms=K, tail_bound=tail_val, tail_certified=bool(certified_ok))
