"""Membership tests for the gap Hardy subspace over integer exponents.

For integer exponent sets the monomials are entire, the series is an
ordinary power series with gaps, and membership in the Hardy subspace is
equivalent to square-summable coefficients together with membership in
the closed monomial span.  Numerical evidence alone cannot certify an
infinite sum's convergence or divergence, so yes/no verdicts require a
comparison certificate carried by the coefficient rule (p-series or
geometric); everything else is reported as inconclusive with the partial
sums attached.

The built-in counterexample family c_n = n^(-1/2) on lambda = n^2 has a
divergent coefficient square-sum while its L2(0,1) quadratic form stays
bounded; the latter is certified only empirically (bounded, Cauchy
partial sums), which is exactly what quadratic_form_partial_sums reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from mpmath import mp, mpc, mpf, sqrt

from .biorthogonal import BiorthogonalFamily, dual_family
from .config import DEFAULT_TOLERANCES, working_precision
from .errors import DomainError, InputError, QuadratureError
from .exponents import ExponentSequence
from .muntz_space import (
    MuntzSeries,
    QuadratureSpec,
    SeriesOrCallable,
    evaluate,
    l2_norm,
    monomial_moments,
    quad_unit_interval,
)


@dataclass(frozen=True)
class HardyReport:
    """Tri-state membership verdict with the evidence that produced it."""

    member: str                                  # yes | no | inconclusive
    l2_coeff_sums: tuple = ()                    # ((K, partial sum), ...)
    coefficient_certificate: Optional[str] = None
    closure_flag: Optional[str] = None           # yes | no | inconclusive
    residual_trend: tuple = ()                   # ((N, residual), ...)
    recovered: tuple = ()
    radial_bound_M: Optional[object] = None
    radial_integral_estimates: dict = field(default_factory=dict)
    notes: str = ""


def _require_integer_lambda(lam: ExponentSequence):
    if not lam.all_integer:
        raise DomainError("gap Hardy membership is defined for integer exponents only")


def _coefficient_partial_sums(f: MuntzSeries, K: int):
    ks = sorted({max(1, K // 8), max(1, K // 4), max(1, K // 2), K})
    sums = []
    acc = mpf(0)
    for n in range(1, K + 1):
        acc += abs(mpc(f.coefficient(n))) ** 2
        if n in ks:
            sums.append((n, acc))
    return tuple(sums)


def h2_membership(f: MuntzSeries, K: int = 1000) -> HardyReport:
    """Decide square-summability of the coefficients at term budget K.

    Finite series are members outright.  Rule-based series are decided by
    the rule's comparison certificate; without one the verdict is
    inconclusive and the partial sums are the whole report.
    """
    _require_integer_lambda(f.lam)
    if f.finite:
        with working_precision(128):
            sums = _coefficient_partial_sums(f, min(K, f.n_terms))
        return HardyReport(member="yes", l2_coeff_sums=sums,
                           coefficient_certificate="finite sum")
    with working_precision(128):
        budget = K if f.lam.kind in ("power", "lacunary") else min(K, len(f.lam))
        ks = sorted({max(1, budget // 8), max(1, budget // 4), max(1, budget // 2), budget})
        acc = mpf(0)
        sums = []
        for n in range(1, budget + 1):
            acc += abs(mpc(f.rule.coefficient(n))) ** 2
            if n in ks:
                sums.append((n, acc))
    cert = f.rule.l2_class
    if cert == "convergent":
        member = "yes"
        note = f"rule {f.rule.name}{f.rule.params} certifies a convergent square-sum"
    elif cert == "divergent":
        member = "no"
        note = f"rule {f.rule.name}{f.rule.params} certifies a divergent square-sum"
    else:
        member = "inconclusive"
        note = "no comparison certificate on the rule; partial sums only"
    return HardyReport(member=member, l2_coeff_sums=tuple(sums),
                       coefficient_certificate=cert, notes=note)


def closure_membership_via_frame(f: SeriesOrCallable, family: BiorthogonalFamily,
                                 K: Optional[int] = None,
                                 quad: QuadratureSpec = QuadratureSpec(),
                                 closure_tol: Optional[float] = None,
                                 stagnation_ratio: Optional[float] = None) -> HardyReport:
    """Desk-scale realization of the two-sided membership criterion.

    (a) projection residuals over growing truncations decide closeness to
    the span; (b) the recovered dual pairings supply the coefficient
    square-sums.  "yes" needs the residual below tolerance and decaying
    square-sum increments; a stagnating residual (trailing ratio at or
    above ``stagnation_ratio``) is the desk signature of a positive
    distance and yields "no"; anything in between stays inconclusive.
    """
    _require_integer_lambda(family.lam)
    closure_tol = closure_tol if closure_tol is not None else DEFAULT_TOLERANCES["closure_residual"]
    stagnation_ratio = (stagnation_ratio if stagnation_ratio is not None
                        else DEFAULT_TOLERANCES["stagnation_ratio"])
    N = family.truncation
    bits = family.precision_bits

    # moments and the target norm are computed once; each sub-truncation
    # reuses the prefix of the moment vector through its own Gram inverse
    with working_precision(bits):
        b = monomial_moments(f, family.lam, N, quad, bits)
        if isinstance(f, MuntzSeries):
            norm2 = l2_norm(f, bits) ** 2
        else:
            norm2, _ = quad_unit_interval(lambda t: abs(f(t)) ** 2, quad, bits)

    trend = []
    steps = sorted({max(2, N - 6), max(2, N - 4), max(2, N - 2), N})
    for Ns in steps:
        fam_s = family if Ns == N else dual_family(family.lam, Ns, bits)
        with working_precision(bits):
            a = [sum(fam_s.coeffs[k, n] * b[k] for k in range(Ns)) for n in range(Ns)]
            inside2 = mpf(0)
            for i in range(Ns):
                for j in range(Ns):
                    inside2 += (a[i] * mpc(a[j]).conjugate() * fam_s.gram.entries[i, j]).real
            cross = sum((mpc(a[n]).conjugate() * b[n]).real for n in range(Ns))
            res2 = norm2 - 2 * cross + inside2
            trend.append((Ns, sqrt(res2) if res2 > 0 else mpf(0)))

    with working_precision(bits):
        coeffs = [sum(family.coeffs[k, n] * b[k] for k in range(N)) for n in range(N)]
        sq = [abs(mpc(c)) ** 2 for c in coeffs]
        sums = []
        acc = mpf(0)
        for n, v in enumerate(sq, start=1):
            acc += v
            sums.append((n, acc))
        scale = max(mpf(1), sqrt(acc))

    res_final = trend[-1][1]
    if res_final <= mpf(closure_tol) * scale:
        closure = "yes"
    elif len(trend) >= 2 and trend[-2][1] > 0 and res_final / trend[-2][1] >= mpf(stagnation_ratio):
        closure = "no"
    else:
        closure = "inconclusive"

    if closure == "yes":
        # decaying square-sum increments are the desk evidence for (b)
        half = sums[len(sums) // 2][1]
        tail_growth = acc - half
        member = "yes" if tail_growth <= max(half, mpf(1)) else "inconclusive"
    elif closure == "no":
        member = "no"
    else:
        member = "inconclusive"

    return HardyReport(member=member, l2_coeff_sums=tuple(sums[-4:]),
                       closure_flag=closure, residual_trend=tuple(trend),
                       recovered=tuple(coeffs))


@dataclass(frozen=True)
class RadialBoundReport:
    """bound_M is theta-independent by construction; numeric_integral is a
    certified estimate over [0, 1 - boundary_cut], and adding
    remainder_bound (the Cauchy-Schwarz sliver bound) dominates the full
    integral, so numeric_integral + remainder_bound <= bound_M is the
    rigorous form of the radial inequality."""

    bound_M: object
    numeric_integral: object
    remainder_bound: object
    boundary_cut: float
    quad_error: object


def _sliver_integral_bound(lam: ExponentSequence, h):
    """Bound on the integral over (1-h, 1) of sum_n t^(2 lambda_n) dt.

    power kind: the exponent sum is below 1 + Gamma(1+1/p) (2 ln(1/t))^(-1/p)
    and ln(1/t) >= 1-t gives an integrable envelope; lacunary kind: at most
    log_q(1/(2(1-t))) + 1.582 terms matter.  None for other kinds.
    """
    if lam.kind == "power":
        p = mpf(lam.params["p"])
        return h + mp.gamma(1 + 1 / p) * 2 ** (-1 / p) * h ** (1 - 1 / p) / (1 - 1 / p)
    if lam.kind == "lacunary":
        q = mpf(lam.params["q"])
        return h * (mp.log(1 / (2 * h)) / mp.log(q) + 1 / mp.log(q) + mpf("1.582"))
    return None


def radial_l2_bound(f: MuntzSeries, theta: float, K: int = 200,
                    precision_bits: int = 256, boundary_cut: float = 1e-3) -> RadialBoundReport:
    """Certified bound M and a numeric estimate of the radial L2 integral.

    M = (sum_{n<=K} |c_n|^2 + coefficient tail) * (sum_{n<=K} 1/(2 lambda_n+1)
    + reciprocal tail); both tails must be certified (rule comparison and
    exponent-kind bound), and M does not involve theta.

    The integral of |f(t e^(i theta))|^2 is estimated by Gauss-Legendre
    panels over [0, 1 - boundary_cut], with the evaluation prefix long
    enough that the series tail at every node is negligible; the sliver up
    to t = 1 is covered by the closed-form remainder bound instead of
    uncertifiable term-by-term evaluation near the boundary.  Finite
    series are plain sums, so they integrate over the whole interval with
    zero remainder.
    """
    _require_integer_lambda(f.lam)
    if f.finite and not any(c != 0 for c in f.coeffs):
        return RadialBoundReport(mpf(0), mpf(0), mpf(0), 0.0, mpf(0))

    with working_precision(precision_bits):
        if f.finite:
            Kc = f.n_terms
            coeff_tail = mpf(0)
        else:
            Kc = K
            coeff_tail = f.rule.l2_tail_bound(K)
            if coeff_tail is None:
                raise InputError(
                    "rule carries no convergent-tail certificate; the radial bound "
                    "needs established membership")
            if f.lam.kind not in ("power", "lacunary"):
                raise InputError(
                    f"exponent kind {f.lam.kind!r} has no reciprocal-tail bound")
        h = mpf(boundary_cut)
        # prefix long enough that t^lambda at the cut is ~ exp(-60)
        if f.finite:
            need = Kc
        else:
            need = max(Kc, K)
            if f.lam.kind == "power":
                p = float(f.lam.params["p"])
                need = max(need, min(4096, int((60 / float(h)) ** (1 / p)) + 2))
            elif f.lam.kind == "lacunary":
                q = float(f.lam.params["q"])
                need = max(need, int(float(mp.log(60 / h) / mp.log(q))) + 2)
        lam = f.lam if len(f.lam) >= need else f.lam.extended(need)
        f_eval = f if lam is f.lam else MuntzSeries(lam, f.coeffs, f.rule)
        K_recip = min(K, len(lam))
        coeff_sum = sum(abs(mpc(f_eval.coefficient(n))) ** 2 for n in range(1, Kc + 1))
        recip_sum = sum(1 / (2 * mpf(lam.values[n - 1]) + 1) for n in range(1, K_recip + 1))
        recip_tail = lam.tail_reciprocal_bound(K_recip)
        if recip_tail is None:
            if f.finite and f.n_terms <= K_recip:
                recip_tail = mpf(0)
            else:
                raise InputError(
                    f"exponent kind {lam.kind!r} has no reciprocal-tail bound")
        bound_M = (coeff_sum + coeff_tail) * (recip_sum + recip_tail)

        if f.finite:
            cut = mpf(1)
            remainder = mpf(0)
        else:
            cut = 1 - h
            sliver = _sliver_integral_bound(lam, h)
            remainder = None if sliver is None else (coeff_sum + coeff_tail) * sliver

        phase = mp.e ** (mpc(0, 1) * mpf(theta))
        eval_tol = 10.0 ** (-(precision_bits // 16))

        def integrand(t):
            z = mpf(t) * phase
            return abs(evaluate(f_eval, z, tol=eval_tol, precision_bits=precision_bits)) ** 2

        panels = [mpf(0), cut / 2, 3 * cut / 4, 7 * cut / 8, cut]
        total = mpf(0)
        err = mpf(0)
        for a, b in zip(panels[:-1], panels[1:]):
            val, e = mp.quad(integrand, [a, b], error=True, method="gauss-legendre")
            total += val
            err += abs(e)
        if err > max(mpf(1e-6), mpf(1e-3) * abs(total)):
            raise QuadratureError(
                f"radial integral estimate unreliable (err {mp.nstr(err, 4)})", achieved=total)
        return RadialBoundReport(bound_M, total, remainder,
                                 0.0 if f.finite else float(h), err)


def quadratic_form_partial_sums(rule, lam: ExponentSequence, checkpoints: Sequence[int]):
    """Float64 oracle for the L2 quadratic form of a rule-generated prefix.

    Returns [(K, S_K), ...] with S_K = sum_{n,m<=K} c_n c_m / (lambda_n +
    lambda_m + 1), computed incrementally.  Used to exhibit bounded Cauchy
    partial sums for series (like c_n = n^(-1/2) on squares) whose
    coefficient square-sum diverges.
    """
    checkpoints = sorted(set(int(k) for k in checkpoints))
    K = checkpoints[-1]
    if len(lam) < K:
        lam = lam.extended(K)
    lams = np.array([float(v) for v in lam.values[:K]])
    cs = np.array([float(np.real(rule.coefficient(n))) for n in range(1, K + 1)])
    out = []
    S = 0.0
    for k in range(1, K + 1):
        lk, ck = lams[k - 1], cs[k - 1]
        if k > 1:
            S += 2.0 * ck * float(np.sum(cs[: k - 1] / (lams[: k - 1] + lk + 1.0)))
        S += ck * ck / (2.0 * lk + 1.0)
        if k in checkpoints:
            out.append((k, S))
    return out
