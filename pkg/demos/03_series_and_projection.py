"""Series on the slit disk, coefficient recovery, and projections.

Three ways to meet the same coefficients: evaluate a gap series against a
brute-force partial sum, recover coefficients of a black-box function by
pairing with the duals, and project an outside function (t^3) onto the
span to see the best-approximation residual appear.
Ends with the two-stage dilation approximation: pick rho, then truncate.
"""

from mpmath import mp, mpc, mpf

from muntzlab import (
    approximate_in_span,
    MuntzSeries,
    dual_family,
    evaluate,
    finite_series,
    generate_exponents,
    project,
    projection_residual,
    recovered_coefficients,
    rule_from_name,
)

mp.prec = 256

squares = generate_exponents("power", {"p": 2}, 12)

print("== evaluating f(z) = sum (1/n) z^(n^2) ==")
f = MuntzSeries(squares, (), rule_from_name("inv_n"))
z = mpf("0.5")
value = evaluate(f, z, tol=1e-20)
brute = sum(mpf("0.5") ** (n * n) / n for n in range(1, 60))
print("tail-bounded evaluation:", mp.nstr(value, 15))
print("60-term brute force:    ", mp.nstr(brute, 15))
print("principal branch off the positive axis: f(i/2) =",
      mp.nstr(evaluate(f, mpc(0, "0.5"), tol=1e-20), 10))

print("\n== recovering coefficients of a black box ==")
fam = dual_family(squares, 10, 256)
black_box = lambda t: 3 * t ** 4 - 5 * t ** 49
coeffs = recovered_coefficients(black_box, fam)
print("pairings <f, r_n> for f = 3t^4 - 5t^49:")
print([mp.nstr(c, 5) for c in coeffs])

print("\n== projecting t^3 onto span{t, t^2} ==")
lam12 = generate_exponents("integers", {"values": [1, 2]}, 2)
fam2 = dual_family(lam12, 2, 256)
f_star = project(lambda t: t ** 3, fam2)
print("f* =", mp.nstr(f_star.coeffs[0], 8), "* t +", mp.nstr(f_star.coeffs[1], 8), "* t^2",
      " (-2/5 and 4/3)")
res = projection_residual(lambda t: t ** 3, fam2, f_star)
print("best-approximation residual ||t^3 - f*|| =", mp.nstr(res, 8), " (= sqrt(1/1575))")

print("\n== two-stage approximation inside the span ==")
eps = 1e-3
ap = approximate_in_span(f, eps)
print(f"target eps = {eps}: rho = {ap.rho:.8f}, {ap.n_terms} terms kept "
      f"of a {ap.prefix_terms}-term working prefix")
print(f"certified prefix error = {ap.certified_error:.3e}  (< 2*eps = {2 * eps})")
print(f"analytic tail bound    = {ap.tail_bound:.3e}   tail certified: {ap.tail_certified}")

finite = finite_series(lam12, [1, -1])
ap0 = approximate_in_span(finite, eps)
print("a finite series short-circuits: rho =", ap0.rho, ", error =", ap0.certified_error)
