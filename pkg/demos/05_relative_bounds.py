"""Relative perturbation bounds: |Sx| <= lambda1 |Tx| + lambda2 |(T+S)x|.

For surjective T with lambda1 < 1, the perturbed operator stays surjective,
null spaces are preserved, the update has the closed form
pinv(T) (I + S pinv(T))^-1, and gamma can only shrink by the factor
(1 - lambda1) / (1 + lambda2). The minimal lambda1 with lambda2 = 0 is
exactly |S pinv(T)| whenever N(T) lies inside N(S).

Run with:  python3 demos/05_relative_bounds.py
"""

from pinvperturb import (
    GenSpec,
    check_relative_bound,
    error_bound_lambda2_zero,
    estimate_lambda1,
    pseudoinverse,
    random_operator,
    random_relative_perturbation,
    reduced_min_modulus,
    spectral_norm,
    update_relative_surjective,
)

t = random_operator(GenSpec(rows=3, cols=6, rank=3, gamma_target=0.5,
                            norm_target=1.5, seed=21))
s = random_relative_perturbation(t, 0.6, seed=22)

lam = estimate_lambda1(t, s)
print("minimal lambda1 (= |S pinv(T)|):", f"{lam:.4f}")
ok, slack = check_relative_bound(t, s, lam + 1e-8, 0.0)
print("certified at lambda1 + 1e-8:", ok, f"(worst slack {slack:.2e})")
ok_tight, _ = check_relative_bound(t, s, lam * 0.999, 0.0)
print("0.1% smaller lambda1 fails:", not ok_tight)

res = update_relative_surjective(t, s, lam, 0.0)
print("\nupdate vs oracle discrepancy:", f"{res.oracle_discrepancy:.2e}")

norm_td = spectral_norm(pseudoinverse(t).pinv)
norm_sum = spectral_norm(pseudoinverse(t + s).pinv)
print("norm growth: |pinv(T+S)| =", f"{norm_sum:.4f}",
      "<=", f"{norm_td / (1 - lam):.4f}", "= |pinv(T)| / (1 - lambda1)")

bound = error_bound_lambda2_zero(t, s)
measured = spectral_norm(pseudoinverse(t + s).pinv - pseudoinverse(t).pinv)
print("error bound:", f"{measured:.4f} <= {bound:.4f}")

# gamma direction: the perturbed gamma sits ABOVE (1 - lambda1) gamma(T)
g_t, g_sum = reduced_min_modulus(t), reduced_min_modulus(t + s)
print("\ngamma(T) =", f"{g_t:.4f}", "| gamma(T+S) =", f"{g_sum:.4f}")
print("lower bound (1 - lambda1) gamma(T) =", f"{(1 - lam) * g_t:.4f}")
assert g_sum >= (1 - lam) * g_t - 1e-10
