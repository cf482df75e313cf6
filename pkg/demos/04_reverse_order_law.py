"""Reverse-order law: pinv(FG) = pinv(G) pinv(F) under rank hypotheses.

Holds when F has full column rank and G has full row rank, together with
the closed form G* (G G*)^-1 (F* F)^-1 F*. Without the hypotheses, the law
fails, and this demo shows a concrete counterexample.

Run with:  python3 demos/04_reverse_order_law.py
"""

import numpy as np

from pinvperturb import (
    GenSpec,
    check_rol_hypotheses,
    pseudoinverse,
    random_operator,
    reverse_order_pinv,
    spectral_norm,
)

f = random_operator(GenSpec(rows=5, cols=3, rank=3, gamma_target=0.7,
                            norm_target=1.3, seed=11))
g = random_operator(GenSpec(rows=3, cols=6, rank=3, gamma_target=0.7,
                            norm_target=1.3, seed=12))
print("hypotheses hold:", check_rol_hypotheses(f, g))

fp = reverse_order_pinv(f, g)
print("product shape:", fp.a.shape)
print("max pairwise discrepancy across the three routes:",
      f"{fp.max_pairwise_discrepancy:.3e}")

# the three routes: direct SVD, reverse order, closed form
for name, route in (("oracle", fp.pinv_oracle),
                    ("reverse order", fp.pinv_reverse),
                    ("closed form", fp.pinv_closed_form)):
    print(f"  |{name}| = {spectral_norm(route):.6f}")

# counterexample: F = [1 1] is not of full column rank and the law breaks
f_bad = np.array([[1.0, 1.0]])
g_ok = np.array([[1.0, 0.0], [0.0, 2.0]])
print("\ncounterexample with a column-rank-deficient F:")
print("  hypotheses hold:", check_rol_hypotheses(f_bad, g_ok))
oracle = pseudoinverse(f_bad @ g_ok).pinv
naive = pseudoinverse(g_ok).pinv @ pseudoinverse(f_bad).pinv
print("  pinv(FG)        =", np.round(oracle.real, 4).ravel())
print("  pinv(G) pinv(F) =", np.round(naive.real, 4).ravel())
print("  disagreement    =", f"{spectral_norm(oracle - naive):.4f}")
