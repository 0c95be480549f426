"""Generalized translations on the half-line.

Laguerre translation diagonalizes the normalized Laguerre polynomials
(T_t R_n = R_n(t) R_n); Bessel translation makes j_alpha(lam .) multiplicative.
Both are norm contractions (the Laguerre one after the factor e^{-t/2}).

    python demos/translations.py
"""
import math
import warnings

import numpy as np

from halfline import LAGUERRE_FN, BESSEL_FN, LaguerreTranslationParams, NormSpec, norm, special
from halfline.bessel import angular_rule_for, translate_bessel, translation_values
from halfline.laguerre import translate_laguerre
from halfline.spaces import bessel_j, bump, exp_decay, gaussian, laguerre_R

warnings.simplefilter("ignore")
alpha = 0.5
grid = np.linspace(0.0, 4.0, 9)

params = LaguerreTranslationParams.create(alpha)
print("Laguerre eigen-relation  max |T_t R_n(x) - R_n(t) R_n(x)|")
for n in (0, 2, 5, 8):
    lhs = np.array([translate_laguerre(laguerre_R(n, alpha), t, params)(grid) for t in grid])
    rhs = np.outer(special.normalized_laguerre(n, alpha, grid), special.normalized_laguerre(n, alpha, grid))
    print(f"  n = {n}: {np.max(np.abs(lhs - rhs)):.2e}")

rule = angular_rule_for(alpha)
print("\nBessel product formula  max |T_t j(lam .)(s) - j(lam t) j(lam s)|")
s = np.linspace(0.25, 4.0, 16)
for lam in (0.5, 1.0, 3.0):
    lhs = translation_values(bessel_j(alpha, lam), s[None, :], s[:, None], rule)
    rhs = np.outer(special.normalized_bessel(alpha, lam * s), special.normalized_bessel(alpha, lam * s))
    print(f"  lam = {lam}: {np.max(np.abs(lhs - rhs)):.2e}")

print("\nnorm ratios (<= 1):  e^{-t/2} ||T_t f||_{p,alpha} / ||f||  and  ||T_t f||_{p,(alpha)} / ||f||")
for f in (gaussian(1.0), bump(2.0, 1.0), exp_decay(1.0)):
    for p in (1.0, 2.0):
        t = 1.5
        lag = NormSpec(p, alpha, LAGUERRE_FN)
        bes = NormSpec(p, alpha, BESSEL_FN)
        r_lag = math.exp(-t / 2) * norm(translate_laguerre(f, t, params), lag) / norm(f, lag)
        r_bes = norm(translate_bessel(f, t, alpha), bes) / norm(f, bes)
        print(f"  {f.spec['family']:9s} p = {p:g}: Laguerre {r_lag:.6f}  Bessel {r_bes:.12f}")
