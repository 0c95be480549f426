"""The Hankel transform H f(y) = c int f(x) j_alpha(x y) x^{2 alpha + 1} dx,
c = 2^{-alpha} / Gamma(alpha + 1): Gaussian fixed point, Plancherel, and the
transform turning Bessel translation and convolution into multiplication.

    python demos/hankel.py
"""
import warnings

import numpy as np

from halfline import HankelParams, hankel, hankel_inverse
from halfline.bessel import (convolution_identity_check, hankel_function, hankel_of_translation_check,
                             hausdorff_young_ratio, plancherel)
from halfline.spaces import bump, gaussian

warnings.simplefilter("ignore")
y = np.linspace(0.0, 8.0, 33)
for alpha in (0.0, 0.5, 1.0):
    params = HankelParams(alpha)
    g = gaussian(1.0)
    fixed = np.max(np.abs(hankel(g, params, y) - np.exp(-y ** 2 / 2)))
    x = np.linspace(0.0, 6.0, 25)
    back = np.max(np.abs(hankel_inverse(hankel_function(g, params), params, x) - g(x)))
    print(f"alpha = {alpha}")
    print(f"  |H gauss - gauss| = {fixed:.1e}   |H^-1 H gauss - gauss| = {back:.1e}")
    for f in (gaussian(0.7), bump(2.0, 1.0)):
        lhs, rhs, rel = plancherel(f, params)
        print(f"  Plancherel {f.spec['family']:8s} ||Hf|| = {lhs:.10f}  ||f|| = {rhs:.10f}  rel {rel:.1e}")
    print(f"  Hausdorff-Young ratio, p = 1.5, bump: {hausdorff_young_ratio(bump(2.0, 1.0), 1.5, params):.4f} (<= 1)")
    trans = max(hankel_of_translation_check(g, t, y, params)["max_residual"] for t in (0.5, 1.0, 2.0))
    conv = convolution_identity_check(gaussian(1.0), gaussian(0.8), y[::4], params)["max_residual"]
    print(f"  H(T_t f) = j(t .) Hf residual {trans:.1e};  H(f*g) = Hf Hg / c residual {conv:.1e}")
