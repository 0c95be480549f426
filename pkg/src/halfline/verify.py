"""Identity-verification suites: each check records a residual, its tolerance and
whether the check is asserted (report-only checks carry `asserted: False`)."""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.special import gammaln

from . import bessel, laguerre, sequences, special
from ._exceptions import QuadratureWarning
from .quadrature import gauss_gen_laguerre, normalized_angular_rule
from .spaces import LAGUERRE_FN, NormSpec, bessel_j, bump, gaussian, laguerre_R, norm

SUITES = ("special", "laguerre", "sequences", "bessel", "bridges")


def _check(name, residual, tolerance, anchor, asserted=True, **extra):
    residual = float(residual)
    passed = bool(residual <= tolerance) if asserted else None
    return {"name": name, "residual": residual, "tolerance": tolerance, "asserted": asserted, "passed": passed,
            "identity": anchor, **extra}


def suite_special(alpha=0.5, **_):
    z = np.linspace(0.1, 20.0, 200)
    step = 1e-5
    fd = (special.normalized_bessel(alpha, z + step) - special.normalized_bessel(alpha, z - step)) / (2 * step)
    exact = special.normalized_bessel_derivative(alpha, z)
    rel = np.max(np.abs(fd - exact) / np.maximum(np.abs(exact), 1e-3))
    x = np.linspace(0.0, 30.0, 7)
    rule = gauss_gen_laguerre(20, alpha)
    moments = [abs(rule.integrate(rule.nodes ** k) / math.exp(gammaln(alpha + k + 1)) - 1) for k in range(30)]
    angular = normalized_angular_rule(96, alpha)
    return [
        _check("bessel_at_zero", abs(special.normalized_bessel(alpha, 0.0) - 1.0), 0.0, "j_alpha(0) = 1"),
        _check("bessel_derivative_vs_finite_difference", rel, 1e-6,
               "j_alpha'(z) = -z j_{alpha+1}(z) / (2 alpha + 2)"),
        _check("laguerre_at_zero", np.max(np.abs(special.normalized_laguerre_table(20, alpha, 0.0) - 1.0)), 1e-14,
               "R_n(0) = 1"),
        _check("laguerre_weight_identity",
               np.max(np.abs(special.laguerre(7, alpha, x) / special.binomial_weight(alpha, 7)
                             - special.normalized_laguerre(7, alpha, x))), 1e-10, "L_n = w(n) R_n"),
        _check("gauss_laguerre_moments", max(moments), 1e-11, "int x^k e^{-x} x^alpha = Gamma(alpha+k+1)"),
        _check("angular_rule_mass", abs(angular.weights.sum() - 1.0), 1e-13, "angular measure has unit mass"),
    ]


def suite_laguerre(alpha=0.5, **_):
    if not alpha > -0.5:
        raise ValueError("laguerre suite needs alpha > -1/2")
    params = laguerre.LaguerreTranslationParams.create(alpha)
    grid = np.linspace(0.0, 4.0, 8)
    worst = 0.0
    for n in range(9):
        f = laguerre_R(n, alpha)
        lhs = laguerre.translation_values(f, grid[None, :], grid[:, None], params)
        rhs = np.outer(special.normalized_laguerre(n, alpha, grid), special.normalized_laguerre(n, alpha, grid))
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    rng = np.random.default_rng(0)
    coeffs = laguerre.CoeffVec(rng.normal(size=12), alpha)
    back = laguerre.analyze(laguerre.synthesize(coeffs), alpha, 11).values
    poly = laguerre.synthesize(coeffs)
    lhs = norm(poly, NormSpec(2.0, alpha, LAGUERRE_FN))
    rhs = math.sqrt(math.exp(-gammaln(alpha + 1))
                    * np.sum(coeffs.values ** 2 * special.binomial_weights(alpha, 11)))
    a, b = laguerre_R(2, alpha) + laguerre_R(0, alpha), laguerre_R(2, alpha) + laguerre_R(1, alpha)
    conv = laguerre.convolve_laguerre(a, b, params)
    conv_hat = laguerre.analyze(conv, alpha, 5).values
    product = laguerre.analyze(a, alpha, 5).values * laguerre.analyze(b, alpha, 5).values
    return [
        _check("translation_eigen_relation", worst, 1e-6, "T_t R_n(x) = R_n(t) R_n(x)", grid="8x8 on [0,4]^2",
               n_max=8),
        _check("analysis_synthesis_round_trip", np.max(np.abs(back - coeffs.values)), 1e-10,
               "analyze(synthesize(a)) = a", length=12),
        _check("parseval", abs(lhs - rhs) / rhs, 1e-8, "||f||^2 = (1/Gamma(alpha+1)) sum f_hat(n)^2 w(n)"),
        _check("convolution_multiplicative", np.max(np.abs(conv_hat - product)) / np.max(np.abs(product)), 1e-8,
               "(f * g)^ = f_hat g_hat"),
    ]


def suite_sequences(alpha=0.5, K=24, **_):
    K = int(K)
    table = sequences.build_linearization_table(K, alpha)
    k = np.arange(min(K, 20) + 1)
    closed = 2.0 ** (-(alpha + k + 1))
    faces = np.max(np.abs(table.values[0, 0, k] - closed) / closed)
    sym = max(float(np.max(np.abs(table.values - np.transpose(table.values, perm))))
              for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0)))
    excess, raw = 0.0, 0.0
    top = min(6, K // 4)
    for n in range(top + 1):
        for m in range(top + 1):
            total, tail = table.sum_identity(n, m)
            raw = max(raw, abs(total - 1.0))
            excess = max(excess, abs(total - 1.0) - tail)
    return [
        _check("face_closed_form", faces, 1e-10, "gamma(0,0,k) = 2^{-(alpha+k+1)}", k_max=int(k[-1])),
        _check("nonnegativity", max(0.0, -float(table.values.min())), 1e-12, "gamma(n,m,k) >= 0"),
        _check("permutation_symmetry", sym, 1e-12, "gamma symmetric in (n,m,k)"),
        _check("sum_identity_excess_over_tail", max(excess, 0.0), 1e-6,
               "sum_k gamma(n,m,k) w(k) = 1 up to the truncated tail", n_m_max=top, K=K),
        _check("sum_identity_truncated_residual", raw, 1e-6, "sum_{k<=K} gamma(n,m,k) w(k) - 1", asserted=False,
               n_m_max=top, K=K),
        _check("table_valid", 0.0 if table.valid else 1.0, 0.0, "table validation", table=table.describe()),
    ]


def suite_bessel(alpha=0.5, **_):
    params = bessel.HankelParams(alpha)
    y = np.linspace(0.0, 8.0, 41)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QuadratureWarning)
        recip = np.max(np.abs(bessel.hankel(gaussian(1.0), params, y) - np.exp(-y ** 2 / 2)))
        x = np.linspace(0.0, 6.0, 31)
        back = bessel.hankel_inverse(bessel.hankel_function(gaussian(1.0), params), params, x)
        round_trip = np.max(np.abs(back - np.exp(-x ** 2 / 2)))
        rule = bessel.angular_rule_for(alpha)
        grid = np.linspace(0.25, 4.0, 6)
        prod = 0.0
        for lam in grid:
            f = bessel_j(alpha, lam)
            lhs = bessel.translation_values(f, grid[None, :], grid[:, None], rule)
            rhs = np.outer(special.normalized_bessel(alpha, lam * grid), special.normalized_bessel(alpha, lam * grid))
            prod = max(prod, float(np.max(np.abs(lhs - rhs))))
        planch = max(bessel.plancherel(f, params)[2] for f in (gaussian(1.0), bump(2.0, 1.0)))
        trans = max(bessel.hankel_of_translation_check(gaussian(1.0), t, y, params)["max_residual"]
                    for t in (0.5, 1.0, 2.0))
    return [
        _check("hankel_self_reciprocity", recip, 1e-6, "H exp(-x^2/2) = exp(-y^2/2)", y_range=[0.0, 8.0]),
        _check("hankel_round_trip", round_trip, 1e-6, "H^{-1} H f = f", x_range=[0.0, 6.0]),
        _check("product_formula", prod, 1e-8, "T_t j_alpha(lam .)(s) = j_alpha(lam t) j_alpha(lam s)"),
        _check("plancherel", planch, 1e-4, "||H f||_2 = ||f||_2"),
        _check("transform_of_translation", trans, 1e-5, "H(T_t f)(y) = j_alpha(t y) H f(y)"),
    ]


def suite_bridges(alpha=0.5, K=24, **_):
    table = sequences.build_linearization_table(int(K), alpha)
    f = laguerre_R(2, alpha) + laguerre_R(0, alpha)
    out = []
    for n in (0, 1, 3):
        rec = sequences.bridge_check(f, n, table, k_max=min(8, table.K))
        for label in ("exp(-2x)", "exp(-3x/2)"):
            out.append(_check(f"translated_coefficients_{label}_n{n}", rec[label]["max_residual"], math.inf,
                              f"T_n(f_hat)(k) vs int f R_n R_k {label} x^alpha", asserted=False,
                              consistent_convention=rec["consistent_convention"]))
    return out


_RUNNERS = {"special": suite_special, "laguerre": suite_laguerre, "sequences": suite_sequences,
            "bessel": suite_bessel, "bridges": suite_bridges}


def run_suite(name, alpha=0.5, K=24):
    """Report dict for one suite or for "all"."""
    names = SUITES if name == "all" else (name,)
    unknown = [n for n in names if n not in _RUNNERS]
    if unknown:
        raise ValueError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES + ('all',))}")
    checks = {n: _RUNNERS[n](alpha=float(alpha), K=int(K)) for n in names}
    passed = all(c["passed"] for cs in checks.values() for c in cs if c["asserted"])
    return {"schema": 1, "kind": "verify", "suite": name, "alpha": float(alpha), "K": int(K), "checks": checks,
            "passed": passed}
