"""Laguerre translation, Laguerre convolution, coefficient analysis/synthesis and
the t-averaging operator built from the translation.

The translation of f by t >= 0 is

    T_t f(x) = c_alpha int_0^pi f(x + t + 2 sqrt(xt) cos v) e^{-sqrt(xt) cos v}
                         j_{alpha-1/2}(sqrt(xt) sin v) sin^{2 alpha} v dv,

evaluated with the Gegenbauer rule in u = cos v (compactly supported f: a
Gauss rule on the window of angles where the integrand is nonzero).  It
satisfies T_t R_n(x) = R_n(t) R_n(x).

Coefficient convention: analysis keeps the plain integral
f_hat(n) = int f R_n e^{-x} x^alpha dx, synthesis carries the factor
1 / Gamma(alpha + 1), so analyze(synthesize(a)) == a.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammainc, gammaln

from . import special
from .quadrature import (DEFAULT_GAUSS_ORDER, WINDOW_ORDER, QuadratureRule, angular_normalization, angular_window_rule,
                         gauss_gen_laguerre, laguerre_weighted, normalized_angular_rule, panel_rule)
from .spaces import (GRADING_RATIO, GRADED_LEVELS, GridFunction, SeqVec, laguerre_upper_limit,
                     polynomial_horizon)
from ._exceptions import DomainError

ANALYSIS_CONVENTION = "analysis-unnormalized"
_CHUNK = 1 << 16  # node evaluations per block (sized to stay in cache)


@dataclass(frozen=True)
class LaguerreTranslationParams:
    alpha: float
    angular_rule: QuadratureRule
    c_alpha: float
    window_order: int = WINDOW_ORDER  # nodes per angular window for compactly supported f

    @classmethod
    def create(cls, alpha, order=DEFAULT_GAUSS_ORDER, window_order=WINDOW_ORDER):
        alpha = float(alpha)
        if not alpha > -0.5:
            raise DomainError(f"Laguerre translation needs alpha > -1/2, got {alpha}")
        return cls(alpha, normalized_angular_rule(order, alpha), angular_normalization(alpha), int(window_order))


@dataclass(frozen=True, eq=False)
class CoeffVec(SeqVec):
    convention: str = ANALYSIS_CONVENTION


def _support_mask(f, x, t):
    """True where T_t f(x) can be nonzero for compactly supported f."""
    lo, hi = f.support
    sx, st = np.sqrt(x), np.sqrt(t)
    return ((sx - st) ** 2 <= hi) & ((sx + st) ** 2 >= lo)


def translation_values(f, x, t, params):
    """T_t f(x) for broadcastable arrays x, t >= 0."""
    x, t = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(t, dtype=float))
    shape = x.shape
    x, t = x.ravel(), t.ravel()
    out = np.zeros(x.shape)
    if f.support is not None:
        _compact_translation(f, x, t, params, out)
    else:
        _dense_translation(f, x, t, params, np.arange(x.size), out)
    return out.reshape(shape)


def _dense_translation(f, x, t, params, rows, out):
    u, w = params.angular_rule.nodes, params.angular_rule.weights
    root = np.sqrt(np.clip(1.0 - u * u, 0.0, None))
    order = params.alpha - 0.5
    step = max(1, _CHUNK // len(u))
    for start in range(0, rows.size, step):
        sel = rows[start:start + step]
        xs, ts = x[sel, None], t[sel, None]
        s = np.sqrt(xs * ts)
        fv = f(np.clip(xs + ts + 2.0 * s * u, 0.0, None))
        kern = np.exp(-s * u) * special.normalized_bessel(order, s * root)
        out[sel] = (fv * kern) @ w


def _compact_translation(f, x, t, params, out):
    """Compactly supported f: the angular integral runs only over the window of
    angles whose argument x + t + 2 sqrt(xt) cos v lies in the support, with a
    Gauss rule placed on that window.  Windows covering all of [0, pi] use the
    global rule."""
    lo, hi = f.support
    live = np.flatnonzero(_support_mask(f, x, t))
    xs, ts = x[live], t[live]
    s = np.sqrt(xs * ts)
    flat = s == 0
    out[live[flat]] = f(xs[flat] + ts[flat])
    live, xs, ts, s = live[~flat], xs[~flat], ts[~flat], s[~flat]
    u_lo = (lo - xs - ts) / (2.0 * s)
    u_hi = (hi - xs - ts) / (2.0 * s)
    whole = (u_lo <= -1.0) & (u_hi >= 1.0)
    _dense_translation(f, x, t, params, live[whole], out)
    part = ~whole & (u_lo < 1.0) & (u_hi > -1.0) & (u_lo < u_hi)
    rows = live[part]
    phi_lo = np.where(u_hi[part] >= 1.0, 0.0, np.arccos(np.clip(u_hi[part], -1.0, 1.0)))
    phi_hi = np.where(u_lo[part] <= -1.0, math.pi, np.arccos(np.clip(u_lo[part], -1.0, 1.0)))
    order = params.alpha - 0.5
    step = max(1, _CHUNK // params.window_order)
    for start in range(0, rows.size, step):
        blk = slice(start, start + step)
        v, w = angular_window_rule(phi_lo[blk], phi_hi[blk], params.alpha, params.window_order)
        xr, tr = x[rows[blk], None], t[rows[blk], None]
        sr = np.sqrt(xr * tr)
        # x + t + 2 s cos v written without cancellation
        arg = (np.sqrt(xr) - np.sqrt(tr)) ** 2 + 4.0 * sr * np.cos(v / 2.0) ** 2
        kern = np.exp(-sr * np.cos(v)) * special.normalized_bessel(order, sr * np.sin(v))
        out[rows[blk]] = np.sum(f(arg) * kern * w, axis=1)


def _translated_support(f, t):
    if f.support is None:
        return None
    lo, hi = f.support
    st = math.sqrt(t)
    return (max(0.0, math.sqrt(lo) - st) ** 2, (math.sqrt(hi) + st) ** 2)


def translate_laguerre(f, t, params):
    """The function x -> T_t f(x)."""
    t = float(t)
    if t < 0 or not math.isfinite(t):
        raise ValueError(f"translation parameter must be finite and >= 0, got {t}")
    radius = (math.sqrt(f.decay_radius) + math.sqrt(t)) ** 2
    return GridFunction(lambda x: translation_values(f, x, t, params), radius,
                        {"family": "laguerre_translate", "t": t, "of": f.spec},
                        _translated_support(f, t), f.degree)


def default_laguerre_rule(alpha, *functions, min_degree=0):
    """Gauss-Laguerre rule exact for the product when every factor is a polynomial,
    otherwise a panel rule on the Laguerre horizon."""
    degrees = [f.degree for f in functions]
    if all(d is not None for d in degrees):
        need = sum(degrees) + min_degree
        return gauss_gen_laguerre(max(need // 2 + 1, 2), alpha)
    upper = max(laguerre_upper_limit(f, 1.0) for f in functions)
    graded = float(alpha) != round(float(alpha))
    levels = (GRADED_LEVELS if alpha >= 0 else 2 * GRADED_LEVELS) if graded else 0
    return panel_rule(0.0, upper, max(64, math.ceil(upper)), 8, graded_levels=levels,
                      grading_ratio=GRADING_RATIO)


def convolve_laguerre(f, g, params, rule=None):
    """(f * g)(t) = int_0^inf T_t f(x) g(x) e^{-x} x^alpha dx."""
    alpha = params.alpha
    rule = default_laguerre_rule(alpha, f, g) if rule is None else rule
    nodes, weights = laguerre_weighted(rule, alpha)
    gw = g(nodes) * weights
    keep = gw != 0
    nodes, gw = nodes[keep], gw[keep]

    def h(t):
        t = np.asarray(t, dtype=float)
        vals = translation_values(f, nodes[None, :], t.ravel()[:, None], params)
        return (vals @ gw).reshape(t.shape)

    degrees = [d for d in (f.degree, g.degree) if d is not None]
    degree = min(degrees) if degrees else None
    radius = polynomial_horizon(degree, alpha) if degree is not None else max(f.decay_radius, g.decay_radius)
    return GridFunction(h, radius, {"family": "laguerre_convolution", "of": [f.spec, g.spec]}, degree=degree)


def analyze(f, alpha, N, rule=None):
    """Coefficients f_hat(n) = int f R_n e^{-x} x^alpha dx, n = 0..N."""
    N = int(N)
    if N < 0:
        raise ValueError("analyze: N must be >= 0")
    if rule is None:
        if f.degree is not None:
            rule = gauss_gen_laguerre(max((f.degree + N) // 2 + 1, 2), alpha)
        else:
            rule = default_laguerre_rule(alpha, f, min_degree=N)
    nodes, weights = laguerre_weighted(rule, alpha)
    fw = f(nodes) * weights
    R = special.normalized_laguerre_table(N, alpha, nodes)
    return CoeffVec(R @ fw, alpha)


def synthesize(a):
    """x -> (1 / Gamma(alpha+1)) sum_m a(m) w(m) R_m(x)."""
    alpha = a.alpha
    coef = np.asarray(a.values) * special.binomial_weights(alpha, len(a) - 1) * math.exp(-gammaln(alpha + 1))
    N = len(coef) - 1

    def f(x):
        if not np.any(coef):
            return np.zeros_like(x)
        return np.tensordot(coef, special.normalized_laguerre_table(N, alpha, x), axes=1)

    nz = np.flatnonzero(coef)
    degree = int(nz[-1]) if nz.size else 0
    return GridFunction(f, polynomial_horizon(degree, alpha),
                        {"family": "laguerre_synthesis", "length": len(coef), "alpha": alpha}, degree=degree)


def laguerre_average_weight_total(a, alpha):
    """int_0^a e^{-t/2} t^alpha dt in closed form."""
    return 2.0 ** (alpha + 1) * math.exp(gammaln(alpha + 1)) * float(gammainc(alpha + 1, a / 2.0))


def average_rule(a, alpha_power, panels=32, panel_order=8):
    graded = float(alpha_power) != round(float(alpha_power))
    levels = (GRADED_LEVELS if alpha_power >= 0 else 2 * GRADED_LEVELS) if graded else 0
    return panel_rule(0.0, a, panels, panel_order, graded_levels=levels, grading_ratio=GRADING_RATIO)


def laguerre_average(f, a, R, params, panels=32, panel_order=8):
    """x -> (1/A) int_0^a T_t f(x) e^{-t/2} t^alpha dt on [0, R], zero beyond.

    A = int_0^a e^{-t/2} t^alpha dt.  The averaged function approximates f as
    a -> 0 and is continuous on [0, R].
    """
    a, R = float(a), float(R)
    if not (a > 0 and R > 0):
        raise ValueError("laguerre_average: a and R must be positive")
    alpha = params.alpha
    rule = average_rule(a, alpha, panels, panel_order)
    t = rule.nodes
    tw = rule.weights * np.exp(-t / 2.0) * t ** alpha / laguerre_average_weight_total(a, alpha)

    def v(x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = np.zeros(flat.shape)
        inside = flat <= R
        if np.any(inside):
            vals = translation_values(f, flat[inside][:, None], t[None, :], params)
            out[inside] = vals @ tw
        return out.reshape(x.shape)

    return GridFunction(v, R, {"family": "laguerre_average", "a": a, "R": R, "of": f.spec}, support=(0.0, R))
