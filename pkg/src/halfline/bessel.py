"""Bessel translation, Hankel transform, Hankel convolution.

    T_t f(s) = int f(sqrt(t^2 + s^2 - 2 s t u)) dmu(u)     (mu: normalized Gegenbauer measure)
    H f(y)   = c int_0^inf f(x) j_alpha(x y) x^{2 alpha + 1} dx,   c = 2^{-alpha} / Gamma(alpha + 1)

With this c the Gaussian e^{-x^2/2} is fixed by H and H is an involution.
The convolution (f * g)(x) = int T_x f(t) g(t) t^{2 alpha + 1} dt satisfies
H(f * g) = H f . H g / c.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import special
from ._exceptions import DomainError, QuadratureWarning
from .quadrature import (DEFAULT_GAUSS_ORDER, DEFAULT_PANEL_ORDER, DEFAULT_PANELS, WINDOW_ORDER, QuadratureRule,
                         angular_window_rule, normalized_angular_rule, panel_rule)
from .spaces import (GRADED_LEVELS, GRADING_RATIO, GridFunction, bessel_integral_p, bessel_upper_limit,
                     conjugate_exponent, sampled)

REFINE_TOL = 1e-5
_CHUNK = 1 << 16  # node evaluations per block (sized to stay in cache)


def hankel_constant(alpha):
    return math.exp(-alpha * math.log(2.0) - gammaln(alpha + 1.0))


def _check_alpha(alpha):
    alpha = float(alpha)
    if not alpha >= -0.5:
        raise DomainError(f"Bessel-side operators need alpha >= -1/2, got {alpha}")
    return alpha


def _graded_levels(power):
    if float(power) == round(float(power)):
        return 0
    return GRADED_LEVELS if power >= 0 else 2 * GRADED_LEVELS


@dataclass(frozen=True)
class HankelParams:
    alpha: float
    x_max: float = 12.0
    y_max: float = 48.0
    panels: int = DEFAULT_PANELS
    panel_order: int = DEFAULT_PANEL_ORDER
    c: float | None = None
    refine_check: bool = True

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_alpha(self.alpha))
        if not (self.x_max > 0 and self.y_max > 0):
            raise ValueError("x_max and y_max must be positive")
        if self.c is None:
            object.__setattr__(self, "c", hankel_constant(self.alpha))

    def describe(self):
        return {"alpha": self.alpha, "x_max": self.x_max, "y_max": self.y_max, "panels": self.panels,
                "panel_order": self.panel_order, "c": self.c}


# --- translation ------------------------------------------------------------

def angular_rule_for(alpha, order=DEFAULT_GAUSS_ORDER):
    """Normalized angular rule; the two-point endpoint rule at alpha = -1/2."""
    return normalized_angular_rule(order, _check_alpha(alpha))


def translation_values(f, s, t, rule, window_order=WINDOW_ORDER):
    """T_t f(s) for broadcastable arrays s, t >= 0.

    Angles run over phi in [0, pi] with u = cos phi.  Rows whose integrand
    vanishes on part of [0, pi] (compact f) integrate over the active window
    with a `window_order`-node rule.  Rows with s close to t have a
    near-singularity at phi ~ i |s - t| / sqrt(st) whenever the even extension
    of f is not smooth at 0; their window is split geometrically toward phi = 0
    (for s == t the integrand is smooth in phi but not in u).
    The remaining rows use the global rule.
    """
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    shape = s.shape
    s, t = s.ravel(), t.ravel()
    out = np.zeros(s.shape)
    if rule.alpha is None or rule.alpha <= -0.5:
        _dense_translation(f, s, t, rule, np.arange(s.size), out)
        return out.reshape(shape)
    lo, hi = f.support if f.support is not None else (0.0, math.inf)
    live = np.flatnonzero((np.abs(s - t) <= hi) & (s + t >= lo))
    ss, tt = s[live], t[live]
    flat = ss * tt == 0
    out[live[flat]] = f(np.hypot(ss[flat], tt[flat]))
    live, ss, tt = live[~flat], ss[~flat], tt[~flat]
    prod, square = 2.0 * ss * tt, ss * ss + tt * tt
    u_lo = (square - hi * hi) / prod
    u_hi = (square - lo * lo) / prod
    keep = (u_lo < 1.0) & (u_hi > -1.0) & (u_lo < u_hi)
    live, ss, tt, u_lo, u_hi = live[keep], ss[keep], tt[keep], u_lo[keep], u_hi[keep]
    phi_lo = np.where(u_hi >= 1.0, 0.0, np.arccos(np.clip(u_hi, -1.0, 1.0)))
    phi_hi = np.where(u_lo <= -1.0, math.pi, np.arccos(np.clip(u_lo, -1.0, 1.0)))
    scale = np.abs(ss - tt) / np.sqrt(ss * tt)
    graded = (phi_lo == 0.0) & (scale * GRADE_TRIGGER < phi_hi)
    whole = (phi_lo == 0.0) & (phi_hi == math.pi) & ~graded
    _dense_translation(f, s, t, rule, live[whole], out)
    single = ~whole & ~graded
    out[live[single]] = _window_values(f, ss[single], tt[single], phi_lo[single], phi_hi[single], rule.alpha,
                                       window_order)
    owner, piece_lo, piece_hi = _graded_pieces(phi_hi[graded], scale[graded])
    pieces = _window_values(f, ss[graded][owner], tt[graded][owner], piece_lo, piece_hi, rule.alpha, window_order)
    out[live[graded]] = np.bincount(owner, weights=pieces, minlength=int(graded.sum()))
    return out.reshape(shape)


GRADE_TRIGGER = 8.0  # grade windows wider than this multiple of |s - t| / sqrt(st)
GRADE_RATIO = 4.0  # growth of consecutive graded pieces


def _graded_pieces(phi_hi, scale):
    """Split each window [0, phi_hi] as [0, scale], [scale, 4 scale], [4 scale, 16 scale], ...
    (scale 0, i.e. s == t: halves, so that each piece carries one end factor)."""
    scale = np.where(scale > 0, scale, phi_hi / 2.0)
    counts = np.ceil(np.log(phi_hi / scale) / math.log(GRADE_RATIO)).astype(int) + 1
    owner = np.repeat(np.arange(phi_hi.size), counts)
    level = np.arange(owner.size) - np.repeat(np.cumsum(counts) - counts, counts)
    lo = np.where(level == 0, 0.0, scale[owner] * GRADE_RATIO ** (level - 1.0))
    hi = np.minimum(scale[owner] * GRADE_RATIO ** level, phi_hi[owner])
    keep = hi > lo
    return owner[keep], lo[keep], hi[keep]


def _window_values(f, s, t, phi_lo, phi_hi, alpha, order):
    """c_alpha int_{phi_lo}^{phi_hi} f(r) sin^{2 alpha} phi dphi per entry,
    r = sqrt(s^2 + t^2 - 2 s t cos phi) written without cancellation."""
    out = np.empty(s.size)
    step = max(1, _CHUNK // order)
    for start in range(0, s.size, step):
        blk = slice(start, start + step)
        phi, w = angular_window_rule(phi_lo[blk], phi_hi[blk], alpha, order)
        sr, tr = s[blk, None], t[blk, None]
        r = np.sqrt((sr - tr) ** 2 + 4.0 * sr * tr * np.sin(phi / 2.0) ** 2)
        out[blk] = np.sum(f(r) * w, axis=1)
    return out


def _dense_translation(f, s, t, rule, rows, out):
    u, w = rule.nodes, rule.weights
    step = max(1, _CHUNK // len(u))
    for start in range(0, rows.size, step):
        sel = rows[start:start + step]
        ss, tt = s[sel, None], t[sel, None]
        arg = np.sqrt(np.clip(ss * ss + tt * tt - 2.0 * ss * tt * u, 0.0, None))
        out[sel] = f(arg) @ w


def translate_bessel(f, t, alpha, angular_rule=None):
    """The function s -> T_t f(s)."""
    t = float(t)
    if t < 0 or not math.isfinite(t):
        raise ValueError(f"translation parameter must be finite and >= 0, got {t}")
    rule = angular_rule_for(alpha) if angular_rule is None else angular_rule
    support = None
    if f.support is not None:
        lo, hi = f.support
        support = (max(0.0, lo - t, t - hi), hi + t)
    # the translate of f with a non-smooth even extension (f'(0) != 0) has a kink at s = t
    return GridFunction(lambda s: translation_values(f, s, t, rule), f.decay_radius + t,
                        {"family": "bessel_translate", "t": t, "alpha": float(alpha), "of": f.spec}, support,
                        breakpoints=(t,) if t > 0 else ())


# --- Hankel transform ----------------------------------------------------------

def _hankel_rule(alpha, upper, y_scale, panels, panel_order):
    return panel_rule(0.0, upper, panels, panel_order, oscillation_scale=y_scale,
                      graded_levels=_graded_levels(2 * alpha + 1), grading_ratio=GRADING_RATIO)


def _hankel_sum(f, alpha, c, y, upper, panels, panel_order):
    y = np.asarray(y, dtype=float)
    ymax = float(np.max(y)) if y.size else 0.0
    rule = _hankel_rule(alpha, upper, ymax, panels, panel_order)
    x = rule.nodes
    fw = f(x) * rule.weights * x ** (2 * alpha + 1)
    keep = fw != 0
    x, fw = x[keep], fw[keep]
    flat = y.ravel()
    out = np.empty(flat.shape)
    step = max(1, _CHUNK // max(len(x), 1))
    for start in range(0, flat.size, step):
        blk = flat[start:start + step]
        out[start:start + step] = special.normalized_bessel(alpha, blk[:, None] * x[None, :]) @ fw
    return c * out.reshape(y.shape), c * float(np.sum(np.abs(fw)))


def _transform(f, params, y, upper, what):
    y = np.asarray(y, dtype=float)
    if np.any(y < 0):
        raise ValueError(f"{what}: evaluation points must be >= 0")
    if f.support is not None:
        upper = min(upper, f.support[1]) if f.support[1] > 0 else upper
    value, scale = _hankel_sum(f, params.alpha, params.c, y, upper, params.panels, params.panel_order)
    if params.refine_check and y.size:
        fine, _ = _hankel_sum(f, params.alpha, params.c, y, upper, 2 * params.panels, params.panel_order)
        floor = 1e-8 * max(scale, 1e-300)
        rel = np.max(np.abs(fine - value) / np.maximum(np.abs(fine), floor))
        if rel > REFINE_TOL:
            warnings.warn(f"{what}: panel doubling moved the result by {rel:.2e} (relative)",
                          QuadratureWarning, stacklevel=3)
    return value


def hankel(f, params, y):
    """H f(y) = c int_0^{x_max} f(x) j_alpha(x y) x^{2 alpha + 1} dx (scalar or array y)."""
    return _transform(f, params, y, params.x_max, "hankel")


def hankel_inverse(fhat, params, x):
    """c int_0^{y_max} fhat(y) j_alpha(x y) y^{2 alpha + 1} dy."""
    return _transform(fhat, params, x, params.y_max, "hankel_inverse")


def hankel_function(f, params):
    """y -> H f(y) as a GridFunction (declared radius y_max)."""
    return GridFunction(lambda y: hankel(f, params, y), params.y_max,
                        {"family": "hankel", "alpha": params.alpha, "of": f.spec})


# --- convolution ---------------------------------------------------------------

def _radial_rule(alpha, upper, panels=DEFAULT_PANELS, panel_order=DEFAULT_PANEL_ORDER):
    return panel_rule(0.0, upper, max(panels, math.ceil(upper / 0.25)), panel_order,
                      graded_levels=_graded_levels(2 * alpha + 1), grading_ratio=GRADING_RATIO)


def convolve_bessel(f, g, alpha, angular_rule=None, radial_rule=None, sample_grid=None):
    """x -> int_0^inf T_x f(t) g(t) t^{2 alpha + 1} dt.

    Evaluated on demand; pass `sample_grid` to tabulate once and interpolate.
    """
    alpha = _check_alpha(alpha)
    rule = angular_rule_for(alpha) if angular_rule is None else angular_rule
    if radial_rule is None:
        upper = bessel_upper_limit(g)
        radial = _radial_rule(alpha, upper) if upper > 0 else QuadratureRule(np.zeros(0), np.zeros(0), (0.0, 0.0), "empty")
    else:
        radial = radial_rule
    t = radial.nodes
    gw = g(t) * radial.weights * t ** (2 * alpha + 1)
    keep = gw != 0
    t, gw = t[keep], gw[keep]

    def h(x):
        x = np.asarray(x, dtype=float)
        vals = translation_values(f, x.ravel()[:, None], t[None, :], rule)
        return (vals @ gw).reshape(x.shape)

    spec = {"family": "bessel_convolution", "alpha": alpha, "of": [f.spec, g.spec]}
    radius = f.decay_radius + g.decay_radius
    if f.support is not None and g.support is not None:
        support = (0.0, f.support[1] + g.support[1])
    else:
        support = None
    if sample_grid is not None:
        grid = np.asarray(sample_grid, dtype=float)
        out = sampled(grid, h(grid), label="bessel_convolution")
        return GridFunction(out.func, radius, spec, out.support)
    return GridFunction(h, radius, spec, support)


def hankel_of_translation_check(f, t, ys, params):
    """max_y |H(T_t f)(y) - j_alpha(t y) H f(y)|."""
    t = float(t)
    ys = np.asarray(ys, dtype=float)
    shifted_params = HankelParams(params.alpha, max(params.x_max, f.decay_radius + t), params.y_max, params.panels,
                                  params.panel_order, params.c, params.refine_check)
    lhs = hankel(translate_bessel(f, t, params.alpha), shifted_params, ys)
    rhs = special.normalized_bessel(params.alpha, t * ys) * hankel(f, params, ys)
    resid = np.abs(lhs - rhs)
    return {"t": t, "alpha": params.alpha, "max_residual": float(np.max(resid)) if resid.size else 0.0,
            "y": ys.tolist(), "residual": resid.tolist(), "params": shifted_params.describe()}


def convolution_identity_check(f, g, ys, params, **conv_kw):
    """max_y |H(f * g)(y) - H f(y) H g(y) / c|."""
    ys = np.asarray(ys, dtype=float)
    h = convolve_bessel(f, g, params.alpha, **conv_kw)
    wide = HankelParams(params.alpha, max(params.x_max, min(h.decay_radius, f.decay_radius + g.decay_radius)),
                        params.y_max, params.panels, params.panel_order, params.c, params.refine_check)
    lhs = hankel(h, wide, ys)
    rhs = hankel(f, params, ys) * hankel(g, params, ys) / params.c
    resid = np.abs(lhs - rhs)
    return {"alpha": params.alpha, "max_residual": float(np.max(resid)), "y": ys.tolist(),
            "residual": resid.tolist(), "params": wide.describe()}


# --- norm identities -------------------------------------------------------------

def plancherel(f, params):
    """(||H f||_2, ||f||_2, relative difference) in the x^{2 alpha + 1} dx norm."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", QuadratureWarning)
        hf = hankel_function(f, HankelParams(params.alpha, params.x_max, params.y_max, params.panels,
                                             params.panel_order, params.c, refine_check=False))
        lhs = bessel_integral_p(hf, 2.0, params.alpha, 0.0, params.y_max, warn=False)
    rhs = bessel_integral_p(f, 2.0, params.alpha, 0.0, min(params.x_max, bessel_upper_limit(f)))
    return lhs, rhs, abs(lhs - rhs) / rhs if rhs else abs(lhs)


def hausdorff_young_ratio(f, p, params):
    """||H f||_{p'} / ||f||_p for 1 <= p <= 2 (p' the conjugate exponent)."""
    p = float(p)
    if not 1 <= p <= 2:
        raise ValueError("Hausdorff-Young needs 1 <= p <= 2")
    q = conjugate_exponent(p)
    quiet = HankelParams(params.alpha, params.x_max, params.y_max, params.panels, params.panel_order, params.c,
                         refine_check=False)
    hf = hankel_function(f, quiet)
    lhs = bessel_integral_p(hf, q, params.alpha, 0.0, params.y_max, warn=False)
    rhs = bessel_integral_p(f, p, params.alpha, 0.0, min(params.x_max, bessel_upper_limit(f)))
    return lhs / rhs if rhs else math.inf


# --- averaging -------------------------------------------------------------------

def bessel_average(f, a, alpha, angular_rule=None, panels=32, panel_order=8):
    """s -> (1/A) int_0^a T_t f(s) t^{2 alpha + 1} dt,  A = a^{2 alpha + 2} / (2 alpha + 2)."""
    a = float(a)
    if not a > 0:
        raise ValueError("bessel_average: a must be positive")
    alpha = _check_alpha(alpha)
    rule = angular_rule_for(alpha) if angular_rule is None else angular_rule
    trule = panel_rule(0.0, a, panels, panel_order, graded_levels=_graded_levels(2 * alpha + 1),
                       grading_ratio=GRADING_RATIO)
    t = trule.nodes
    total = a ** (2 * alpha + 2) / (2 * alpha + 2)
    tw = trule.weights * t ** (2 * alpha + 1) / total

    def m(s):
        s = np.asarray(s, dtype=float)
        vals = translation_values(f, s.ravel()[:, None], t[None, :], rule)
        return (vals @ tw).reshape(s.shape)

    support = None if f.support is None else (max(0.0, f.support[0] - a), f.support[1] + a)
    return GridFunction(m, f.decay_radius + a, {"family": "bessel_average", "a": a, "alpha": alpha, "of": f.spec},
                        support)
