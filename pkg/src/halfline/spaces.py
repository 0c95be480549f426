"""Function and sequence carriers and the three norm families.

* Laguerre-weighted functions:  ||f||_{p,alpha} = (int |f e^{-x/2}|^p x^alpha dx)^{1/p}
* weighted sequences:           ||a||_{p,alpha} = (sum |a(k)|^p w(k))^{1/p}
* Bessel-weighted functions:    ||f||_{p,(alpha)} = (int |f|^p x^{2 alpha + 1} dx)^{1/p}
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from . import special
from ._exceptions import DomainError, NumericalError, TailWarning
from .quadrature import DEFAULT_PANEL_ORDER, DEFAULT_PANELS, PLAIN, QuadratureRule, panel_rule

LAGUERRE_FN = "laguerre_fn"
LAGUERRE_SEQ = "laguerre_seq"
BESSEL_FN = "bessel_fn"
SETTINGS = (LAGUERRE_FN, LAGUERRE_SEQ, BESSEL_FN)

# geometric grading of the first panel for non-integer powers x^s in the weight
GRADED_LEVELS = 30
GRADING_RATIO = 0.5
MAX_PANEL_WIDTH = 1.0
COMPACT_PANEL_WIDTH = 0.05  # compact supports: smooth but not analytic profiles
SUP_GRID_POINTS = 4096


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Real function on [0, inf) with a declared decay/support horizon.

    `support` is an interval (lo, hi) outside of which the function is exactly
    zero, or None when it is merely decaying.  `degree` is set for polynomials.
    `breakpoints` are points where the function is not smooth; norm rules split
    and grade their panels there.
    """
    func: Callable
    decay_radius: float
    spec: dict = field(default_factory=dict)
    support: tuple | None = None
    degree: int | None = None
    breakpoints: tuple = ()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        values = np.asarray(self.func(x), dtype=float)
        return values if values.shape == x.shape else np.broadcast_to(values, x.shape).copy()

    @property
    def compact(self):
        return self.support is not None

    def tilde(self, x):
        """f(x) e^{-x/2}."""
        x = np.asarray(x, dtype=float)
        return self(x) * np.exp(-x / 2.0)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            return product(self, other)
        return scaled(self, other)

    __rmul__ = __mul__

    def __add__(self, other):
        return combination([(1.0, self), (1.0, other)])

    def __sub__(self, other):
        return combination([(1.0, self), (-1.0, other)])

    def __neg__(self):
        return scaled(self, -1.0)


# --- built-in families ----------------------------------------------------

def zero():
    return GridFunction(lambda x: np.zeros_like(x), 1.0, {"family": "zero"}, support=(0.0, 0.0), degree=0)


def constant(c=1.0):
    c = float(c)
    if c == 0.0:
        return zero()
    return GridFunction(lambda x: np.full_like(x, c), 1.0, {"family": "constant", "c": c}, degree=0)


def gaussian(sigma=1.0):
    """exp(-x^2 / (2 sigma^2)); negligible (< 1e-18) beyond 9.1 sigma."""
    sigma = float(sigma)
    if not sigma > 0:
        raise ValueError("gaussian: sigma must be positive")
    return GridFunction(lambda x: np.exp(-0.5 * (x / sigma) ** 2),
                        sigma * math.sqrt(2 * math.log(1e18)), {"family": "gaussian", "sigma": sigma})


def bump(center, radius, smoothness=1.0):
    """Smooth compactly supported bump exp(s - s / (1 - u^2)), u = (x - center) / radius; peak 1."""
    c, r, s = float(center), float(radius), float(smoothness)
    if not (r > 0 and s > 0):
        raise ValueError("bump: radius and smoothness must be positive")

    def f(x):
        u = (x - c) / r
        inside = np.abs(u) < 1
        out = np.zeros_like(x)
        out[inside] = np.exp(s - s / (1.0 - u[inside] ** 2))
        return out

    lo = max(c - r, 0.0)
    return GridFunction(f, c + r, {"family": "bump", "center": c, "radius": r, "smoothness": s},
                        support=(lo, c + r))


def exp_decay(rate=1.0):
    """exp(-rate x)."""
    rate = float(rate)
    if not rate > 0:
        raise ValueError("exp_decay: rate must be positive")
    return GridFunction(lambda x: np.exp(-rate * x), 40.0 / rate, {"family": "exp_decay", "rate": rate})


def polynomial_horizon(degree, alpha=0.0):
    """Radius beyond which x^degree e^{-x/2} / degree! is below 1e-20."""
    x = max(4.0 * degree + 2.0 * alpha + 2.0, 1.0)
    lg = math.lgamma(degree + 1)
    while degree * math.log(x) - x / 2.0 - lg > math.log(1e-20):
        x *= 1.1
    return x


def laguerre_R(n, alpha):
    """R_n^alpha(x) = L_n^alpha(x) / L_n^alpha(0)."""
    n = int(n)
    return GridFunction(lambda x: special.normalized_laguerre(n, alpha, x), polynomial_horizon(n, alpha),
                        {"family": "laguerre_R", "n": n, "alpha": float(alpha)}, degree=n)


def bessel_j(alpha, lam=1.0):
    """j_alpha(lam x): bounded, not decaying fast; decay_radius is a nominal horizon."""
    alpha, lam = float(alpha), float(lam)
    return GridFunction(lambda x: special.normalized_bessel(alpha, lam * x), 40.0,
                        {"family": "bessel_j", "alpha": alpha, "lam": lam})


def indicator(a, b):
    a, b = float(a), float(b)
    if not b > a >= 0:
        raise ValueError("indicator: need 0 <= a < b")
    return GridFunction(lambda x: ((x >= a) & (x <= b)).astype(float), b,
                        {"family": "indicator", "a": a, "b": b}, support=(a, b))


def shifted(f, shift):
    """x -> f(x - shift) for x >= shift, zero before."""
    s = float(shift)
    if s < 0:
        raise ValueError("shifted: shift must be >= 0")

    def g(x):
        out = np.zeros_like(x)
        m = x >= s
        out[m] = f(x[m] - s)
        return out

    if f.support is not None:
        support = (f.support[0] + s, f.support[1] + s)
    else:
        support = None
    return GridFunction(g, f.decay_radius + s, {"family": "shifted", "shift": s, "of": f.spec}, support)


def scaled(f, factor):
    """x -> factor * f(x)."""
    c = float(factor)
    return GridFunction(lambda x: c * f(x), f.decay_radius, {"family": "scaled", "factor": c, "of": f.spec},
                        f.support, f.degree)


def dilated(f, lam):
    """x -> f(lam x)."""
    lam = float(lam)
    if not lam > 0:
        raise ValueError("dilated: lam must be positive")
    support = None if f.support is None else (f.support[0] / lam, f.support[1] / lam)
    return GridFunction(lambda x: f(lam * x), f.decay_radius / lam,
                        {"family": "dilated", "lam": lam, "of": f.spec}, support, f.degree)


def product(f, g):
    if f.support is not None and g.support is not None:
        support = (max(f.support[0], g.support[0]), min(f.support[1], g.support[1]))
        if support[1] < support[0]:
            return zero()
    else:
        support = f.support if f.support is not None else g.support
    degree = f.degree + g.degree if f.degree is not None and g.degree is not None else None
    return GridFunction(lambda x: f(x) * g(x), min(f.decay_radius, g.decay_radius),
                        {"family": "product", "of": [f.spec, g.spec]}, support, degree)


def combination(terms):
    """sum_i c_i f_i from a list of (c_i, f_i)."""
    terms = [(float(c), f) for c, f in terms]
    supports = [f.support for _, f in terms]
    if all(s is not None for s in supports):
        support = (min(s[0] for s in supports), max(s[1] for s in supports))
    else:
        support = None
    degrees = [f.degree for _, f in terms]
    degree = max(degrees) if all(d is not None for d in degrees) else None
    return GridFunction(lambda x: sum(c * f(x) for c, f in terms), max(f.decay_radius for _, f in terms),
                        {"family": "combination", "of": [[c, f.spec] for c, f in terms]}, support, degree)


def from_callable(func, decay_radius, label="callable", support=None, degree=None):
    return GridFunction(func, float(decay_radius), {"family": label}, support, degree)


def sampled(xs, values, label="sampled", kind="linear"):
    """Interpolant of (xs, values) (piecewise linear or cubic spline), zero beyond the last node."""
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    if xs.ndim != 1 or xs.shape != values.shape or len(xs) < 2:
        raise ValueError("sampled: xs and values must be 1-d arrays of equal length >= 2")
    if np.any(xs < 0) or np.any(np.diff(xs) <= 0):
        raise ValueError("sampled: xs must be >= 0 and strictly increasing")
    if not np.all(np.isfinite(values)):
        raise ValueError("sampled: values must be finite")
    xs.setflags(write=False)
    values.setflags(write=False)

    if kind == "linear":
        def f(x):
            return np.interp(x, xs, values, left=values[0], right=0.0)
    elif kind == "cubic":
        f = _cubic_interpolant(xs, values)
    else:
        raise ValueError(f"sampled: unknown interpolation kind {kind!r}")

    support = (0.0, float(xs[-1]))
    return GridFunction(f, float(xs[-1]), {"family": label, "nodes": len(xs)}, support)


def _cubic_interpolant(xs, values):
    """Cubic spline evaluator; direct cell indexing when the nodes are equispaced."""
    spline = CubicSpline(xs, values)
    lo, top = xs[0], xs[-1]
    step = np.diff(xs)
    if not np.allclose(step, step[0], rtol=1e-12, atol=0):
        def f(x):
            x = np.asarray(x, dtype=float)
            return np.where(x <= top, spline(np.clip(x, lo, top)), 0.0)
        return f
    h = float(step[0])
    c3, c2, c1, c0 = (np.ascontiguousarray(row) for row in spline.c)  # highest power first
    last = c0.size - 1

    def f(x):
        x = np.asarray(x, dtype=float)
        xc = np.clip(x, lo, top) - lo
        cell = np.minimum((xc * (1.0 / h)).astype(np.intp), last)
        d = xc - cell * h
        val = ((c3.take(cell) * d + c2.take(cell)) * d + c1.take(cell)) * d + c0.take(cell)
        return np.where(x <= top, val, 0.0)
    return f


def read_sampled_csv(path):
    """Sampled function from a two-column `x,value` CSV (header optional)."""
    rows = []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            if not row or not "".join(row).strip():
                continue
            if len(row) < 2:
                raise ValueError(f"{path}:{i + 1}: expected two columns")
            try:
                rows.append((float(row[0]), float(row[1])))
            except ValueError:
                if i == 0 and not rows:
                    continue  # header
                raise ValueError(f"{path}:{i + 1}: non-numeric entry {row!r}") from None
    if len(rows) < 2:
        raise ValueError(f"{path}: need at least two samples")
    xs, vals = np.array(rows).T
    return sampled(xs, vals, label=f"csv:{path}")


def write_sampled_csv(path, xs, values, header=("x", "value")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for x, v in zip(xs, values):
            w.writerow([repr(float(x)), repr(float(v))])


# --- sequences -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SeqVec:
    values: np.ndarray
    alpha: float

    def __post_init__(self):
        v = np.array(self.values, dtype=float).ravel()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "alpha", float(self.alpha))

    def __len__(self):
        return len(self.values)

    @property
    def weights(self):
        return special.binomial_weights(self.alpha, len(self.values) - 1)

    @classmethod
    def unit(cls, k, alpha, length=None):
        length = k + 1 if length is None else length
        v = np.zeros(length)
        v[k] = 1.0
        return cls(v, alpha)


@dataclass(frozen=True)
class NormSpec:
    p: float
    alpha: float
    setting: str

    def __post_init__(self):
        p = float(self.p)
        if not p >= 1:
            raise ValueError(f"p must be >= 1, got {p}")
        if self.setting not in SETTINGS:
            raise ValueError(f"unknown setting {self.setting!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def conjugate(self):
        return conjugate_exponent(self.p)


def conjugate_exponent(p):
    p = float(p)
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def _p_norm_from_integral(values, weights, p):
    if math.isinf(p):
        return float(np.max(np.abs(values))) if values.size else 0.0
    return float(np.sum(np.abs(values) ** p * weights)) ** (1.0 / p)


def _check_finite(x, v, what):
    bad = ~np.isfinite(v)
    if np.any(bad):
        raise NumericalError(f"{what}: non-finite integrand at x = {float(x[bad][0])!r}")


def laguerre_upper_limit(f, p):
    """Truncation point for Laguerre-weighted integrals of |f e^{-x/2}|^p."""
    return max(f.decay_radius + 10.0, 40.0, 80.0 / p if math.isfinite(p) else 40.0)


def bessel_upper_limit(f):
    return f.decay_radius + 10.0 if f.support is None else f.support[1]


def halfline_rule(a, b, power=0.0, panels=DEFAULT_PANELS, panel_order=DEFAULT_PANEL_ORDER, breakpoints=()):
    """Panel rule on [a, b] for integrands carrying a weight x^power.

    Panel widths are capped at MAX_PANEL_WIDTH; the first panel is graded
    toward 0 when a == 0 and the power is not an integer.  The interval is
    split at `breakpoints` inside (a, b), with panels graded toward each of
    them from both sides.
    """
    graded = a == 0 and float(power) != round(float(power))
    levels = (GRADED_LEVELS if power >= 0 else 2 * GRADED_LEVELS) if graded else 0
    inner = sorted({float(x) for x in breakpoints if a < x < b})
    if not inner:
        panels = max(panels, math.ceil((b - a) / MAX_PANEL_WIDTH))
        return panel_rule(a, b, panels, panel_order, graded_levels=levels, grading_ratio=GRADING_RATIO)
    edges = [a, *inner, b]
    nodes, weights = [], []
    for i, (lo, hi) in enumerate(zip(edges, edges[1:])):
        count = max(1, math.ceil(panels * (hi - lo) / (b - a)), math.ceil((hi - lo) / MAX_PANEL_WIDTH))
        # each half is graded toward its end: toward the breakpoints, and toward 0 on the first piece
        mid = 0.5 * (lo + hi)
        half = max(1, count // 2)
        left = panel_rule(lo, mid, half, panel_order, graded_levels=levels if i == 0 else GRADED_LEVELS,
                          grading_ratio=GRADING_RATIO)
        right = panel_rule(mid, hi, half, panel_order,
                           graded_levels=GRADED_LEVELS if i < len(edges) - 2 else 0, grading_ratio=GRADING_RATIO)
        # panel_rule grades toward its left end; reflect the right half so it grades toward hi
        right_nodes = right.nodes if i == len(edges) - 2 else mid + hi - right.nodes
        nodes += [left.nodes, right_nodes]
        weights += [left.weights, right.weights]
    return QuadratureRule(np.concatenate(nodes), np.concatenate(weights), (a, b), PLAIN,
                          meta={"breakpoints": inner, "panel_order": panel_order})


def sup_grid(upper):
    """4096-point geometric-plus-linear grid on [0, upper]."""
    half = SUP_GRID_POINTS // 2
    return np.unique(np.concatenate([[0.0], np.geomspace(1e-8, upper, half), np.linspace(0, upper, half)]))


def _default_rule(f, a, b, power):
    """Compactly supported f vanish below their support; panels start there and are narrower.
    None when [a, b] misses the support."""
    if f.support is None:
        return halfline_rule(a, b, power, breakpoints=f.breakpoints)
    start = max(a, min(f.support[0], f.support[1]))
    if start >= b:
        return None
    panels = max(DEFAULT_PANELS, math.ceil((b - start) / COMPACT_PANEL_WIDTH))
    return halfline_rule(start, b, power, panels=panels, breakpoints=f.breakpoints)


def laguerre_integral_p(f, p, alpha, a=0.0, b=None, rule=None):
    """int_a^b |f(x) e^{-x/2}|^p x^alpha dx (raised to 1/p)."""
    b = laguerre_upper_limit(f, p) if b is None else b
    if b <= a:
        return 0.0
    if math.isinf(p):
        x = sup_grid(b)
        x = x[(x >= a) & (x <= b)]
        v = f.tilde(x)
        _check_finite(x, v, "sup norm")
        return float(np.max(np.abs(v))) if v.size else 0.0
    rule = _default_rule(f, a, b, alpha) if rule is None else rule
    if rule is None:
        return 0.0
    x = rule.nodes
    v = f.tilde(x)
    _check_finite(x, v, "laguerre norm")
    with np.errstate(divide="ignore"):
        weight = rule.weights * np.where(x > 0, x, 1.0) ** alpha
    return _p_norm_from_integral(v, weight, p)


def bessel_integral_p(f, p, alpha, a=0.0, b=None, rule=None, warn=True):
    """int_a^b |f(x)|^p x^{2 alpha + 1} dx (raised to 1/p)."""
    b = bessel_upper_limit(f) if b is None else b
    if b <= a:
        return 0.0
    if math.isinf(p):
        x = sup_grid(b)
        x = x[(x >= a) & (x <= b)]
        v = f(x)
        _check_finite(x, v, "sup norm")
        return float(np.max(np.abs(v))) if v.size else 0.0
    rule = _default_rule(f, a, b, 2 * alpha + 1) if rule is None else rule
    if rule is None:
        return 0.0
    x = rule.nodes
    v = f(x)
    _check_finite(x, v, "bessel norm")
    weight = rule.weights * x ** (2 * alpha + 1)
    integrand = np.abs(v) ** p * x ** (2 * alpha + 1)
    if warn and f.support is None and integrand.size:
        peak = np.max(integrand)
        if peak > 0 and integrand[-1] > 1e-8 * peak:
            warnings.warn(f"integrand not decayed at x = {b:g} (ratio {integrand[-1] / peak:.2e}); "
                          "norm may be truncated", TailWarning, stacklevel=3)
    return _p_norm_from_integral(v, weight, p)


def norm_laguerre_fn(f, spec):
    if spec.setting != LAGUERRE_FN:
        raise ValueError("norm_laguerre_fn needs setting laguerre_fn")
    return laguerre_integral_p(f, spec.p, spec.alpha)


def norm_bessel_fn(f, spec):
    if spec.setting != BESSEL_FN:
        raise ValueError("norm_bessel_fn needs setting bessel_fn")
    if spec.alpha < -0.5:
        raise DomainError("Bessel-weighted norms need alpha >= -1/2")
    return bessel_integral_p(f, spec.p, spec.alpha)


def norm_seq(a, spec):
    if spec.setting != LAGUERRE_SEQ:
        raise ValueError("norm_seq needs setting laguerre_seq")
    values = a.values if isinstance(a, SeqVec) else np.asarray(a, dtype=float)
    w = special.binomial_weights(spec.alpha, len(values) - 1)
    return _p_norm_from_integral(values, w, spec.p)


def norm(obj, spec):
    """Dispatch on the setting."""
    if spec.setting == LAGUERRE_FN:
        return norm_laguerre_fn(obj, spec)
    if spec.setting == BESSEL_FN:
        return norm_bessel_fn(obj, spec)
    return norm_seq(obj, spec)


def pair_seq(a, b):
    """<a, b> = sum a(k) b(k) w(k), shorter sequence zero-padded."""
    if a.alpha != b.alpha:
        raise ValueError(f"alpha mismatch: {a.alpha} vs {b.alpha}")
    n = min(len(a), len(b))
    w = special.binomial_weights(a.alpha, max(n - 1, 0))
    return float(np.sum(a.values[:n] * b.values[:n] * w[:n]))
