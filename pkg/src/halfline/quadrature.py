"""Immutable quadrature rules.

Gauss rules are built by Golub-Welsch (eigenvalues of the symmetric Jacobi
matrix); weights come from the Christoffel function of the orthonormal
recurrence, which keeps the tiny weights at large nodes relatively accurate.
Composite Gauss-Legendre panel rules cover plain-weight integrals on finite
intervals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln, roots_jacobi

from ._exceptions import DomainError, NumericalError

LAGUERRE = "exp(-x) x^alpha on (0, inf)"
JACOBI_SYM = "(1 - u^2)^(alpha - 1/2) on (-1, 1)"
PLAIN = "plain"

DEFAULT_GAUSS_ORDER = 96
DEFAULT_PANELS = 64
DEFAULT_PANEL_ORDER = 8
WINDOW_ORDER = 64


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    domain: tuple
    weight_descriptor: str
    alpha: float | None = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        weights = np.array(self.weights, dtype=float)
        nodes.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def order(self):
        return len(self.nodes)

    def integrate(self, values):
        """Weighted sum over the last axis of `values`."""
        return np.asarray(values) @ self.weights

    def describe(self):
        return {"weight": self.weight_descriptor, "order": self.order,
                "domain": [float(d) for d in self.domain], "alpha": self.alpha, **self.meta}


def _christoffel_weights(nodes, diag, offdiag, mu0):
    """w_i = 1 / sum_k p_k(x_i)^2 for the orthonormal polynomials p_k.

    Running values are rescaled to stay finite; the scale is tracked in logs.
    """
    n = len(diag)
    p_prev = np.zeros_like(nodes)
    p = np.full_like(nodes, 1.0 / math.sqrt(mu0))
    total = p * p
    log_scale = np.zeros_like(nodes)
    for k in range(n - 1):
        p_next = ((nodes - diag[k]) * p - (offdiag[k - 1] if k > 0 else 0.0) * p_prev) / offdiag[k]
        p_prev, p = p, p_next
        total = total + p * p
        big = np.abs(p) > 1e100
        if np.any(big):
            p[big] *= 1e-100
            p_prev[big] *= 1e-100
            total[big] *= 1e-200
            log_scale[big] += 200 * math.log(10.0)
    with np.errstate(over="ignore", under="ignore"):
        return np.exp(-np.log(total) - log_scale)


def _golub_welsch(diag, offdiag, mu0):
    try:
        nodes = eigh_tridiagonal(diag, offdiag, eigvals_only=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"tridiagonal eigensolver failed: {exc}") from exc
    nodes = np.sort(nodes)
    weights = _christoffel_weights(nodes, diag, offdiag, mu0)
    if not (np.all(np.isfinite(weights)) and np.all(weights > 0)):
        raise NumericalError("Golub-Welsch produced non-positive weights")
    return nodes, weights


def _check_order(order):
    if int(order) != order or order < 1:
        raise ValueError(f"quadrature order must be a positive integer, got {order}")
    return int(order)


def gauss_gen_laguerre(order, alpha):
    """Gauss rule for int_0^inf g(x) e^{-x} x^alpha dx, exact to degree 2*order-1."""
    order = _check_order(order)
    alpha = float(alpha)
    if not alpha > -1:
        raise DomainError(f"gauss_gen_laguerre needs alpha > -1, got {alpha}")
    k = np.arange(order, dtype=float)
    diag = 2 * k + alpha + 1
    kk = np.arange(1, order, dtype=float)
    offdiag = np.sqrt(kk * (kk + alpha))
    mu0 = math.exp(gammaln(alpha + 1))
    if order == 1:
        nodes, weights = np.array([alpha + 1.0]), np.array([mu0])
    else:
        nodes, weights = _golub_welsch(diag, offdiag, mu0)
    return QuadratureRule(nodes, weights, (0.0, math.inf), LAGUERRE, alpha)


def angular_normalization(alpha):
    """Gamma(alpha+1) / (Gamma(alpha+1/2) Gamma(1/2)): makes c sin^{2 alpha} a probability on (0, pi)."""
    alpha = float(alpha)
    if not alpha > -0.5:
        raise DomainError(f"angular normalization needs alpha > -1/2, got {alpha}")
    return math.exp(gammaln(alpha + 1) - gammaln(alpha + 0.5) - 0.5 * math.log(math.pi))


def gauss_jacobi_sym(order, alpha):
    """Gauss rule for int_{-1}^{1} g(u) (1-u^2)^(alpha-1/2) du (Gegenbauer weight)."""
    order = _check_order(order)
    alpha = float(alpha)
    if not alpha > -0.5:
        raise DomainError(f"gauss_jacobi_sym needs alpha > -1/2, got {alpha}")
    mu0 = 1.0 / angular_normalization(alpha)
    if order == 1:
        return QuadratureRule([0.0], [mu0], (-1.0, 1.0), JACOBI_SYM, alpha)
    k = np.arange(1, order, dtype=float)
    # monic recurrence coefficients; k = 1 written in cancelled form (alpha = 0 safe)
    b = k * (k + 2 * alpha - 1) / (4 * (k + alpha) * (k + alpha - 1) + (k == 1))
    b[0] = 1.0 / (2.0 * (alpha + 1.0))
    nodes, weights = _golub_welsch(np.zeros(order), np.sqrt(b), mu0)
    nodes = 0.5 * (nodes - nodes[::-1])  # enforce exact symmetry
    weights = 0.5 * (weights + weights[::-1])
    return QuadratureRule(nodes, weights, (-1.0, 1.0), JACOBI_SYM, alpha)


def endpoint_limit_rule():
    """Two-point rule u = -1, +1 with weights 1/2: the alpha -> -1/2 limit of the
    normalized angular measure."""
    return QuadratureRule([-1.0, 1.0], [0.5, 0.5], (-1.0, 1.0), "delta(-1)/2 + delta(1)/2", -0.5)


def normalized_angular_rule(order, alpha):
    """Angular rule whose weights sum to one (probability measure in u = cos phi)."""
    if float(alpha) == -0.5:
        return endpoint_limit_rule()
    rule = gauss_jacobi_sym(order, alpha)
    # c_alpha * weights, renormalized so the unit mass holds to rounding
    weights = rule.weights / rule.weights.sum()
    return QuadratureRule(rule.nodes, weights, rule.domain, rule.weight_descriptor + " * c_alpha", rule.alpha)


@lru_cache(maxsize=None)
def _jacobi_roots(order, a, b):
    nodes, weights = roots_jacobi(order, a, b)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def angular_window_rule(phi_lo, phi_hi, alpha, order=WINDOW_ORDER):
    """Per-row nodes and weights for c_alpha int_{phi_lo}^{phi_hi} g(phi) sin^{2 alpha}(phi) dphi.

    phi_lo, phi_hi: arrays with 0 <= phi_lo < phi_hi <= pi, not both at the ends
    (whole-range windows belong to the global angular rule).  Windows inside
    (0, pi) use Gauss-Legendre; a window reaching 0 (or pi) uses a Gauss-Jacobi
    rule that carries the phi^{2 alpha} (or (pi - phi)^{2 alpha}) end factor.
    Returns (phi, weights), each of shape (rows, order).
    """
    alpha = float(alpha)
    c = angular_normalization(alpha)
    lo = np.asarray(phi_lo, dtype=float)
    hi = np.asarray(phi_hi, dtype=float)
    at_zero, at_pi = lo <= 0.0, hi >= math.pi
    if np.any(at_zero & at_pi):
        raise ValueError("angular_window_rule: window covers [0, pi]; use the global angular rule")
    power = 2.0 * alpha
    phi = np.empty((lo.size, order))
    weights = np.empty_like(phi)
    for mask, (a, b) in ((~at_zero & ~at_pi, (0.0, 0.0)), (at_zero, (0.0, power)), (at_pi, (power, 0.0))):
        rows = slice(None) if mask.all() else np.flatnonzero(mask)
        if not np.any(mask):
            continue
        v, w = _jacobi_roots(order, a, b)
        start, half = lo[rows, None], (hi[rows, None] - lo[rows, None]) / 2.0
        nodes = start + half * (1.0 + v)
        wt = (c * w) * half
        if power:
            sine = np.sin(nodes)
            if b:  # (1 + v)^{2 alpha} = (phi / half)^{2 alpha}
                sine /= nodes
                wt *= half ** power
            elif a:  # (1 - v)^{2 alpha} = ((pi - phi) / half)^{2 alpha}
                sine /= math.pi - nodes
                wt *= half ** power
            wt *= sine if power == 1.0 else sine ** power
        phi[rows] = nodes
        weights[rows] = wt
    return phi, weights


def panel_rule(a, b, panels=DEFAULT_PANELS, panel_order=DEFAULT_PANEL_ORDER,
               oscillation_scale=None, graded_levels=0, grading_ratio=0.15):
    """Composite Gauss-Legendre rule on [a, b].

    With `oscillation_scale` y, panel widths are capped at pi / max(y, 1).
    With `graded_levels` L > 0, the first panel is split geometrically toward
    `a` (ratio `grading_ratio`) to absorb (x - a)^s endpoint singularities.
    """
    if int(panels) != panels or panels < 1:
        raise ValueError(f"panel count must be a positive integer, got {panels}")
    panel_order = _check_order(panel_order)
    a, b = float(a), float(b)
    if not b > a:
        raise ValueError(f"panel_rule needs b > a, got [{a}, {b}]")
    panels = int(panels)
    if oscillation_scale is not None:
        cap = math.pi / max(float(oscillation_scale), 1.0)
        panels = max(panels, math.ceil((b - a) / cap))
    edges = np.linspace(a, b, panels + 1)
    if graded_levels > 0:
        h = edges[1] - a
        inner = a + h * grading_ratio ** np.arange(graded_levels, 0, -1)
        edges = np.concatenate([[a], inner, edges[1:]])
    x, w = np.polynomial.legendre.leggauss(panel_order)
    lo, hi = edges[:-1, None], edges[1:, None]
    nodes = (0.5 * (hi - lo) * x + 0.5 * (hi + lo)).ravel()
    weights = (0.5 * (hi - lo) * w).ravel()
    return QuadratureRule(nodes, weights, (a, b), PLAIN,
                          meta={"panels": len(edges) - 1, "panel_order": panel_order})


def panel_halfline(x_max, panels=DEFAULT_PANELS, panel_order=DEFAULT_PANEL_ORDER,
                   oscillation_scale=None, graded_levels=0):
    """Composite Gauss-Legendre on [0, x_max] (the half-line truncated at x_max)."""
    if not x_max > 0:
        raise ValueError(f"x_max must be positive, got {x_max}")
    return panel_rule(0.0, x_max, panels, panel_order, oscillation_scale, graded_levels)


def laguerre_weighted(rule, alpha):
    """Nodes and effective weights for int_0^inf h(x) e^{-x} x^alpha dx.

    Accepts a generalized Gauss-Laguerre rule with matching alpha, or a plain
    rule on [0, X] (the weight is then folded into the returned weights).
    """
    if rule.weight_descriptor == LAGUERRE:
        if abs(rule.alpha - alpha) > 1e-14:
            raise ValueError(f"rule alpha {rule.alpha} does not match {alpha}")
        return rule.nodes, rule.weights
    if rule.weight_descriptor == PLAIN:
        x = rule.nodes
        with np.errstate(divide="ignore"):
            return x, rule.weights * np.exp(-x) * np.where(x > 0, x, 1.0) ** alpha
    raise ValueError(f"rule with weight {rule.weight_descriptor!r} cannot serve the Laguerre measure")
