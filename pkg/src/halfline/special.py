"""Normalized Bessel functions, normalized Laguerre polynomials and binomial weights.

All evaluators accept scalars or arrays and return numpy arrays (0-d for
scalar input).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special as sps

from ._exceptions import DomainError

# Below this |z| the power series is summed directly; above it J_alpha is
# taken from scipy and rescaled.  The series loses ~log10(max term) digits
# to cancellation, about 2 digits at z = 6.
SERIES_SWITCH = 6.0


def _check_alpha(alpha, lower, inclusive=False):
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise DomainError(f"alpha must be finite, got {alpha}")
    if alpha < lower or (alpha == lower and not inclusive):
        op = ">=" if inclusive else ">"
        raise DomainError(f"alpha must be {op} {lower}, got {alpha}")
    return alpha


def _series_j(alpha, z):
    """Power series of j_alpha for modest |z| (vectorized)."""
    q = -(z * 0.5) ** 2
    term = np.ones_like(z)
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    for k in range(200):
        term = term * q / ((k + 1.0) * (k + 1.0 + alpha))
        # Kahan summation
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
            break
    return total


def normalized_bessel(alpha, z):
    """Entire Bessel function j_alpha(z) = Gamma(alpha+1) (2/z)^alpha J_alpha(z).

    Even in z with j_alpha(0) = 1.  Requires alpha > -1.
    """
    alpha = _check_alpha(alpha, -1.0)
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise ValueError("normalized_bessel: non-finite argument")
    az = np.abs(z)
    if alpha == 0.5:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(az > 0, np.sin(az) / np.where(az > 0, az, 1.0), 1.0)
    if alpha == -0.5:
        return np.cos(az)
    if alpha == 0.0:
        return sps.j0(az)
    if alpha == 1.0:
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.where(az > 0, 2.0 * sps.j1(az) / np.where(az > 0, az, 1.0), 1.0)
    out = np.empty_like(az)
    small = az <= SERIES_SWITCH
    if np.any(small):
        out[small] = _series_j(alpha, az[small])
    big = ~small
    if np.any(big):
        zb = az[big]
        scale = np.exp(sps.gammaln(alpha + 1.0) + alpha * np.log(2.0 / zb))
        out[big] = scale * sps.jv(alpha, zb)
    return out


def normalized_bessel_derivative(alpha, z):
    """d/dz j_alpha(z) = -z j_{alpha+1}(z) / (2 (alpha + 1))."""
    alpha = _check_alpha(alpha, -1.0)
    z = np.asarray(z, dtype=float)
    return -z * normalized_bessel(alpha + 1.0, z) / (2.0 * (alpha + 1.0))


def binomial_weight(alpha, k):
    """binom(k + alpha, k) by the product recurrence; k may be an int or int array."""
    alpha = _check_alpha(alpha, -1.0)
    k = np.asarray(k)
    if np.any(k < 0):
        raise ValueError("binomial_weight: k must be non-negative")
    kmax = int(k.max()) if k.size else 0
    return binomial_weights(alpha, kmax)[k]


def binomial_weights(alpha, kmax):
    """Array [w(0), ..., w(kmax)] with w(k) = binom(k + alpha, k)."""
    alpha = _check_alpha(alpha, -1.0)
    w = np.ones(int(kmax) + 1)
    for k in range(1, int(kmax) + 1):
        w[k] = w[k - 1] * (k + alpha) / k
    return w


def normalized_laguerre_table(nmax, alpha, x):
    """Rows R_0(x), ..., R_nmax(x) with R_n = L_n^alpha / L_n^alpha(0).

    Uses the recurrence (k+1+alpha) R_{k+1} = (2k+1+alpha-x) R_k - k R_{k-1},
    which is the Laguerre three-term recurrence divided through by w(k).
    """
    alpha = _check_alpha(alpha, -1.0)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("normalized_laguerre: x must be >= 0")
    out = np.empty((int(nmax) + 1,) + x.shape)
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 1.0 - x / (alpha + 1.0)
    for k in range(1, int(nmax)):
        out[k + 1] = ((2 * k + 1 + alpha - x) * out[k] - k * out[k - 1]) / (k + 1 + alpha)
    return out


def normalized_laguerre(n, alpha, x):
    """R_n^alpha(x); equals 1 at x = 0."""
    if int(n) != n or n < 0:
        raise ValueError("normalized_laguerre: n must be a non-negative integer")
    return normalized_laguerre_table(int(n), alpha, x)[int(n)]


def laguerre(n, alpha, x):
    """Classical generalized Laguerre polynomial L_n^alpha(x)."""
    return binomial_weight(alpha, int(n)) * normalized_laguerre(n, alpha, x)


# --- envelope predicate ---------------------------------------------------

@dataclass(frozen=True)
class EnvelopeParams:
    n: int
    nu: float
    calibration_constant: float | None = None
    decay_rate: float = 0.0625

    @classmethod
    def for_degree(cls, n, alpha, calibration_constant=None, decay_rate=0.0625):
        return cls(int(n), 4.0 * n + 2.0 * alpha + 2.0, calibration_constant, decay_rate)


def envelope_shape(n, alpha, x, nu, decay_rate=0.0625):
    """Four-branch envelope (without the constant) for |R_n e^{-x/2} x^{alpha/2}|."""
    x = np.asarray(x, dtype=float)
    xv = x * nu
    with np.errstate(divide="ignore", over="ignore"):
        b1 = xv ** (alpha / 2.0)
        b2 = np.where(xv > 0, xv, 1.0) ** -0.25
        b3 = (nu * (nu ** (1.0 / 3.0) + np.abs(x - nu))) ** -0.25
        b4 = np.exp(-decay_rate * x)
    shape = np.where(x <= 1.0 / nu, b1,
                     np.where(x <= nu / 2.0, b2,
                              np.where(x <= 1.5 * nu, b3, b4)))
    return shape / max(n, 1) ** (alpha / 2.0)


def envelope_lhs(n, alpha, x):
    x = np.asarray(x, dtype=float)
    return np.abs(normalized_laguerre(n, alpha, x) * np.exp(-x / 2.0) * x ** (alpha / 2.0))


def calibrate_envelope(alpha, n_max=64, grid_points=4000, safety=1.1, decay_rate=0.0625):
    """Empirical constant: safety times the max ratio lhs/shape over n <= n_max.

    Returns (constant, per-branch maxima) so the branch driving the constant
    is visible.
    """
    alpha = _check_alpha(alpha, -1.0)
    worst = 0.0
    per_branch = np.zeros(4)
    for n in range(n_max + 1):
        nu = 4.0 * n + 2.0 * alpha + 2.0
        x = np.concatenate([np.geomspace(1e-6, 1.0 / nu, 200),
                            np.linspace(1.0 / nu, 3.0 * nu, grid_points)])
        ratio = envelope_lhs(n, alpha, x) / envelope_shape(n, alpha, x, nu, decay_rate)
        branch = np.select([x <= 1 / nu, x <= nu / 2, x <= 1.5 * nu], [0, 1, 2], 3)
        for b in range(4):
            sel = branch == b
            if np.any(sel):
                per_branch[b] = max(per_branch[b], float(np.max(ratio[sel])))
        worst = max(worst, float(np.max(ratio)))
    return safety * worst, per_branch


def envelope_check(n, alpha, x, params):
    """True where |R_n e^{-x/2} x^{alpha/2}| respects the calibrated envelope.

    Test predicate only; never used to evaluate anything.
    """
    if params.calibration_constant is None:
        raise RuntimeError("envelope constant has not been calibrated")
    alpha = _check_alpha(alpha, -1.0)
    lhs = envelope_lhs(n, alpha, x)
    rhs = params.calibration_constant * envelope_shape(n, alpha, x, params.nu, params.decay_rate)
    return lhs <= rhs
