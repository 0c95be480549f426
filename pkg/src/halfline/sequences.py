"""Linearization coefficients of normalized Laguerre polynomials and the
discrete translation/convolution they generate on weighted sequences.

    gamma(n, m, k) = (1 / Gamma(alpha+1)) int_0^inf R_n R_m R_k e^{-2x} x^alpha dx

The 1/Gamma(alpha+1) factor makes sum_k gamma(n, m, k) w(k) = 1.  The raw
integral (without it) is available as ``LinearizationTable.raw_values``.
Positivity of all coefficients holds for alpha > ALPHA_MIN.

Two evaluations are combined.  The Gauss rule (x = u/2, generalized Laguerre
nodes) is exact in exact arithmetic and accurate to ~1e-14 relative for
generic indices.  Near a face min(n, m, k) = 0 the values are tiny and the
rule cancels badly, so there the finite sum from the generating function

    sum gamma(n,m,k) w(n) w(m) w(k) r^n s^m t^k = (2 - r - s - t + r s t)^(-alpha-1)

is used instead; it is exact at min index 0 but alternates (and is useless)
for large indices.  Each entry takes the finite sum only when its measured
condition number is below FINITE_SUM_MAX_COND.
"""
from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import gammaln

from . import special
from ._exceptions import DomainError
from .laguerre import analyze
from .quadrature import gauss_gen_laguerre
from .spaces import SeqVec, pair_seq

ALPHA_MIN = (-5.0 + math.sqrt(17.0)) / 2.0
NORMALIZATION = "divided-by-Gamma(alpha+1)"
VALIDATION_TOL = 1e-4
TAIL_WINDOW = 8
BRIDGE_ORDER = 96
FINITE_SUM_MAX_COND = 1e3
FINITE_SUM_MAX_INDEX = 3


def _check_alpha(alpha):
    alpha = float(alpha)
    if not alpha > ALPHA_MIN:
        raise DomainError(f"linearization coefficients need alpha > {ALPHA_MIN:.6f}, got {alpha}")
    return alpha


def _half_rule(order, alpha):
    """Nodes x and weights for int g(x) e^{-2x} x^alpha dx / Gamma(alpha+1) (x = u/2)."""
    rule = gauss_gen_laguerre(order, alpha)
    scale = math.exp(-(alpha + 1.0) * math.log(2.0) - gammaln(alpha + 1.0))
    return rule.nodes / 2.0, rule.weights * scale


def finite_sum(n, m, k, alpha, dmax=None):
    """Generating-function expansion of gamma(n, m, k) (broadcasts over indices).

    gamma = 2^{-alpha-1} / (Gamma(alpha+1) w(n) w(m) w(k))
            * sum_d (-1)^d Gamma(N-2d+alpha+1) 2^{-(N-2d)} / ((n-d)! (m-d)! (k-d)! d!),
    N = n + m + k, d = 0..min(n, m, k).  Returns (value, condition number).
    With `dmax`, terms beyond it are dropped (only valid where min index <= dmax).
    """
    n, m, k = np.broadcast_arrays(*(np.asarray(i, dtype=float) for i in (n, m, k)))
    N = n + m + k
    low = np.minimum(np.minimum(n, m), k)
    dmax = int(low.max()) if dmax is None else int(dmax)
    lw = sum(gammaln(j + alpha + 1) - gammaln(alpha + 1) - gammaln(j + 1) for j in (n, m, k))
    base = -lw - gammaln(alpha + 1) - (alpha + 1) * math.log(2.0)
    total = np.zeros(n.shape)
    absum = np.zeros(n.shape)
    for d in range(dmax + 1):
        ok = low >= d
        lt = (gammaln(N - 2 * d + alpha + 1) - (N - 2 * d) * math.log(2.0) - gammaln(np.where(ok, n - d, 0) + 1)
              - gammaln(np.where(ok, m - d, 0) + 1) - gammaln(np.where(ok, k - d, 0) + 1) - gammaln(d + 1))
        term = np.where(ok, np.exp(lt + base), 0.0)
        total = total + (-1) ** d * term
        absum = absum + term
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(total != 0, absum / np.abs(total), np.inf)
    return total, cond


def linearization_coeff(n, m, k, alpha, raw=False):
    """gamma(n, m, k); ``raw=True`` omits the 1/Gamma(alpha+1) factor."""
    alpha = _check_alpha(alpha)
    idx = [int(i) for i in (n, m, k)]
    if any(i < 0 or i != j for i, j in zip(idx, (n, m, k))):
        raise ValueError("indices must be non-negative integers")
    value = math.nan
    if min(idx) <= FINITE_SUM_MAX_INDEX:
        v, cond = finite_sum(*idx, alpha)
        if cond <= FINITE_SUM_MAX_COND:
            value = float(v)
    if math.isnan(value):
        value = quadrature_coeff(*idx, alpha)
    return value * math.exp(gammaln(alpha + 1.0)) if raw else value


def quadrature_coeff(n, m, k, alpha):
    """gamma(n, m, k) from the Gauss rule of order ceil((n+m+k)/2)+1 alone."""
    alpha = _check_alpha(alpha)
    order = math.ceil((n + m + k) / 2) + 1
    x, w = _half_rule(order, alpha)
    R = special.normalized_laguerre_table(max(n, m, k), alpha, x)
    return float(np.sum(R[n] * R[m] * R[k] * w))


def geometric_tail(terms, window=TAIL_WINDOW):
    """Estimated remainder sum_{j>last} of a nonnegative, eventually geometric series.

    The ratio is the largest successive ratio over the last `window` terms;
    returns inf when that ratio is >= 1.
    """
    t = np.abs(np.asarray(terms, dtype=float))
    if t.size == 0 or t[-1] == 0.0:
        return 0.0
    tail = t[-(window + 1):]
    if np.any(tail[:-1] == 0):
        return math.inf
    r = float(np.max(tail[1:] / tail[:-1]))
    return math.inf if r >= 1.0 else float(t[-1] * r / (1.0 - r))


@dataclass(frozen=True, eq=False)
class LinearizationTable:
    alpha: float
    K: int
    values: np.ndarray
    normalization: str = NORMALIZATION
    residual: float = math.nan
    tail_bound: float = math.nan
    valid: bool = True
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def raw_values(self):
        return self.values * math.exp(gammaln(self.alpha + 1.0))

    @property
    def weights(self):
        return special.binomial_weights(self.alpha, self.K)

    def __getitem__(self, key):
        return self.values[key]

    def sum_identity(self, n, m):
        """(sum_{k<=K} gamma(n,m,k) w(k), geometric tail estimate)."""
        terms = self.values[n, m] * self.weights
        return float(np.sum(terms)), geometric_tail(terms)

    def describe(self):
        return {"alpha": self.alpha, "K": self.K, "normalization": self.normalization,
                "validation_residual": self.residual, "tail_bound": self.tail_bound, "valid": self.valid,
                **self.meta}


def build_linearization_table(K, alpha, validate=True):
    """All gamma(n, m, k), n, m, k <= K, from one Gauss rule of order ceil(3K/2)+1.

    Validation: `residual` is max over n, m <= K/2 of |sum_{k<=K} gamma w(k) - 1|.
    For large n, m most of that is genuine truncation (about 0.5 at n = m = K/2),
    so validity is judged on the excess of each row's gap over its geometric
    tail estimate; rows whose tail estimate is infinite are counted, not judged.
    """
    alpha = _check_alpha(alpha)
    K = int(K)
    if K < 0:
        raise ValueError("K must be >= 0")
    order = math.ceil(3 * K / 2) + 1
    x, w = _half_rule(order, alpha)
    R = special.normalized_laguerre_table(K, alpha, x)
    Rw = R * w
    values = np.einsum("ni,mi,ki->nmk", Rw, R, R, optimize=True)
    # symmetrize away round-off differences between index orders
    values = (values + values.transpose(0, 2, 1) + values.transpose(1, 0, 2) + values.transpose(1, 2, 0)
              + values.transpose(2, 0, 1) + values.transpose(2, 1, 0)) / 6.0
    grid = np.indices(values.shape)
    near_face = grid.min(axis=0) <= FINITE_SUM_MAX_INDEX
    # sorted indices: every permutation of a triple gets the same value and the same choice
    fs, cond = finite_sum(*np.sort(grid[:, near_face], axis=0), alpha, dmax=FINITE_SUM_MAX_INDEX)
    use = cond <= FINITE_SUM_MAX_COND
    sel = tuple(g[near_face][use] for g in grid)
    values[sel] = fs[use]
    table = LinearizationTable(alpha, K, values, meta={"quadrature_order": order})
    if not validate:
        return table
    half = K // 2
    weights = special.binomial_weights(alpha, K)
    sums = np.einsum("nmk,k->nm", values[:half + 1, :half + 1], weights)
    tails = np.array([[geometric_tail(values[n, m] * weights) for m in range(half + 1)] for n in range(half + 1)])
    gap = np.abs(sums - 1.0)
    residual = float(np.max(gap))
    checked = np.isfinite(tails)
    excess = float(np.max(gap[checked] - tails[checked])) if np.any(checked) else math.nan
    meta = dict(table.meta, validation_excess=excess, unchecked_rows=int(np.sum(~checked)))
    return LinearizationTable(alpha, K, values, residual=residual,
                              tail_bound=float(np.max(tails[checked])) if np.any(checked) else math.inf,
                              valid=not excess > VALIDATION_TOL, meta=meta)


# --- CSV export / disk cache ----------------------------------------------

def write_table_csv(table, path):
    """Flat `n,m,k,value` export; `#` header lines record alpha, K and normalization."""
    path = Path(path)
    K = table.K
    n, m, k = np.meshgrid(*(np.arange(K + 1),) * 3, indexing="ij")
    with open(path, "w", newline="") as fh:
        fh.write(f"# alpha={table.alpha!r}\n# K={K}\n# normalization={table.normalization}\n")
        fh.write(f"# validation_residual={table.residual!r}\n# tail_bound={table.tail_bound!r}\n")
        fh.write(f"# valid={table.valid}\n")
        writer = csv.writer(fh)
        writer.writerow(["n", "m", "k", "value"])
        for row in zip(n.ravel(), m.ravel(), k.ravel(), table.values.ravel()):
            writer.writerow([int(row[0]), int(row[1]), int(row[2]), repr(float(row[3]))])


def read_table_csv(path):
    header = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, val = line[1:].strip().partition("=")
            header[key.strip()] = val.strip()
    try:
        alpha, K = float(header["alpha"]), int(header["K"])
    except KeyError as exc:
        raise ValueError(f"{path}: missing header field {exc}") from None
    if header.get("normalization") != NORMALIZATION:
        raise ValueError(f"{path}: unexpected normalization {header.get('normalization')!r}")
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(line for line in fh if not line.startswith("#")) if r]
    if rows and rows[0][0].strip() == "n":
        rows = rows[1:]
    data = np.array(rows, dtype=float).reshape(-1, 4)
    if data.shape[0] != (K + 1) ** 3:
        raise ValueError(f"{path}: expected {(K + 1) ** 3} rows, found {data.shape[0]}")
    values = np.zeros((K + 1,) * 3)
    idx = data[:, :3].astype(int)
    values[idx[:, 0], idx[:, 1], idx[:, 2]] = data[:, 3]
    residual = float(header.get("validation_residual", "nan"))
    tail = float(header.get("tail_bound", "nan"))
    return LinearizationTable(alpha, K, values, residual=residual, tail_bound=tail,
                              valid=header.get("valid", "True") == "True")


def cache_path(cache_dir, alpha, K):
    return Path(cache_dir) / f"gamma_alpha={float(alpha)!r}_K={int(K)}.csv"


def cached_table(K, alpha, cache_dir=None):
    """Build the table, or load it from `cache_dir` (written there on first build)."""
    if cache_dir is None:
        return build_linearization_table(K, alpha)
    path = cache_path(cache_dir, alpha, K)
    if path.exists():
        return read_table_csv(path)
    table = build_linearization_table(K, alpha)
    os.makedirs(cache_dir, exist_ok=True)
    write_table_csv(table, path)
    return table


# --- sequence operators ---------------------------------------------------

def _check_seq(a, table):
    if a.alpha != table.alpha:
        raise ValueError(f"sequence alpha {a.alpha} does not match table alpha {table.alpha}")
    if len(a) > table.K + 1:
        raise ValueError(f"sequence length {len(a)} exceeds table size K+1 = {table.K + 1}")


def translate_seq(a, k, table):
    """n -> sum_m a(m) w(m) gamma(n, m, k), n <= K."""
    _check_seq(a, table)
    k = int(k)
    if not 0 <= k <= table.K:
        raise ValueError(f"translation index {k} outside [0, {table.K}]")
    L = len(a)
    aw = a.values * table.weights[:L]
    return SeqVec(table.values[:, :L, k] @ aw, a.alpha)


def translation_matrix(a, table):
    """Rows k -> translate_seq(a, k) for all k <= K."""
    _check_seq(a, table)
    L = len(a)
    aw = a.values * table.weights[:L]
    return np.einsum("nmk,m->kn", table.values[:, :L, :], aw)


def convolve_seq(a, b, table):
    """k -> sum_{m,n} a(m) b(n) gamma(n, m, k) w(n) w(m) = <b, T_k a>."""
    _check_seq(b, table)
    return SeqVec([pair_seq(b, translate_seq(a, k, table)) for k in range(table.K + 1)], a.alpha)


# --- function <-> sequence bridge -----------------------------------------

def _exp_moment(values_fn, c, alpha, order):
    """int g(x) e^{-c x} x^alpha dx by x = u / c and the generalized Laguerre rule."""
    rule = gauss_gen_laguerre(order, alpha)
    x = rule.nodes / c
    return values_fn(x), rule.weights * c ** (-(alpha + 1.0))


def bridge_check(f, n, table, k_max=None, order=BRIDGE_ORDER):
    """Measure the translate-of-coefficients identity under two weight conventions.

    Sequence side: T_n(f_hat)(k) = sum_m f_hat(m) w(m) gamma(k, m, n).
    Function side, convention "exp(-2x)":   int f R_n R_k e^{-2x}   x^alpha dx
    Function side, convention "exp(-3x/2)": int f R_n R_k e^{-3x/2} x^alpha dx
    (the latter is the coefficient of f(x) e^{-x/2} R_n(x) e^{-x/2}).
    Returns both residuals; nothing is asserted.
    """
    alpha, K = table.alpha, table.K
    n = int(n)
    k_max = K if k_max is None else int(k_max)
    if not (0 <= n <= K and 0 <= k_max <= K):
        raise ValueError("bridge_check: indices beyond table")
    coeffs = analyze(f, alpha, K)
    seq_side = translate_seq(coeffs, n, table).values[:k_max + 1]
    out = {"n": n, "k_max": k_max, "alpha": alpha, "quadrature_order": order, "sequence_side": seq_side.tolist()}
    for label, c in (("exp(-2x)", 2.0), ("exp(-3x/2)", 1.5)):
        def g(x):
            return f(x) * special.normalized_laguerre(n, alpha, x)
        gx, w = _exp_moment(g, c, alpha, order)
        Rk = special.normalized_laguerre_table(k_max, alpha, _exp_moment(lambda x: x, c, alpha, order)[0])
        fn_side = Rk @ (gx * w)
        resid = np.abs(fn_side - seq_side)
        out[label] = {"function_side": fn_side.tolist(), "max_residual": float(np.max(resid))}
    a, b = out["exp(-2x)"]["max_residual"], out["exp(-3x/2)"]["max_residual"]
    out["consistent_convention"] = "exp(-2x)" if a < b else ("exp(-3x/2)" if b < a else "tie")
    return out
