"""Sampled precompactness diagnostics for families of functions and sequences.

Every condition of the form "for all eps there is R (or delta) ..." is
evaluated on explicit grids, so every reported modulus is a sampled lower
bound of the true supremum.  Any finite family is precompact, so the
verdicts read trends rather than single numbers:

* tail: the radius R(eps) must exist within R_max *and* saturate across
  prefixes of the family (R for the whole family at most `saturation_ratio`
  times R for its first half).  A radius that keeps growing with the family
  index is the finite-sample signature of mass escaping to infinity.
* equicontinuity: omega(delta) below eps on the grid, or a clear power-law
  decay of omega toward zero (log-log slope >= `pass_slope`); flat curves fail.

This is a necessary-condition checker; it never proves precompactness.
"""
from __future__ import annotations

import csv
import datetime as _dt
import json
import math
import warnings
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import bessel, laguerre, sequences, special
from .quadrature import QuadratureRule, panel_rule
from .spaces import (BESSEL_FN, LAGUERRE_FN, LAGUERRE_SEQ, SETTINGS, GRADED_LEVELS, GRADING_RATIO, GridFunction,
                     NormSpec, SeqVec, bessel_upper_limit, bump, conjugate_exponent, gaussian, halfline_rule,
                     bessel_integral_p, laguerre_integral_p, laguerre_upper_limit, norm, sampled, scaled)

SCHEMA = 1
PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
MONOTONE_TOL = 1e-10
REFINE_MEMBER_FRACTION = 0.5
TAIL_PANELS_PER_STEP = 4


# --- configuration and families ------------------------------------------------

@dataclass(frozen=True)
class DiagnosticsConfig:
    epsilon: float = 1e-2
    M0: float = 4.0
    R_max: float = 64.0
    delta_grid: tuple = (0.5, 0.25, 0.1, 0.05, 0.02)
    t_points: int = 33
    h_points: int = 9
    R_step: float = 0.5
    N_max: int | None = None
    saturation_ratio: float = 1.5
    pass_slope: float = 0.5
    fail_slope: float = 0.1
    refinement_check: bool = True
    refinement_tol: float = 0.1
    include_head: bool = False
    coefficient_count: int = 24
    angular_order: int = 96
    window_order: int = 24
    panel_order: int = 8
    seed: int = 0
    polynomial_fast_path: bool = True

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if not (self.M0 > 0 and self.R_max > 0 and self.R_step > 0):
            raise ValueError("M0, R_max and R_step must be positive")
        grid = tuple(float(d) for d in self.delta_grid)
        if not grid:
            raise ValueError("delta_grid must be nonempty")
        if any(not 0 < d <= self.M0 for d in grid):
            raise ValueError("delta_grid must lie in (0, M0]")
        if any(b >= a for a, b in zip(grid, grid[1:])):
            raise ValueError("delta_grid must be strictly decreasing")
        object.__setattr__(self, "delta_grid", grid)
        if self.t_points < 1 or self.h_points < 2:
            raise ValueError("t_points >= 1 and h_points >= 2 required")
        if self.window_order < 2:
            raise ValueError("window_order must be >= 2")

    @property
    def t_grid(self):
        return np.linspace(0.0, self.M0, self.t_points)

    @property
    def h_grid(self):
        """Union of h_points equispaced points on [0, delta] over the delta grid."""
        return np.unique(np.concatenate([np.linspace(0.0, d, self.h_points) for d in self.delta_grid]))

    @property
    def R_grid(self):
        n = int(round(self.R_max / self.R_step))
        return self.R_step * np.arange(1, n + 1)

    def to_dict(self):
        d = asdict(self)
        d["delta_grid"] = list(self.delta_grid)
        return d


@dataclass(frozen=True, eq=False)
class FamilySpec:
    members: tuple
    setting: str
    alpha: float
    p: float = 2.0
    labels: tuple = ()

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValueError("family must have at least one member")
        if self.setting not in SETTINGS:
            raise ValueError(f"unknown setting {self.setting!r}")
        kind = SeqVec if self.setting == LAGUERRE_SEQ else GridFunction
        if not all(isinstance(m, kind) for m in members):
            raise TypeError(f"all members of a {self.setting} family must be {kind.__name__}")
        p = float(self.p)
        if not p >= 1:
            raise ValueError("p must be >= 1")
        object.__setattr__(self, "members", members)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "p", p)
        labels = tuple(self.labels) or tuple(_member_label(m, i) for i, m in enumerate(members))
        object.__setattr__(self, "labels", labels)

    def __len__(self):
        return len(self.members)

    @property
    def norm_spec(self):
        return NormSpec(self.p, self.alpha, self.setting)

    def describe(self):
        return {"setting": self.setting, "alpha": self.alpha, "p": _num(self.p), "size": len(self),
                "members": list(self.labels)}


def _member_label(m, i):
    if isinstance(m, SeqVec):
        return {"index": i, "length": len(m)}
    return dict(m.spec) or {"index": i}


def _num(x):
    """JSON-safe float (inf/nan as strings)."""
    x = float(x)
    return x if math.isfinite(x) else str(x)


def unit_normalized(f, setting, alpha, p):
    """f scaled to unit norm in the given function setting."""
    size = norm(f, NormSpec(p, alpha, setting))
    if size == 0:
        raise ValueError("cannot normalize the zero function")
    g = scaled(f, 1.0 / size)
    return GridFunction(g.func, f.decay_radius, dict(f.spec, normalized=True), f.support, f.degree)


def gaussian_family(sigmas, setting, alpha, p=2.0):
    return FamilySpec(tuple(gaussian(s) for s in sigmas), setting, alpha, p)


def shifted_bump_family(shifts, setting, alpha, p=2.0, radius=1.0, smoothness=1.0):
    """Unit-norm bumps bump(n, radius); their tails stay at 1 until R passes the shift."""
    members = tuple(unit_normalized(bump(s, radius, smoothness), setting, alpha, p) for s in shifts)
    return FamilySpec(members, setting, alpha, p)


# --- quadrature helpers ----------------------------------------------------------

def _weight_power(setting, alpha):
    return alpha if setting == LAGUERRE_FN else 2 * alpha + 1


def _aligned_rule(setting, alpha, upper, cfg):
    """Panel rule whose panel edges include every point of the R grid."""
    power = _weight_power(setting, alpha)
    graded = power != round(power)
    levels = (GRADED_LEVELS if power >= 0 else 2 * GRADED_LEVELS) if graded else 0
    n = TAIL_PANELS_PER_STEP * int(round(cfg.R_max / cfg.R_step))
    head = panel_rule(0.0, cfg.R_max, n, cfg.panel_order, graded_levels=levels, grading_ratio=GRADING_RATIO)
    if upper <= cfg.R_max:
        return head
    tail = panel_rule(cfg.R_max, upper, TAIL_PANELS_PER_STEP * math.ceil(upper - cfg.R_max), cfg.panel_order)
    return QuadratureRule(np.concatenate([head.nodes, tail.nodes]), np.concatenate([head.weights, tail.weights]),
                          (0.0, upper), head.weight_descriptor)


def _measure(setting, alpha, x, weights):
    if setting == LAGUERRE_FN:
        with np.errstate(divide="ignore"):
            return weights * np.where(x > 0, x, 1.0) ** alpha
    return weights * x ** (2 * alpha + 1)


def _integrand_values(setting, f, x):
    v = f(x)
    return v * np.exp(-x / 2.0) if setting == LAGUERRE_FN else v


def _p_norm(values, measure, p, axis=-1):
    if math.isinf(p):
        return np.max(np.abs(values), axis=axis)
    return np.sum(np.abs(values) ** p * measure, axis=axis) ** (1.0 / p)


def _upper(setting, f, p):
    if setting == LAGUERRE_FN:
        return laguerre_upper_limit(f, p)
    return bessel_upper_limit(f)


# --- tails -----------------------------------------------------------------------

def tail_mass(member, R, family):
    """Setting-appropriate mass beyond R (sequences: beyond index R)."""
    p, alpha = family.p, family.alpha
    if family.setting == LAGUERRE_SEQ:
        N = int(R)
        v = member.values[N + 1:]
        if v.size == 0:
            return 0.0
        w = special.binomial_weights(alpha, len(member) - 1)[N + 1:]
        return float(_p_norm(v, w, p))
    if family.setting == LAGUERRE_FN:
        return laguerre_integral_p(member, p, alpha, a=float(R))
    return float(bessel_integral_p(member, p, alpha, a=float(R), warn=False))


def head_mass(f, delta, family):
    """(int_0^delta |f e^{-x/2}|^p x^alpha dx)^{1/p}."""
    if family.setting != LAGUERRE_FN:
        raise ValueError("head mass is defined for the Laguerre function setting")
    return laguerre_integral_p(f, family.p, family.alpha, 0.0, float(delta))


def tail_profile(member, family, cfg):
    """Tail masses of one member at every point of the R grid (index grid for sequences)."""
    p, alpha = family.p, family.alpha
    if family.setting == LAGUERRE_SEQ:
        grid = _index_grid(family, cfg)
        return np.array([tail_mass(member, N, family) for N in grid])
    upper = max(_upper(family.setting, member, p), cfg.R_max)
    rule = _aligned_rule(family.setting, alpha, upper, cfg)
    x = rule.nodes
    v = _integrand_values(family.setting, member, x)
    meas = _measure(family.setting, alpha, x, rule.weights)
    start = np.searchsorted(x, cfg.R_grid)
    if math.isinf(p):
        suffix = np.maximum.accumulate(np.abs(v)[::-1])[::-1]
        return np.append(suffix, 0.0)[start]
    contrib = np.abs(v) ** p * meas
    suffix = np.append(np.cumsum(contrib[::-1])[::-1], 0.0)
    return suffix[start] ** (1.0 / p)


def _index_grid(family, cfg):
    longest = max(len(m) for m in family.members)
    top = longest - 1 if cfg.N_max is None else min(int(cfg.N_max), longest - 1)
    return np.arange(0, max(top, 0) + 1)


def find_tail_radius(family, cfg):
    """Smallest grid R (or index N) with sup over members of the tail < epsilon."""
    grid = _index_grid(family, cfg) if family.setting == LAGUERRE_SEQ else cfg.R_grid
    profiles = np.array([tail_profile(m, family, cfg) for m in family.members])
    sup = profiles.max(axis=0)
    eps = cfg.epsilon

    def first_below(row):
        hit = np.flatnonzero(row < eps)
        return float(grid[hit[0]]) if hit.size else None

    member_radius = [first_below(row) for row in profiles]
    prefix = []
    for j in range(1, len(family) + 1):
        vals = member_radius[:j]
        prefix.append(None if any(v is None for v in vals) else max(vals))
    return {"grid": grid.tolist(), "sup_tail": sup.tolist(), "radius": first_below(sup),
            "sup_at_grid_end": float(sup[-1]), "member_radius": member_radius, "prefix_radius": prefix,
            "index_based": family.setting == LAGUERRE_SEQ}


# --- equicontinuity ----------------------------------------------------------------

def _polynomial_translates(member, alpha, taus, x):
    """T_tau f(x) for a polynomial f through T_tau R_n = R_n(tau) R_n."""
    degree = member.degree
    coef = laguerre.analyze(member, alpha, degree).values
    coef = coef * special.binomial_weights(alpha, degree) * math.exp(-math.lgamma(alpha + 1))
    at_tau = special.normalized_laguerre_table(degree, alpha, taus) * coef[:, None]
    return at_tau.T @ special.normalized_laguerre_table(degree, alpha, x)


def _translation_block(family, member, taus, x, cfg):
    if family.setting == LAGUERRE_FN and member.degree is not None and cfg.polynomial_fast_path:
        return _polynomial_translates(member, family.alpha, taus, x)
    if family.setting == LAGUERRE_FN:
        params = laguerre.LaguerreTranslationParams.create(family.alpha, cfg.angular_order, cfg.window_order)
        return laguerre.translation_values(member, x[None, :], taus[:, None], params)
    rule = bessel.angular_rule_for(family.alpha, cfg.angular_order)
    return bessel.translation_values(member, x[None, :], taus[:, None], rule, cfg.window_order)


def _eqc_rule(family, member, tau_max, cfg):
    p, alpha = family.p, family.alpha
    if family.setting == LAGUERRE_FN:
        radius = (math.sqrt(member.decay_radius) + math.sqrt(tau_max)) ** 2
        upper = max(radius + 10.0, 40.0, 80.0 / p if math.isfinite(p) else 40.0)
    elif member.support is not None:
        upper = member.support[1] + tau_max
    else:
        upper = member.decay_radius + tau_max + 10.0
    return halfline_rule(0.0, upper, _weight_power(family.setting, alpha), panel_order=cfg.panel_order)


def translation_difference_norms(family, member, t_grid, h_grid, cfg):
    """Matrix of ||T_{t+h} f - T_t f|| (Laguerre: with the e^{-x/2} weight) over t x h."""
    t_grid, h_grid = np.asarray(t_grid, float), np.asarray(h_grid, float)
    pairs = (t_grid[:, None] + h_grid[None, :]).round(12)
    taus, inverse = np.unique(np.concatenate([t_grid.round(12), pairs.ravel()]), return_inverse=True)
    rule = _eqc_rule(family, member, float(taus.max()), cfg)
    x = rule.nodes
    block = _translation_block(family, member, taus, x, cfg)
    if family.setting == LAGUERRE_FN:
        block = block * np.exp(-x / 2.0)
    meas = _measure(family.setting, family.alpha, x, rule.weights)
    base = inverse[:len(t_grid)]
    moved = inverse[len(t_grid):].reshape(pairs.shape)
    out = np.empty(pairs.shape)
    for i in range(len(t_grid)):
        diff = block[moved[i]] - block[base[i]]
        out[i] = _p_norm(diff, meas, family.p)
    return out


def eqc_modulus_fn(family, cfg):
    """omega(delta) = max over members, t in t_grid, h in h_grid with h <= delta."""
    if family.setting == LAGUERRE_SEQ:
        raise ValueError("eqc_modulus_fn needs a function setting")
    t_grid, h_grid = cfg.t_grid, cfg.h_grid
    per_member = []
    for m in family.members:
        mat = translation_difference_norms(family, m, t_grid, h_grid, cfg)
        per_member.append([float(mat[:, h_grid <= d + 1e-15].max()) for d in cfg.delta_grid])
    per_member = np.array(per_member)
    omega = per_member.max(axis=0)
    out = {"delta": list(cfg.delta_grid), "omega": omega.tolist(), "per_member": per_member.tolist(),
           "t_grid": {"start": 0.0, "stop": cfg.M0, "points": cfg.t_points},
           "h_points_per_delta": cfg.h_points, "sampled_lower_bound": True,
           "nonincreasing": bool(np.all(np.diff(omega) <= MONOTONE_TOL))}
    if cfg.refinement_check:
        dmin = cfg.delta_grid[-1]
        fine_t = np.linspace(0.0, cfg.M0, 2 * cfg.t_points - 1)
        fine_h = np.linspace(0.0, dmin, 2 * cfg.h_points - 1)
        coarse = float(omega[-1])
        # members far below the family sup at delta_min cannot set it after a 10% change
        leading = [i for i, v in enumerate(per_member[:, -1]) if v >= REFINE_MEMBER_FRACTION * coarse]
        refined = max(float(translation_difference_norms(family, family.members[i], fine_t, fine_h, cfg).max())
                      for i in leading)
        change = abs(refined - coarse) / coarse if coarse > 0 else (0.0 if refined == 0 else math.inf)
        out["refinement"] = {"delta": dmin, "omega_refined": refined, "relative_change": change,
                             "members": leading}
    return out


def eqc_modulus_seq(family, table, cfg):
    """Curve j -> sup_a ||T_j(a) - a||_{p, alpha} for j = 0..N_max (no decay asserted)."""
    if family.setting != LAGUERRE_SEQ:
        raise ValueError("eqc_modulus_seq needs the sequence setting")
    top = table.K if cfg.N_max is None else min(int(cfg.N_max), table.K)
    w = table.weights
    curves = []
    for a in family.members:
        mat = sequences.translation_matrix(a, table)[:top + 1]
        padded = np.zeros(table.K + 1)
        padded[:len(a)] = a.values
        curves.append(_p_norm(mat - padded, w, family.p))
    curves = np.array(curves)
    norms = np.array([norm(a, family.norm_spec) for a in family.members])
    return {"j": list(range(top + 1)), "sup": curves.max(axis=0).tolist(), "per_member": curves.tolist(),
            "member_norms": norms.tolist(), "table": table.describe()}


# --- averaging (Bessel side) -----------------------------------------------------

def bessel_average(f, a, alpha, angular_rule=None):
    """s -> (1/A) int_0^a T_t f(s) t^{2 alpha + 1} dt with A = a^{2 alpha + 2} / (2 alpha + 2)."""
    return bessel.bessel_average(f, a, alpha, angular_rule)


# --- verdicts --------------------------------------------------------------------

def _loglog_slope(deltas, omega):
    d, w = np.asarray(deltas, float), np.asarray(omega, float)
    ok = w > 0
    if ok.sum() < 2:
        return math.inf if not np.any(w > 0) else 0.0
    return float(np.polyfit(np.log(d[ok]), np.log(w[ok]), 1)[0])


def _tail_verdict(block, cfg):
    r = block["radius"]
    if r is None:
        return FAIL, "no radius within the search range"
    prefix = block["prefix_radius"]
    n = len(prefix)
    half = prefix[max((n + 1) // 2 - 1, 0)]
    full = prefix[-1]
    offset = 1.0 if block.get("index_based") else 0.0
    ratio = (full + offset) / (half + offset) if half is not None and half + offset > 0 else 1.0
    block["prefix_growth"] = ratio
    if ratio > cfg["saturation_ratio"]:
        return FAIL, f"required radius keeps growing with the family index ({ratio:.2f}x from half to full family)"
    return PASS, "radius found and saturated across prefixes"


def _modulus_verdict(deltas, omega, cfg, refinement=None):
    eps = cfg["epsilon"]
    slope = _loglog_slope(deltas, omega)
    last = omega[-1]
    info = {"loglog_slope": slope if math.isfinite(slope) else str(slope)}
    if refinement is not None:
        last = max(last, refinement["omega_refined"])
        info["refinement_stable"] = refinement["relative_change"] <= cfg["refinement_tol"]
    if last < eps:
        info["basis"] = "observed"
        return PASS, info
    if slope >= cfg["pass_slope"] and last > 0:
        info["basis"] = "extrapolated"
        info["delta_for_epsilon"] = float(deltas[-1] * (eps / last) ** (1.0 / slope))
        return PASS, info
    info["basis"] = "trend"
    return (FAIL if slope < cfg["fail_slope"] else INCONCLUSIVE), info


def derive_verdicts(conditions, cfg):
    """Verdict strings from recorded numbers only (cfg: DiagnosticsConfig.to_dict())."""
    out = {}
    for key, block in conditions.items():
        if key == "tail":
            out[key], block["reason"] = _tail_verdict(block, cfg)
        elif key in ("equicontinuity", "head"):
            xs = block["delta"]
            ys = block["omega"] if key == "equicontinuity" else block["sup_head"]
            verdict, info = _modulus_verdict(xs, ys, cfg, block.get("refinement"))
            block.update(info)
            out[key] = verdict
        elif key == "pointwise_bounded":
            out[key] = PASS if all(math.isfinite(v) for v in block["bound"]) else FAIL
        elif key == "translation_in_mean":
            sup = block["sup"]
            late = sup[-max(1, len(sup) // 4):]
            # finite tables cannot refute the condition; report only
            out[key] = PASS if max(late) < cfg["epsilon"] else INCONCLUSIVE
        block["verdict"] = out[key]
    return out


@dataclass
class DiagnosticsReport:
    data: dict
    metadata: dict = field(default_factory=dict)

    @property
    def verdicts(self):
        return {k: v["verdict"] for k, v in self.data["conditions"].items()}

    def to_json(self, include_metadata=True):
        payload = dict(self.data)
        if include_metadata:
            payload["metadata"] = self.metadata
        return json.dumps(payload, sort_keys=True, indent=2, default=_json_default)

    def write_json(self, path):
        Path(path).write_text(self.to_json() + "\n")

    def write_csv(self, prefix):
        """`<prefix>_omega.csv` (delta,omega) and `<prefix>_tail.csv` (R,sup_tail)."""
        written = []
        cond = self.data["conditions"]
        if "equicontinuity" in cond:
            path = Path(f"{prefix}_omega.csv")
            _write_rows(path, ("delta", "omega"), zip(cond["equicontinuity"]["delta"], cond["equicontinuity"]["omega"]))
            written.append(path)
        if "tail" in cond:
            path = Path(f"{prefix}_tail.csv")
            head = ("N", "sup_tail") if cond["tail"].get("index_based") else ("R", "sup_tail")
            _write_rows(path, head, zip(cond["tail"]["grid"], cond["tail"]["sup_tail"]))
            written.append(path)
        return written


@contextmanager
def _collect_warnings(sink):
    """Record numeric warnings into `sink` (list of strings) and re-emit them."""
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        yield
    for w in caught:
        sink.append(f"{w.category.__name__}: {w.message}")
        warnings.warn_explicit(w.message, w.category, w.filename, w.lineno)


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(v)) for v in r])


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _sanitize(obj):
    """Replace non-finite floats by strings so the JSON stays standard."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def coefficient_bounds(family, count):
    """max over members of |f_hat(n)|, n < count (pointwise boundedness of the coefficient set)."""
    coeffs = np.array([laguerre.analyze(f, family.alpha, count - 1).values for f in family.members])
    return np.abs(coeffs).max(axis=0)


def verdict(family, cfg=None, table=None, conditions=None):
    """Assemble the diagnostics report for a family.

    `conditions` restricts the computed conditions (default: all that apply
    to the setting).  `table` is the linearization table for sequence
    families (built at the family length when omitted).
    """
    cfg = DiagnosticsConfig() if cfg is None else cfg
    setting = family.setting
    applicable = {LAGUERRE_FN: ["tail", "equicontinuity"] + (["head"] if cfg.include_head else []),
                  BESSEL_FN: ["tail", "equicontinuity"],
                  LAGUERRE_SEQ: ["tail", "pointwise_bounded", "translation_in_mean"]}[setting]
    wanted = applicable if conditions is None else [c for c in conditions if c in applicable]
    norms = [float(norm(m, family.norm_spec)) for m in family.members]
    blocks = {}
    provenance = {"normalization": {"gamma": sequences.NORMALIZATION, "analysis": laguerre.ANALYSIS_CONVENTION},
                  "angular_order": cfg.angular_order, "window_order": cfg.window_order,
                  "panel_order": cfg.panel_order,
                  "note": "sampled necessary-condition checker; moduli are lower bounds on the stated grids"}
    flags = []
    with _collect_warnings(flags):
        _fill_blocks(blocks, wanted, family, cfg, table, provenance)
    verdicts = derive_verdicts(blocks, cfg.to_dict())
    data = {"schema": SCHEMA, "kind": "diagnostics", "family": family.describe(), "config": cfg.to_dict(),
            "boundedness": {"norms": norms, "max": max(norms)}, "conditions": blocks, "verdicts": verdicts,
            "provenance": provenance, "warnings": flags}
    if setting == LAGUERRE_FN and family.p == 2 and "equicontinuity" in blocks:
        bound = coefficient_bounds(family, cfg.coefficient_count)
        data["coefficient_criterion"] = {
            "equicontinuity": verdicts["equicontinuity"], "coefficient_bound": bound.tolist(),
            "pointwise_bounded": bool(np.all(np.isfinite(bound))),
            "status": PASS if verdicts["equicontinuity"] == PASS and np.all(np.isfinite(bound)) else FAIL}
    return DiagnosticsReport(_sanitize(data), {"generated": _dt.datetime.now(_dt.timezone.utc).isoformat()})


def _fill_blocks(blocks, wanted, family, cfg, table, provenance):
    if "tail" in wanted:
        blocks["tail"] = find_tail_radius(family, cfg)
    if "equicontinuity" in wanted:
        blocks["equicontinuity"] = eqc_modulus_fn(family, cfg)
    if "head" in wanted:
        sup_head = [max(head_mass(f, d, family) for f in family.members) for d in cfg.delta_grid]
        blocks["head"] = {"delta": list(cfg.delta_grid), "sup_head": sup_head}
    if "pointwise_bounded" in wanted:
        vals = np.zeros(max(len(a) for a in family.members))
        for a in family.members:
            vals[:len(a)] = np.maximum(vals[:len(a)], np.abs(a.values))
        blocks["pointwise_bounded"] = {"bound": vals.tolist()}
    if "translation_in_mean" in wanted:
        if table is None:
            table = sequences.build_linearization_table(max(len(a) for a in family.members) - 1, family.alpha)
        blocks["translation_in_mean"] = eqc_modulus_seq(family, table, cfg)
        provenance["table"] = table.describe()


def rederive(report):
    """Re-run the verdict rules on a report's stored moduli."""
    blocks = json.loads(json.dumps(report.data["conditions"]))
    for b in blocks.values():
        for k in ("verdict", "reason", "basis", "loglog_slope", "delta_for_epsilon", "refinement_stable",
                  "prefix_growth"):
            b.pop(k, None)
    return derive_verdicts(blocks, report.data["config"])


# --- transform-side cross checks ------------------------------------------------------

DIRECTIONS = {
    "sequence-tail-to-function-equicontinuity": (LAGUERRE_SEQ, LAGUERRE_FN),
    "function-equicontinuity-to-sequence-tail": (LAGUERRE_FN, LAGUERRE_SEQ),
    "sequence-translation-to-function-tail": (LAGUERRE_SEQ, LAGUERRE_FN),
    "function-tail-and-head-to-sequence-translation": (LAGUERRE_FN, LAGUERRE_SEQ),
    "hankel-tail-to-equicontinuity": (BESSEL_FN, BESSEL_FN),
    "hankel-equicontinuity-to-tail": (BESSEL_FN, BESSEL_FN),
}


def _synthesized_family(family, p_out):
    members = tuple(laguerre.synthesize(laguerre.CoeffVec(a.values, family.alpha)) for a in family.members)
    return FamilySpec(members, LAGUERRE_FN, family.alpha, p_out)


def _analyzed_family(family, count, p_out):
    members = tuple(SeqVec(laguerre.analyze(f, family.alpha, count - 1).values, family.alpha)
                    for f in family.members)
    return FamilySpec(members, LAGUERRE_SEQ, family.alpha, p_out)


def _trimmed_sample(y, vals, label, rel=1e-16):
    """Cubic interpolant of samples, cut after the last value above rel * max |vals|."""
    big = np.flatnonzero(np.abs(vals) > rel * np.max(np.abs(vals))) if np.any(vals) else np.array([1])
    end = min(len(y), int(big[-1]) + 4)
    end = max(end, 2)
    return sampled(y[:end], vals[:end], label=label, kind="cubic")


def transformed_family(family, params, grid_points=4097):
    """Hankel transforms of the members, tabulated on [0, y_max] (cubic interpolation)."""
    y = np.linspace(0.0, params.y_max, grid_points)
    members = []
    for f in family.members:
        g = _trimmed_sample(y, bessel.hankel(f, params, y), "hankel")
        members.append(GridFunction(g.func, g.decay_radius, {"family": "hankel", "of": f.spec}, g.support))
    return FamilySpec(tuple(members), BESSEL_FN, family.alpha, conjugate_exponent(family.p))


def split_terms(family, N, cfg):
    """Head/tail split of the translation modulus of synthesized coefficient families.

    head(t, h) = (sum_{k<=N} |a(k)(R_k(t+h) - R_k(t))|^p w(k))^{1/p},
    tail(t)    = 2 e^{t/2} (sum_{k>N} |a(k)|^p w(k))^{1/p};
    each maximized over members, t in t_grid and h <= delta.
    """
    alpha, p = family.alpha, family.p
    t, h = cfg.t_grid, cfg.h_grid
    L = max(len(a) for a in family.members)
    w = special.binomial_weights(alpha, L - 1)
    Rt = special.normalized_laguerre_table(L - 1, alpha, t)
    Rth = special.normalized_laguerre_table(L - 1, alpha, t[:, None] + h[None, :])
    heads, tails = [], []
    for a in family.members:
        v = np.zeros(L)
        v[:len(a)] = a.values
        diff = (v[:N + 1, None, None] * (Rth[:N + 1] - Rt[:N + 1, :, None]))
        head = _p_norm(np.moveaxis(diff, 0, -1), w[:N + 1], p)
        rest = float(_p_norm(v[N + 1:], w[N + 1:], p)) if L > N + 1 else 0.0
        heads.append([float(head[:, h <= d + 1e-15].max()) for d in cfg.delta_grid])
        tails.append(float((2 * np.exp(t / 2) * rest).max()))
    return {"N": int(N), "delta": list(cfg.delta_grid), "head": np.max(heads, axis=0).tolist(), "tail": max(tails)}


def pego_cross_check(direction, family, cfg=None, table=None, hankel_params=None):
    """Hypothesis-side and conclusion-side moduli of one transform implication."""
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}; choose from {sorted(DIRECTIONS)}")
    cfg = DiagnosticsConfig() if cfg is None else cfg
    source, _ = DIRECTIONS[direction]
    if family.setting != source:
        raise ValueError(f"direction {direction!r} consumes {source} families, got {family.setting}")
    p_out = conjugate_exponent(family.p)
    alpha = family.alpha
    record = {"schema": SCHEMA, "kind": "transform_cross_check", "direction": direction,
              "family": family.describe(), "conjugate_p": _num(p_out)}
    if direction == "sequence-tail-to-function-equicontinuity":
        hyp = verdict(family, cfg, conditions=["tail", "pointwise_bounded"])
        image = _synthesized_family(family, p_out)
        concl = verdict(image, cfg, conditions=["equicontinuity"])
        N = hyp.data["conditions"]["tail"]["radius"]
        N = int(N) if isinstance(N, (int, float)) else max(len(a) for a in family.members) - 1
        record["split"] = split_terms(family, N, cfg)
    elif direction == "function-equicontinuity-to-sequence-tail":
        hyp = verdict(family, cfg, conditions=["equicontinuity"])
        concl = verdict(_analyzed_family(family, cfg.coefficient_count, p_out), cfg, conditions=["tail"])
    elif direction == "sequence-translation-to-function-tail":
        hyp = verdict(family, cfg, table=table, conditions=["translation_in_mean"])
        concl = verdict(_synthesized_family(family, p_out), cfg, conditions=["tail"])
    elif direction == "function-tail-and-head-to-sequence-translation":
        if not alpha > 0.5:
            raise ValueError("this direction needs alpha > 1/2")
        head_cfg = DiagnosticsConfig(**dict(cfg.to_dict(), include_head=True))
        hyp = verdict(family, head_cfg, conditions=["tail", "head"])
        image = _analyzed_family(family, cfg.coefficient_count, p_out)
        concl = verdict(image, cfg, table=table, conditions=["translation_in_mean"])
    else:
        params = bessel.HankelParams(alpha) if hankel_params is None else hankel_params
        image = transformed_family(family, params)
        if direction == "hankel-tail-to-equicontinuity":
            hyp = verdict(family, cfg, conditions=["tail"])
            concl = verdict(image, cfg, conditions=["equicontinuity"])
        else:
            hyp = verdict(family, cfg, conditions=["equicontinuity"])
            concl = verdict(image, cfg, conditions=["tail"])
        record["hankel"] = params.describe()
    record["hypothesis"] = hyp.data
    record["conclusion"] = concl.data
    return record


def compact_operator_demo(u, v, family, params, cfg=None, grid_points=4097):
    """Diagnostics of the image family {u . H(v f)} next to those of the input family."""
    if family.setting != BESSEL_FN:
        raise ValueError("compact_operator_demo needs a Bessel-setting family")
    cfg = DiagnosticsConfig() if cfg is None else cfg
    upper = min(params.y_max, u.decay_radius) if u.support is None else min(params.y_max, u.support[1])
    y = np.linspace(0.0, upper, grid_points)
    uy = u(y)
    members, flags = [], []
    with _collect_warnings(flags):
        for f in family.members:
            vals = uy * bessel.hankel(v * f, params, y) if np.any(uy) else np.zeros_like(y)
            g = _trimmed_sample(y, vals, "image")
            members.append(GridFunction(g.func, g.decay_radius, {"family": "operator_image", "of": f.spec},
                                        g.support))
    image = FamilySpec(tuple(members), BESSEL_FN, family.alpha, family.p)
    before = verdict(family, cfg, conditions=["tail"])
    after = verdict(image, cfg)
    return {"schema": SCHEMA, "kind": "compact_operator_demo", "u": u.spec, "v": v.spec,
            "hankel": params.describe(), "transform_warnings": flags, "input": before.data,
            "image": after.data}
