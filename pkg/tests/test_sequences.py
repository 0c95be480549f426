import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfline import DomainError, special
from halfline.sequences import (ALPHA_MIN, NORMALIZATION, bridge_check, build_linearization_table, cached_table,
                                convolve_seq, finite_sum, geometric_tail, linearization_coeff, quadrature_coeff,
                                read_table_csv, translate_seq, translation_matrix, write_table_csv)
from halfline.spaces import LAGUERRE_SEQ, NormSpec, SeqVec, laguerre_R, norm, pair_seq, zero

mpmath.mp.dps = 40
TABLES = {alpha: build_linearization_table(24, alpha) for alpha in (0.5, 1.0)}


def exact_gamma(n, m, k, alpha):
    """(1/Gamma(alpha+1)) int R_n R_m R_k e^{-2x} x^alpha dx by exact polynomial moments."""
    alpha = mpmath.mpf(alpha)

    def coeffs(j):
        # R_j(x) = sum_i (-1)^i binom(j, i) / (alpha+1)_i x^i
        return [(-1) ** i * mpmath.binomial(j, i) / mpmath.rf(alpha + 1, i) for i in range(j + 1)]

    prod = [mpmath.mpf(0)] * (n + m + k + 1)
    for i, a in enumerate(coeffs(n)):
        for j, b in enumerate(coeffs(m)):
            for l, c in enumerate(coeffs(k)):
                prod[i + j + l] += a * b * c
    total = sum(c * mpmath.gamma(alpha + d + 1) / 2 ** (alpha + d + 1) for d, c in enumerate(prod))
    return total / mpmath.gamma(alpha + 1)


@pytest.fixture(scope="module")
def table():
    return build_linearization_table(24, 0.5)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_face_closed_form(alpha):
    t = build_linearization_table(24, alpha)
    k = np.arange(21)
    want = 2.0 ** (-(alpha + k + 1))
    assert np.max(np.abs(t.values[0, 0, k] - want) / want) <= 1e-10


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.4])
def test_entries_against_exact_values(alpha):
    t = build_linearization_table(16, alpha)
    for idx in [(1, 1, 1), (2, 3, 5), (4, 4, 4), (7, 2, 9), (16, 16, 16), (10, 12, 0), (3, 15, 16)]:
        want = float(exact_gamma(*idx, alpha))
        assert t.values[idx] == pytest.approx(want, rel=1e-10, abs=1e-18)


def test_scalar_coefficient_and_raw():
    alpha = 1.0
    assert linearization_coeff(1, 1, 1, alpha) > 0
    assert linearization_coeff(2, 3, 5, alpha) == pytest.approx(linearization_coeff(5, 2, 3, alpha), rel=1e-14)
    assert linearization_coeff(0, 0, 3, alpha, raw=True) == pytest.approx(
        linearization_coeff(0, 0, 3, alpha) * math.gamma(alpha + 1), rel=1e-14)
    assert quadrature_coeff(2, 3, 4, alpha) == pytest.approx(float(exact_gamma(2, 3, 4, alpha)), rel=1e-12)
    with pytest.raises(DomainError):
        linearization_coeff(0, 0, 0, ALPHA_MIN - 0.01)


def test_finite_sum_is_exact_on_faces():
    k = np.arange(10)
    vals, cond = finite_sum(np.zeros(10, int), k, k, 0.5)
    for kk in (0, 4, 9):
        assert vals[kk] == pytest.approx(float(exact_gamma(0, kk, kk, 0.5)), rel=1e-13)
    assert np.all(cond >= 1.0)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_positivity_and_symmetry(alpha):
    t = build_linearization_table(24, alpha)
    assert t.values.min() >= -1e-12
    for perm in ((1, 0, 2), (0, 2, 1), (2, 1, 0), (1, 2, 0)):
        assert np.max(np.abs(t.values - np.transpose(t.values, perm))) <= 1e-14
    assert t.normalization == NORMALIZATION and t.valid


def test_sum_identity_with_tail():
    t = build_linearization_table(48, 1.0)
    weights = special.binomial_weights(1.0, 48)
    for n in range(9):
        for m in range(9):
            total, tail = t.sum_identity(n, m)
            assert abs(total - 1.0) <= 1e-6 + tail
            partial = np.cumsum(t.values[n, m] * weights)
            assert np.all(np.diff(partial) >= -1e-15)


def test_geometric_series_example():
    t = build_linearization_table(40, 1.0)
    total, _ = t.sum_identity(0, 0)
    k = np.arange(41)
    assert total == pytest.approx(np.sum((k + 1) * 2.0 ** (-(k + 2))), rel=1e-12)
    assert abs(total - 1.0) < 1e-10


def test_continuity_in_alpha():
    a = build_linearization_table(12, 0.0)
    b = build_linearization_table(12, 1e-12)
    assert np.max(np.abs(a.values - b.values)) <= 1e-9


def test_geometric_tail_estimate():
    terms = 0.5 ** np.arange(30)
    assert geometric_tail(terms) == pytest.approx(0.5 ** 29, rel=1e-12)
    assert geometric_tail(np.ones(20)) == math.inf


def test_csv_round_trip_and_cache(tmp_path):
    t = build_linearization_table(6, 0.5)
    path = tmp_path / "g.csv"
    write_table_csv(t, path)
    back = read_table_csv(path)
    assert back.alpha == 0.5 and back.K == 6
    assert np.array_equal(back.values, t.values)
    cached = cached_table(6, 0.5, tmp_path / "cache")
    again = cached_table(6, 0.5, tmp_path / "cache")
    assert np.array_equal(cached.values, again.values)


def test_csv_rejects_wrong_normalization(tmp_path):
    path = tmp_path / "g.csv"
    path.write_text("# alpha=0.5\n# K=0\n# normalization=raw\nn,m,k,value\n0,0,0,0.3\n")
    with pytest.raises(ValueError):
        read_table_csv(path)


def test_translate_examples(table):
    e0 = SeqVec.unit(0, 0.5)
    for k in (0, 3, 7):
        assert np.allclose(translate_seq(e0, k, table).values, table.values[:, 0, k])
    a = SeqVec(np.random.default_rng(1).normal(size=10), 0.5)
    rows = translation_matrix(a, table)
    for k in (0, 5, 9):
        assert np.allclose(rows[k], translate_seq(a, k, table).values, atol=1e-15)
    with pytest.raises(ValueError):
        translate_seq(a, 25, table)
    with pytest.raises(ValueError):
        translate_seq(SeqVec(np.ones(30), 0.5), 0, table)
    with pytest.raises(ValueError):
        translate_seq(SeqVec(np.ones(3), 1.0), 0, table)


def test_translation_symmetry(table):
    # with a = e_j: T_k(e_j)(n) = w(j) gamma(n, j, k), symmetric in (n, k)
    a = SeqVec.unit(4, 0.5)
    rows = translation_matrix(a, table)
    assert np.max(np.abs(rows - rows.T)) <= 1e-15


def test_convolution_examples(table):
    e0 = SeqVec.unit(0, 0.5)
    k = np.arange(table.K + 1)
    assert np.allclose(convolve_seq(e0, e0, table).values, 2.0 ** (-(0.5 + k + 1)), rtol=1e-10)
    rng = np.random.default_rng(2)
    a, b = SeqVec(rng.normal(size=8), 0.5), SeqVec(rng.normal(size=11), 0.5)
    ab, ba = convolve_seq(a, b, table).values, convolve_seq(b, a, table).values
    assert np.allclose(ab, ba, rtol=1e-12, atol=1e-15)
    for kk in (0, 6, 20):
        assert ab[kk] == pytest.approx(pair_seq(b, translate_seq(a, kk, table)), abs=1e-14)


@given(st.integers(1, 12), st.integers(0, 24), st.sampled_from([1.0, 2.0, math.inf]), st.integers(0, 2 ** 31))
@settings(max_examples=60, deadline=None)
def test_translation_norm_bound(length, k, p, seed):
    table = TABLES[0.5]
    a = SeqVec(np.random.default_rng(seed).normal(size=length), 0.5)
    spec = NormSpec(p, 0.5, LAGUERRE_SEQ)
    assert norm(translate_seq(a, k, table), spec) <= norm(a, spec) * (1 + 1e-9)


@given(st.sampled_from([(1.0, 1.0, 1.0), (1.0, 2.0, 2.0), (2.0, 2.0, math.inf)]), st.integers(0, 2 ** 31))
@settings(max_examples=60, deadline=None)
def test_young_inequality(triple, seed):
    table = TABLES[1.0]
    p, q, r = triple
    rng = np.random.default_rng(seed)
    a = SeqVec(rng.normal(size=rng.integers(1, 13)), 1.0)
    b = SeqVec(rng.normal(size=rng.integers(1, 13)), 1.0)
    lhs = norm(convolve_seq(a, b, table), NormSpec(r, 1.0, LAGUERRE_SEQ))
    rhs = norm(a, NormSpec(p, 1.0, LAGUERRE_SEQ)) * norm(b, NormSpec(q, 1.0, LAGUERRE_SEQ))
    assert lhs <= rhs * (1 + 1e-9)


def test_bridge_check_reports_both_conventions(table):
    rec = bridge_check(laguerre_R(0, 0.5), 2, table, k_max=6)
    assert set(rec) >= {"exp(-2x)", "exp(-3x/2)", "consistent_convention"}
    assert rec["exp(-2x)"]["max_residual"] < 1e-12
    assert rec["consistent_convention"] == "exp(-2x)"
    rec = bridge_check(laguerre_R(1, 0.5), 3, table, k_max=6)
    assert rec["exp(-2x)"]["max_residual"] < 1e-12
    rec = bridge_check(zero(), 1, table, k_max=4)
    assert rec["exp(-2x)"]["max_residual"] == 0.0 and rec["exp(-3x/2)"]["max_residual"] == 0.0
    with pytest.raises(ValueError):
        bridge_check(zero(), 30, table)
