import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfline import DomainError, NumericalError, TailWarning
from halfline.spaces import (BESSEL_FN, LAGUERRE_FN, LAGUERRE_SEQ, NormSpec, SeqVec, bessel_j, bump, constant,
                             conjugate_exponent, dilated, halfline_rule, exp_decay, from_callable, gaussian, indicator, laguerre_R,
                             norm, pair_seq, read_sampled_csv, sampled, scaled, shifted, write_sampled_csv, zero)


def test_conjugate_exponents():
    assert conjugate_exponent(1) == math.inf
    assert conjugate_exponent(math.inf) == 1.0
    assert conjugate_exponent(2) == 2.0
    assert conjugate_exponent(4) == pytest.approx(4 / 3)


def test_normspec_validation():
    with pytest.raises(ValueError):
        NormSpec(0.5, 0.0, LAGUERRE_FN)
    with pytest.raises(ValueError):
        NormSpec(2, 0.0, "nowhere")


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.0, 2.5])
@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_laguerre_norm_of_constant(alpha, p):
    # int (e^{-x/2})^p x^alpha dx = Gamma(alpha + 1) (p/2)^{-alpha-1}
    want = (math.gamma(alpha + 1) * (p / 2) ** (-alpha - 1)) ** (1 / p)
    assert norm(constant(1.0), NormSpec(p, alpha, LAGUERRE_FN)) == pytest.approx(want, rel=1e-10)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.0, 2.0])
def test_bessel_norm_of_gaussian(alpha):
    # int exp(-x^2) x^{2 alpha + 1} dx = Gamma(alpha + 1) / 2
    want = math.sqrt(math.gamma(alpha + 1) / 2)
    assert norm(gaussian(1.0), NormSpec(2, alpha, BESSEL_FN)) == pytest.approx(want, rel=1e-12)


def test_bessel_norm_of_bump_against_mpmath():
    f = bump(2.0, 1.0)
    want = mpmath.sqrt(mpmath.quad(lambda x: mpmath.exp(2 - 2 / (1 - (x - 2) ** 2)) * x ** 2, [1, 2, 3]))
    assert norm(f, NormSpec(2, 0.5, BESSEL_FN)) == pytest.approx(float(want), rel=1e-10)


def test_sup_norms():
    assert norm(constant(1.0), NormSpec(math.inf, 0.3, LAGUERRE_FN)) == pytest.approx(1.0)
    assert norm(bump(3.0, 1.0), NormSpec(math.inf, 0.3, BESSEL_FN)) == pytest.approx(1.0, abs=1e-6)


def test_sequence_norm_and_pairing():
    a = SeqVec([1.0, 2.0, -1.0], 1.0)
    w = np.array([1.0, 2.0, 3.0])
    assert norm(a, NormSpec(2, 1.0, LAGUERRE_SEQ)) == pytest.approx(math.sqrt(np.sum(w * a.values ** 2)))
    assert norm(a, NormSpec(math.inf, 1.0, LAGUERRE_SEQ)) == 2.0
    assert pair_seq(a, SeqVec.unit(1, 1.0)) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        pair_seq(a, SeqVec([1.0], 0.0))


def test_tail_warning_for_slow_decay():
    slow = from_callable(lambda x: 1.0 / (1.0 + x), 5.0)
    with pytest.warns(TailWarning):
        norm(slow, NormSpec(2, 0.5, BESSEL_FN))


def test_non_finite_integrand_raises():
    bad = from_callable(lambda x: np.where(x > 1, np.inf, 1.0), 5.0)
    with pytest.raises(NumericalError):
        norm(bad, NormSpec(2, 0.0, LAGUERRE_FN))


def test_bessel_norm_needs_alpha_at_least_minus_half():
    with pytest.raises(DomainError):
        norm(gaussian(), NormSpec(2, -0.7, BESSEL_FN))


def test_family_constructors_and_algebra():
    x = np.linspace(0, 6, 61)
    g = gaussian(2.0)
    assert np.allclose(g(x), np.exp(-x ** 2 / 8))
    assert np.allclose(shifted(g, 1.0)(x), np.where(x >= 1, np.exp(-(x - 1) ** 2 / 8), 0.0))
    assert np.allclose(dilated(g, 2.0)(x), np.exp(-x ** 2 / 2))
    assert np.allclose((g * exp_decay(1.0))(x), np.exp(-x ** 2 / 8 - x))
    assert np.allclose((g - g)(x), 0.0)
    assert np.allclose((-scaled(g, 2))(x), -2 * g(x))
    assert np.allclose(bessel_j(0.5, 2.0)(x[1:]), np.sin(2 * x[1:]) / (2 * x[1:]))
    assert np.allclose(indicator(1, 2)(np.array([0.5, 1.5, 2.5])), [0, 1, 0])
    assert zero()(x).max() == 0.0
    assert (laguerre_R(2, 0.0) + laguerre_R(3, 0.0)).degree == 3
    b = bump(5.0, 1.5)
    assert b.support == (3.5, 6.5) and b(np.array([5.0]))[0] == pytest.approx(1.0)
    assert np.all(b(np.array([3.5, 6.5, 0.0, 10.0])) == 0.0)
    with pytest.raises(ValueError):
        bump(1.0, 0.0)
    with pytest.raises(ValueError):
        gaussian(-1.0)


def test_product_of_disjoint_supports_is_zero():
    assert (indicator(0, 1) * indicator(2, 3))(np.linspace(0, 4, 9)).max() == 0.0


@pytest.mark.parametrize("kind", ["linear", "cubic"])
def test_sampled_interpolants(kind):
    xs = np.linspace(0, 4, 401)
    f = sampled(xs, np.sin(xs), kind=kind)
    x = np.linspace(0, 4, 97)
    tol = 1e-4 if kind == "linear" else 1e-9
    assert np.allclose(f(x), np.sin(x), atol=tol)
    assert f(np.array([4.5]))[0] == 0.0
    assert f.support == (0.0, 4.0)


def test_sampled_cubic_on_uneven_nodes():
    xs = np.sort(np.random.default_rng(3).uniform(0, 3, 300))
    f = sampled(xs, np.cos(xs), kind="cubic")
    x = np.linspace(xs[0], xs[-1], 50)
    assert np.allclose(f(x), np.cos(x), atol=1e-6)


def test_sampled_validation():
    with pytest.raises(ValueError):
        sampled([0, 1], [1.0])
    with pytest.raises(ValueError):
        sampled([1, 0], [1.0, 2.0])
    with pytest.raises(ValueError):
        sampled([0, 1], [1.0, np.nan])
    with pytest.raises(ValueError):
        sampled([0, 1], [1.0, 2.0], kind="quintic")


def test_csv_round_trip(tmp_path):
    xs = np.linspace(0, 2, 11)
    path = tmp_path / "f.csv"
    write_sampled_csv(path, xs, xs ** 2)
    f = read_sampled_csv(path)
    assert np.allclose(f(xs), xs ** 2)


def test_csv_errors(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,value\n0,1\n1,abc\n")
    with pytest.raises(ValueError):
        read_sampled_csv(path)
    path.write_text("0,1\n")
    with pytest.raises(ValueError):
        read_sampled_csv(path)


@given(st.floats(0.2, 3.0), st.floats(-0.4, 2.0))
@settings(max_examples=25, deadline=None)
def test_scaling_is_homogeneous(sigma, alpha):
    spec = NormSpec(2, alpha, BESSEL_FN)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TailWarning)
        base = norm(gaussian(sigma), spec)
        assert norm(scaled(gaussian(sigma), -3.0), spec) == pytest.approx(3 * base, rel=1e-12)
        # dilation: ||f(lam .)|| = lam^{-(alpha+1)} ||f||
        assert norm(dilated(gaussian(sigma), 2.0), spec) == pytest.approx(2 ** (-(alpha + 1)) * base, rel=1e-9)


def test_breakpoints_split_and_grade_panels():
    # |x - c|^{1/2} has an unbounded derivative at c; closed form (2/3)(c^{3/2} + (3 - c)^{3/2})
    c = 1.3
    exact = 2.0 / 3.0 * (c ** 1.5 + (3.0 - c) ** 1.5)
    split = halfline_rule(0.0, 3.0, breakpoints=(c, 7.0))
    plain = halfline_rule(0.0, 3.0)
    assert split.integrate(np.sqrt(np.abs(split.nodes - c))) == pytest.approx(exact, rel=1e-12)
    assert abs(plain.integrate(np.sqrt(np.abs(plain.nodes - c))) - exact) > 1e-8
    assert split.meta["breakpoints"] == [c]
