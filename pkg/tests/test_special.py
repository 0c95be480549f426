import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfline import DomainError
from halfline.special import (EnvelopeParams, binomial_weight, binomial_weights, calibrate_envelope,
                              envelope_check, laguerre, normalized_bessel, normalized_bessel_derivative,
                              normalized_laguerre, normalized_laguerre_table)

mpmath.mp.dps = 40


def bessel_oracle(alpha, z):
    return float(mpmath.hyp0f1(alpha + 1, -mpmath.mpf(z) ** 2 / 4))


@pytest.mark.parametrize("alpha", [-0.5, -0.3, 0.0, 0.5, 1.0, 1.5, 2.0, 3.7])
def test_normalized_bessel_matches_hypergeometric_oracle(alpha):
    z = np.concatenate([np.linspace(0, 6.5, 40), np.linspace(6.5, 60, 60)])
    got = normalized_bessel(alpha, z)
    want = np.array([bessel_oracle(alpha, v) for v in z])
    # error relative to the asymptotic amplitude Gamma(alpha+1) (2/z)^alpha sqrt(2/(pi z))
    zz = np.maximum(z, 1.0)
    scale = np.minimum(1.0, math.gamma(alpha + 1) * (2 / zz) ** alpha * np.sqrt(2 / (np.pi * zz)))
    assert np.max(np.abs(got - want) / scale) < 1e-12


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0])
def test_bessel_at_zero_is_exactly_one(alpha):
    assert normalized_bessel(alpha, 0.0) == 1.0


def test_half_integer_closed_forms():
    z = np.linspace(0.01, 30, 300)
    assert np.allclose(normalized_bessel(0.5, z), np.sin(z) / z, rtol=0, atol=1e-15)
    assert np.allclose(normalized_bessel(-0.5, z), np.cos(z), rtol=0, atol=1e-15)


@given(st.floats(-0.5, 5.0), st.floats(0.0, 80.0))
@settings(max_examples=200, deadline=None)
def test_bessel_bounded_by_one_and_even(alpha, z):
    v = float(normalized_bessel(alpha, z))
    assert abs(v) <= 1.0 + 1e-12
    assert v == pytest.approx(float(normalized_bessel(alpha, -z)), abs=1e-15)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0, 2.0])
def test_derivative_identity_against_mpmath(alpha):
    z = np.linspace(0.1, 20, 50)
    want = np.array([float(mpmath.diff(lambda s: mpmath.hyp0f1(alpha + 1, -s ** 2 / 4), v)) for v in z])
    got = normalized_bessel_derivative(alpha, z)
    assert np.max(np.abs(got - want)) < 1e-13


def test_alpha_out_of_domain():
    with pytest.raises(DomainError):
        normalized_bessel(-1.0, 1.0)
    with pytest.raises(ValueError):
        normalized_bessel(0.5, np.inf)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.7, 2.0])
def test_laguerre_matches_mpmath(alpha):
    x = np.linspace(0, 40, 17)
    for n in (0, 1, 5, 12, 30):
        want = np.array([float(mpmath.laguerre(n, alpha, v)) for v in x])
        got = laguerre(n, alpha, x)
        assert np.allclose(got, want, rtol=1e-11, atol=1e-11 * np.max(np.abs(want)))


def test_normalized_laguerre_at_zero_and_weights():
    for alpha in (-0.5, 0.0, 1.3):
        assert np.allclose(normalized_laguerre_table(25, alpha, 0.0), 1.0, rtol=0, atol=1e-14)
        w = binomial_weights(alpha, 20)
        want = [float(mpmath.binomial(k + alpha, k)) for k in range(21)]
        assert np.allclose(w, want, rtol=1e-14)
        assert binomial_weight(alpha, 7) == pytest.approx(want[7], rel=1e-14)


def test_normalized_laguerre_small_cases():
    x = np.linspace(0, 5, 11)
    assert np.allclose(normalized_laguerre(1, 1.0, x), 1 - x / 2)
    assert np.allclose(normalized_laguerre(2, 0.0, x), 1 - 2 * x + x ** 2 / 2)
    with pytest.raises(ValueError):
        normalized_laguerre(1.5, 0.0, x)
    with pytest.raises(ValueError):
        normalized_laguerre(2, 0.0, -1.0)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
def test_envelope_holds_after_calibration(alpha):
    constant, per_branch = calibrate_envelope(alpha, n_max=24, grid_points=800)
    assert np.all(per_branch > 0) and math.isfinite(constant)
    rng = np.random.default_rng(1)
    for n in (1, 7, 20):
        params = EnvelopeParams.for_degree(n, alpha, constant)
        x = rng.uniform(0, 3 * params.nu, 500)
        assert np.all(envelope_check(n, alpha, x, params))


def test_envelope_requires_calibration():
    with pytest.raises(RuntimeError):
        envelope_check(2, 0.0, np.ones(3), EnvelopeParams.for_degree(2, 0.0))
