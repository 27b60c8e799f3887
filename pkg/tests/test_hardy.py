import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from genhilbert.errors import ParameterError
from genhilbert.hardy import (besov_norm, blaschke_factorize, block, bq_norm, circle_samples, coeffs_from_json,
                              coeffs_to_json, degree, dyadic_block_besov, evaluate, hp_norm, integral_means,
                              majorant, radial_profile)
from genhilbert.hardy import test_fb as fb_coeffs
from genhilbert.hardy import test_ga as ga_coeffs
from genhilbert.measure import lebesgue, moments_up_to


def test_monomials_have_unit_norm():
    for k in (0, 1, 7):
        f = np.eye(1, k + 1, k)[0]
        for p in (0.5, 1.0, 2.0, 4.0):
            assert hp_norm(f, p) == pytest.approx(1.0, abs=1e-14)


def test_circle_samples_match_direct_evaluation():
    f = np.array([1, 2 - 1j, 0.5j, 3])
    K = 32
    z = 0.7 * np.exp(2j * np.pi * np.arange(K) / K)
    np.testing.assert_allclose(circle_samples(f, 0.7, K), evaluate(f, z), atol=1e-13)


def test_circle_samples_fold_long_polynomials():
    f = np.arange(1, 41, dtype=float)
    z = np.exp(2j * np.pi * np.arange(16) / 16)
    np.testing.assert_allclose(circle_samples(f, 1.0, 16), evaluate(f, z), atol=1e-10)


def test_h1_norm_of_one_plus_z():
    # mean of |1 + e^{i theta}| = 4 / pi
    assert hp_norm([1, 1], 1.0, K=4096) == pytest.approx(4 / math.pi, rel=1e-6)


def test_sample_count_validation():
    with pytest.raises(ParameterError):
        hp_norm(np.ones(10), 2.0, K=48)
    with pytest.raises(ParameterError):
        integral_means([1, 1], 1.5, 2.0)


def test_radial_profile_is_nondecreasing():
    prof = radial_profile([1, -2, 0.5j, 3], 1.5)
    assert np.all(np.diff(prof.means) >= -1e-13)
    assert prof.radii[0] == 0.0 and prof.means[0] == pytest.approx(1.0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=40))
def test_h2_norm_is_coefficient_l2_norm(coeffs):
    a = np.array(coeffs, dtype=np.complex128)
    assert hp_norm(a, 2.0) == pytest.approx(float(np.linalg.norm(a)), rel=1e-12, abs=1e-12)


def test_besov_norm_of_z_is_pi():
    assert besov_norm([0, 1], 2.0) == pytest.approx(math.pi, rel=1e-12)


def test_besov_norm_p2_is_weighted_coefficient_sum():
    # for p = 2: |a_0|^2 + pi * sum k |a_k|^2
    a = np.array([0.5, 1.0, -2.0, 0.25j])
    k = np.arange(4)
    ref = 0.25 + math.pi * np.sum(k[1:] * np.abs(a[1:]) ** 2)
    assert besov_norm(a, 2.0) == pytest.approx(ref, rel=1e-10)


def test_bq_norm_of_constant():
    # int_0^1 (1-r)^(1/q-2) dr = 1/(1/q - 1)
    for q in (0.25, 0.5, 0.8):
        assert bq_norm([1.0], q) == pytest.approx(1.0 / (1.0 / q - 1.0), rel=1e-9)


def test_block_norms():
    for n in range(2, 9):
        b = block(n)
        assert b.shape[0] == 2 ** (n + 1) - 1 and degree(b) == 2 ** (n + 1) - 2
        assert hp_norm(b, 2.0) ** 2 == pytest.approx(2.0 ** n, rel=1e-12)


def test_dyadic_block_besov_needs_moments():
    seq = moments_up_to(lebesgue(), 64)
    assert dyadic_block_besov(seq, 2.0, 4) > 0
    assert dyadic_block_besov(seq, 2.0, 5) > 0
    with pytest.raises(ParameterError):
        dyadic_block_besov(seq, 2.0, 6)


@pytest.mark.parametrize("b", [0.0, 0.5, 0.9, 0.99])
@pytest.mark.parametrize("p", [0.5, 1.0, 2.0])
def test_fb_has_unit_norm(b, p):
    assert hp_norm(fb_coeffs(b, p), p) == pytest.approx(1.0, abs=1e-6)


def test_fb_coefficients_against_binomial_series():
    b, p = 0.6, 1.0
    c = fb_coeffs(b, p, D=5)
    from scipy.special import binom
    k = np.arange(6)
    ref = (1 - b * b) * binom(k + 1, k) * b ** k
    np.testing.assert_allclose(c.real, ref, rtol=1e-14)


def test_ga_coefficients_exact():
    g = ga_coeffs(0.5, 10)
    assert g[0] == math.log(2.0)
    k = np.arange(1, 11)
    assert np.all(g[1:].real == 0.5 ** k / k)
    np.testing.assert_allclose(evaluate(ga_coeffs(0.5), 0.3), math.log(2 / (1 - 0.15)), rtol=1e-15)


def test_coeff_json_round_trip():
    a = np.array([1 + 2j, -0.5, 3j])
    np.testing.assert_array_equal(coeffs_from_json(coeffs_to_json(a)), a)
    np.testing.assert_array_equal(coeffs_from_json([1, 2.5]), [1, 2.5])
    with pytest.raises(ParameterError):
        coeffs_from_json([[1, 2, 3]])


def test_blaschke_factorization_reconstructs():
    # zeros at 0 (double), 0.5, -0.3i, 2, and on the circle at -1
    roots = [0.5, -0.3j, 2.0, -1.0]
    core = np.poly(roots)[::-1] * (1 - 1j)
    f = np.concatenate(([0, 0], core))
    fact = blaschke_factorize(f)
    assert fact.origin_order == 2
    assert sorted(np.round(fact.disc_zeros, 12), key=abs) == sorted([0.5, -0.3j], key=abs)
    assert fact.boundary_zeros.size == 1
    np.testing.assert_allclose(fact.reconstruct(), f, atol=1e-12)
    z = 0.4 * np.exp(1j * np.linspace(0, 6, 7))
    np.testing.assert_allclose(fact.blaschke(z) * fact.zero_free_part(z), evaluate(f, z), atol=1e-12)
    np.testing.assert_allclose(np.exp(fact.log_zero_free_part(z)), fact.zero_free_part(z), rtol=1e-12)
    assert np.allclose(np.abs(fact.blaschke(np.exp(1j * np.linspace(0, 6, 9)))), 1.0)


def test_blaschke_rejects_zero_and_high_degree():
    with pytest.raises(ParameterError):
        blaschke_factorize([0, 0])
    with pytest.raises(ParameterError):
        blaschke_factorize(np.ones(80))


def _check_majorant(f, p, norm_tol):
    F = majorant(f, p)
    xs = np.linspace(-1, 1, 64)
    zz = (xs[:, None] + 1j * xs[None, :]).ravel()
    zz = zz[np.abs(zz) < 1]
    assert np.min(np.abs(F(zz))) > 0
    r = np.linspace(0, 1, 258)[1:-1]
    Fr = F(r)
    assert np.max(np.abs(Fr.imag) / np.abs(Fr)) < 1e-9
    assert np.all(np.abs(evaluate(f, r)) <= Fr.real * (1 + 1e-9))
    assert F.hp_norm(p) == pytest.approx(hp_norm(f, p), rel=norm_tol)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 16), st.integers(0, 2 ** 32 - 1))
def test_majorant_p2_properties(d, seed):
    rng = np.random.default_rng(seed)
    _check_majorant(rng.standard_normal(d + 1) + 1j * rng.standard_normal(d + 1), 2.0, 1e-8)


def test_majorant_with_zeros_at_origin_and_inside():
    _check_majorant(np.array([0, 0, 1, -3, 0.5]), 2.0, 1e-8)


@pytest.mark.parametrize("p", [1.0, 4.0])
def test_majorant_other_p_zero_free_polynomial(p):
    # zero-free in the closed disc, so the series of g^(p/2) converges fast
    f = np.poly([2.5, -3.0j, 4.0])[::-1]
    _check_majorant(f, p, 1e-6)


def test_majorant_rejects_zero():
    with pytest.raises(ParameterError):
        majorant([0.0])
