import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy import integrate

from wavechaos import DivergenceError, InvalidParameter, spectral as sp
from wavechaos.chaosnorm import laplace as lp
from wavechaos.chaosnorm.first import ChaosKernelSpec
from wavechaos.spectral import NoiseModel

import oracles

finite = st.floats(1e-3, 1e3)


@given(st.floats(-1e3, 1e3), finite, finite)
def test_phi_swap_symmetry(lam, xi, p):
    ref = lp.phi_p(lam, xi, p)
    assert abs(lp.phi_p_swapped(lam, xi, p) - ref) <= 1e-12 * ref


@given(st.floats(-1e3, 1e3), finite, finite)
def test_phi_symmetrized_and_lower(lam, xi, p):
    ref = lp.phi_p(lam, xi, p)
    assert abs(lp.phi_p_symmetrized(lam, xi, p) - ref) <= 1e-12 * ref
    assert lp.phi_p_lower(lam, xi, p) <= ref * (1 + 1e-12)


def test_phi_is_modulus_of_complex_square():
    rng = np.random.default_rng(3)
    lam, xi, p = rng.normal(size=(3, 100))
    direct = np.abs((p - 1j * lam) ** 2 + xi ** 2) ** 2
    np.testing.assert_allclose(lp.phi_p(lam, xi, p), direct, rtol=1e-12)


def test_phi_identity_check_report():
    rep = lp.phi_identity_check(draws=20_000, seed=1)
    assert rep and rep.to_dict()["holds"]
    assert rep.max_swap_error <= 1e-12


@given(st.floats(0.0, 50.0), st.integers(1, 64), st.floats(0.05, 0.95))
@settings(max_examples=60, deadline=None)
def test_lambda_integral_partial_fractions(k, n, a0):
    ref = oracles.lambda_integral(k, n, a0)
    got, err = lp.lambda_integral(k, n, a0)
    assert abs(got - ref) <= 1e-9 * ref
    assert err <= 1e-8 * ref


def test_l_alpha0_zero_small_cases(pm_one):
    assert math.isclose(lp.l_alpha0_n(NoiseModel(pm_one, 0.0), 1).value, 0.5, rel_tol=1e-14)
    wn = NoiseModel(sp.to_spectral(sp.white_noise(1)), 0.0)
    # int_R (1 + x^2)^-2 dx = pi / 2
    assert math.isclose(lp.l_alpha0_n(wn, 1).value, math.pi / 2, rel_tol=1e-9)


def test_l_atomic_is_oracle_sum(pm_pi):
    m = NoiseModel(pm_pi, 0.4)
    for n in (1, 3):
        expected = 2 * oracles.lambda_integral(math.pi, n, 0.4)
        assert math.isclose(lp.l_alpha0_n(m, n).value, expected, rel_tol=1e-9)


def test_l_scaling_for_homogeneous_measure():
    # L_n = n^{alpha + a0 - 4} L_1 exactly when mu is homogeneous of order alpha
    m = NoiseModel(sp.to_spectral(sp.riesz(1.0, 2)), 0.5)
    one = lp.l_alpha0_n(m, 1).value
    for n in (2, 8):
        assert math.isclose(lp.l_alpha0_n(m, n).value, n ** (1.0 + 0.5 - 4) * one, rel_tol=1e-7)


def test_l_divergence_carries_verdict():
    m = NoiseModel(sp.to_spectral(sp.riesz(2.6, 3)), 0.5)
    with pytest.raises(DivergenceError) as info:
        lp.l_alpha0_n(m, 1)
    assert info.value.verdict.status == "divergent"
    with pytest.raises(InvalidParameter):
        lp.l_alpha0_n(NoiseModel(sp.homogeneous(1.0, 1.0, 1), 0.5), 0)


@pytest.mark.parametrize("a0", [0.0, 0.5])
@pytest.mark.parametrize("t", [0.5, 2.0])
def test_laplace_inequality_atomic(pm_one, a0, t):
    rep = lp.laplace_monotonicity_check(ChaosKernelSpec(1, t, NoiseModel(pm_one, a0)), grid_points=5)
    assert rep.status == "holds"
    assert rep.lhs - rep.lhs_error > rep.rhs + rep.rhs_error
    assert not rep.monotone_expected


def test_laplace_lhs_against_direct_quadrature(pm_pi):
    spec = ChaosKernelSpec(1, 1.0, NoiseModel(pm_pi, 0.5))
    rep = lp.laplace_monotonicity_check(spec, grid_points=2)
    norm = lambda s: oracles.first_chaos_atomic([math.pi, math.pi], [1, 1], s, 0.5)  # noqa: E731
    direct = 2 * integrate.quad(lambda s: math.exp(-2 * s) * norm(s), 0, 40, limit=200)[0]
    assert math.isclose(rep.lhs, direct, rel_tol=1e-6)
    assert abs(rep.lhs - direct) <= rep.lhs_error


def test_monotone_for_nonnegative_covariance():
    spec = ChaosKernelSpec(1, 1.0, NoiseModel(sp.to_spectral(sp.riesz(0.5, 1)), 0.5))
    rep = lp.laplace_monotonicity_check(spec, grid_points=5)
    assert rep.status == "holds" and rep.monotone and rep.monotone_expected


def test_laplace_needs_norm_above_order_one(pm_one):
    with pytest.raises(InvalidParameter):
        lp.laplace_monotonicity_check(ChaosKernelSpec(2, 1.0, NoiseModel(pm_one, 0.5)))


def test_inverse_quartic_is_not_fourier_positive():
    f = lp.Family("phi-inverse")
    assert not f.fourier_positive
    for x in (0.5, 2.0, 3.0):
        v = 2 * integrate.quad(lambda lam: f(lam), 0, np.inf, weight="cos", wvar=x)[0]
        assert math.isclose(v, oracles.inverse_quartic_ft(x), rel_tol=1e-8, abs_tol=1e-12)
    assert oracles.inverse_quartic_ft(3.0) < 0


def test_family_validation():
    with pytest.raises(InvalidParameter):
        lp.Family("power", beta=0.3)
    with pytest.raises(InvalidParameter):
        lp.Family("laplace")
    with pytest.raises(InvalidParameter):
        lp.Family("gaussian", scale=0.0)


def test_reverse_convolution_gaussian_pair_closed_form():
    # gaussians of variances a^2, b^2: int f(x - eta) nu(x) dx = sqrt(2 pi) a b / s e^{-eta^2/(2 s^2)}
    f, nu = lp.Family("gaussian", 1.3), lp.Family("gaussian", 0.7)
    rep = lp.reverse_convolution_check(f, nu, [0.0, 0.5, 2.0])
    s = math.hypot(1.3, 0.7)
    for eta, v in zip(rep.shifts, rep.shifted):
        assert math.isclose(v, math.sqrt(2 * math.pi) * 1.3 * 0.7 / s * math.exp(-eta ** 2 / (2 * s * s)),
                            rel_tol=1e-9)
    assert rep


@given(st.integers(0, 2 ** 32 - 1))
@settings(max_examples=10, deadline=None)
def test_reverse_convolution_random_draws(seed):
    for f, nu, shifts in lp.random_family_draws(5, seed=seed):
        assert f.fourier_positive and nu.fourier_positive
        assert lp.reverse_convolution_check(f, nu, shifts)


def test_reverse_convolution_power_measure():
    rep = lp.reverse_convolution_check(lp.Family("phi-inverse"), lp.Family("power", beta=0.5), [0.3, 1.0, 4.0])
    assert rep
