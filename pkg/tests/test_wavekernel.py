import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest
from scipy import integrate

from wavechaos import InvalidParameter, SingularityError, UnsupportedEvaluation
from wavechaos import wavekernel as wk
from wavechaos.wavekernel import FunctionSpec, InitialData


@given(st.floats(0.0, 10.0), st.floats(0.0, 50.0))
def test_ghat_is_sine_ratio(t, r):
    # t sinc(tr) stays exact where sin(tr) / r underflows
    expected = t * math.sin(t * r) / (t * r) if t * r > 1e-8 else t * (1 - (t * r) ** 2 / 6)
    assert math.isclose(wk.ghat(1, t, r), expected, rel_tol=1e-12, abs_tol=1e-14)


def test_ghat_uses_norm_in_higher_dimension():
    assert math.isclose(wk.ghat(3, 2.0, [3.0, 0.0, 4.0]), math.sin(10.0) / 5.0)
    with pytest.raises(InvalidParameter):
        wk.ghat(2, -1.0, [1.0, 1.0])


@pytest.mark.parametrize("d", [1, 2, 3])
def test_total_mass_is_t(d):
    # ghat at xi = 0 equals t, so int G_t = t in every dimension
    assert math.isclose(wk.g_total_mass(d, 1.7), 1.7, rel_tol=1e-9)


def test_g_direct_values():
    assert wk.g_direct(1, 1.0, 0.5) == 0.5
    assert wk.g_direct(1, 1.0, 1.5) == 0.0
    assert math.isclose(wk.g_direct(2, 1.0, [0.0, 0.0]), 1.0 / (2 * math.pi))
    with pytest.raises(SingularityError):
        wk.g_direct(2, 1.0, [1.0, 0.0])
    s = wk.g_direct(3, 2.0, None)
    assert math.isclose(s.total_mass, 2.0)


def test_sphere_integration_of_a_polynomial():
    s = wk.g_direct(3, 1.5, None)
    v, _ = s.integrate(lambda p: p[:, 0] ** 2)
    # mean of x^2 over the sphere of radius R is R^2 / 3
    assert math.isclose(v, s.total_mass * 1.5 ** 2 / 3, rel_tol=1e-9)


def _data(u0, u1, d):
    return InitialData(u0, u1, d)


def test_w_constant_data_in_every_dimension():
    # u0 = a, u1 = b gives w = a + b t
    for d in (1, 2, 3):
        data = _data(FunctionSpec.constant(2.0), FunctionSpec.constant(3.0), d)
        v, _ = wk.w_eval(data, d, 1.5, np.zeros(d))
        assert math.isclose(v, 2.0 + 4.5, rel_tol=1e-8)


def test_w_dalembert_1d():
    g = FunctionSpec.gaussian(1.0, [0.0], 0.7)
    data = _data(g, FunctionSpec.box([-1.0], [1.0], 2.0), 1)
    t, x = 0.8, 0.3
    u0 = lambda y: math.exp(-y * y / (2 * 0.49))  # noqa: E731
    # d'Alembert: (u0(x+t) + u0(x-t))/2 + (1/2) int_{x-t}^{x+t} u1
    lo, hi = max(x - t, -1.0), min(x + t, 1.0)
    expected = 0.5 * (u0(x + t) + u0(x - t)) + 0.5 * 2.0 * (hi - lo)
    v, err = wk.w_eval(data, 1, t, [x])
    assert math.isclose(v, expected, rel_tol=1e-9)
    assert abs(v) <= data.bound(t)


def test_w_fourier_table_is_exact_mode():
    # u0 = cos(k.x) evolves as cos(k t) cos(k.x); u1 = cos(k.x) adds sin(k t)/k cos(k.x)
    k = np.array([1.0, 2.0, 2.0])
    ft = FunctionSpec.fourier_table([k], [1.0])
    data = _data(ft, ft, 3)
    x = np.array([0.1, -0.2, 0.3])
    t = 0.9
    expected = (math.cos(3 * t) + math.sin(3 * t) / 3) * math.cos(k @ x)
    v, _ = wk.w_eval(data, 3, t, x)
    assert math.isclose(v, expected, rel_tol=1e-7, abs_tol=1e-9)


def test_w_eval_rejects():
    data = _data(FunctionSpec.constant(1.0), FunctionSpec.constant(1.0), 2)
    with pytest.raises(InvalidParameter):
        wk.w_eval(data, 3, 1.0, [0, 0, 0])
    with pytest.raises(InvalidParameter):
        wk.w_eval(data, 2, 1.0, [0, 0, 0])
    with pytest.raises(UnsupportedEvaluation):
        _data(FunctionSpec.box([0, 0], [1, 1]), FunctionSpec.constant(0.0), 2)


def test_initial_data_round_trip():
    data = _data(FunctionSpec.gaussian(2.0, [0.0, 1.0], 0.5), FunctionSpec.constant(1.0), 2)
    back = InitialData.from_dict(data.to_dict())
    assert back == data
    assert data.bound(2.0) == 2.0 + 2.0


@given(st.floats(0.05, 5.0), st.just(0.0) | st.floats(0.1, 20.0))
@settings(max_examples=40)
def test_sine_laplace(beta, eta):
    if eta > 0:
        v = integrate.quad(lambda r: math.exp(-beta * r) / eta, 0, np.inf, weight="sin", wvar=eta)[0]
    else:
        v = 1.0 / beta ** 2
    got = wk.sine_laplace(beta, eta)
    assert abs(got - v) <= 1e-7 * abs(v)


@given(st.floats(0.0, 4.0), st.floats(-20.0, 20.0), st.floats(0.0, 20.0))
@settings(max_examples=60)
def test_q_closed_form(t, lam, xi):
    v = integrate.quad(lambda s: math.cos(lam * s) * math.sin(xi * s), 0, t, limit=400,
                       epsabs=1e-13)[0]
    assert math.isclose(wk.q_closed_form(t, lam, xi), v, rel_tol=1e-8, abs_tol=1e-11)


@given(st.floats(0.01, 4.0), st.floats(-30.0, 30.0), st.floats(0.0, 20.0))
@settings(max_examples=60)
def test_time_fourier_sine(t, lam, k):
    f = (lambda s: math.sin(k * s) / k) if k > 1e-6 else (lambda s: s - k * k * s ** 3 / 6)
    re = integrate.quad(lambda s: math.cos(lam * s) * f(s), 0, t, limit=400, epsabs=1e-13)[0]
    im = integrate.quad(lambda s: math.sin(lam * s) * f(s), 0, t, limit=400, epsabs=1e-13)[0]
    got = complex(wk.time_fourier_sine(t, np.array([lam]), k)[0])
    assert abs(got - complex(re, im)) <= 1e-8 * max(1.0, abs(complex(re, im)))
