"""Small worked examples with exactly known answers."""

import math

from hypothesis import given, strategies as st
import numpy as np
import pytest

from wavechaos import condition as cd, spectral as sp, wavekernel as wk
from wavechaos.conventions import riesz_constant
from wavechaos.spectral import NoiseModel
from wavechaos.wavekernel import FunctionSpec, InitialData


def test_riesz_space_density():
    mu = sp.to_spectral(sp.riesz(1.0, 3))
    assert mu.homogeneity_order == 1.0
    xi = np.array([[0.0, 3.0, 4.0]])
    assert math.isclose(mu.density(xi)[0], riesz_constant(1.0, 3) / 25.0, rel_tol=1e-14)


def test_white_noise_plane_density():
    mu = sp.to_spectral(sp.white_noise(2))
    assert mu.homogeneity_order == 2.0
    assert np.all(mu.density(np.array([[0.1, 5.0], [-3.0, 2.0]])) == 1.0)


def test_homogeneous_ball_mass():
    assert sp.radial_mass(sp.homogeneous(1.0, 1.0, 2), 2.0) == 2.0


def test_wave_kernel_on_the_line():
    assert wk.g_direct(1, 2.0, 1.0) == 0.5


@pytest.mark.parametrize("d", [1, 2, 3])
def test_unit_velocity_data(d):
    data = InitialData(FunctionSpec.constant(0.0), FunctionSpec.constant(1.0), d)
    v, _ = wk.w_eval(data, d, 3.0, np.full(d, 0.4))
    assert math.isclose(v, 3.0, rel_tol=1e-10)


@given(st.floats(0.0, 0.99))
def test_white_noise_plane_always_finite(a0):
    v = cd.condition_integral(NoiseModel(sp.to_spectral(sp.white_noise(2)), a0))
    assert v.status == "finite"


def test_white_noise_space_divergent():
    assert cd.condition_integral(NoiseModel(sp.to_spectral(sp.white_noise(3)), 0.0)).status == "divergent"


def test_boundary_point():
    assert cd.homogeneous_decision(0.6, 2.5) is False
    assert cd.homogeneous_decision(0.6, 2.3) is True


def test_fractional_sheet_recast():
    # alpha0 = 2 - 2 H0, alpha = sum(2 - 2 H_j): well posed iff H0 + sum H_j > d - 1/2
    h0, hs = 0.7, (0.6, 0.6, 0.6)
    mu = sp.to_spectral(sp.fractional_sheet(hs))
    a0 = 2 - 2 * h0
    v = cd.condition_integral(NoiseModel(mu, a0))
    assert (v.status == "finite") == (h0 + sum(hs) > 3 - 0.5)
    assert v.status == "divergent"
    h0 = 0.8
    v = cd.condition_integral(NoiseModel(mu, 2 - 2 * h0))
    assert v.status == "finite" and h0 + sum(hs) > 2.5
