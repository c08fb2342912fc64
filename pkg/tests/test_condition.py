import math

from hypothesis import given, settings, strategies as st
import numpy as np
import pytest

from wavechaos import InvalidParameter, condition as cd, spectral as sp
from wavechaos.spectral import NoiseModel

import oracles


def test_white_noise_line_values():
    m = NoiseModel(sp.to_spectral(sp.white_noise(1)), 0.0)
    v = cd.condition_integral(m)
    assert v.status == "finite" and abs(v.value - 2.0) < 1e-6
    d = cd.dalang_integral(m)
    assert d.status == "finite" and abs(d.value - math.pi) < 1e-6
    # alpha0 = 0 also reports the int (1+|xi|^2)^-2 companion
    assert math.isclose(v.extras["first_chaos_integral"].value, math.pi / 2, rel_tol=1e-9)


@given(st.floats(0.0, 0.95))
@settings(max_examples=20, deadline=None)
def test_white_noise_line_any_alpha0(a0):
    v = cd.condition_integral(NoiseModel(sp.to_spectral(sp.white_noise(1)), a0))
    assert math.isclose(v.value, oracles.profile_integral_1d(3 - a0), rel_tol=1e-8)


def test_white_noise_plane_and_space():
    assert cd.condition_integral(NoiseModel(sp.to_spectral(sp.white_noise(2)), 0.5)).status == "finite"
    assert cd.condition_integral(NoiseModel(sp.to_spectral(sp.white_noise(3)), 0.0)).status == "divergent"


@given(st.floats(0.0, 0.95), st.floats(0.05, 3.0), st.sampled_from([1, 2, 3]))
@settings(max_examples=60, deadline=None)
def test_homogeneous_decision_and_value(a0, alpha, d):
    if alpha > d:
        with pytest.raises(InvalidParameter):
            cd.homogeneous_decision(a0, alpha, d)
        return
    finite = cd.homogeneous_decision(a0, alpha, d)
    assert finite == (a0 + alpha < 3)
    v = cd.condition_integral(NoiseModel(sp.homogeneous(alpha, 1.5, d), a0))
    assert v.status == ("finite" if finite else "divergent")
    if finite:
        expected = oracles.homogeneous_profile_integral(alpha, 1.5, 3 - a0)
        assert math.isclose(v.value, expected, rel_tol=1e-6)
        assert math.isclose(cd.homogeneous_closed_form(alpha, 1.5, 3 - a0), expected, rel_tol=1e-10)


@pytest.mark.parametrize("a0,alpha,status", [(0.5, 1.5, "finite"), (0.5, 2.6, "divergent"),
                                              (0.0, 3.0, "divergent"), (0.9, 1.0, "finite")])
def test_shell_classifier_agrees_away_from_boundary(a0, alpha, status):
    m = NoiseModel(sp.homogeneous(alpha, 1.0, 3), a0)
    v = cd.condition_integral(m, method="shells")
    assert v.status == status
    assert v.method == "dyadic-shells"
    if status == "finite":
        exact = cd.condition_integral(m)
        assert abs(v.value - exact.value) <= v.error + exact.error + 1e-6 * exact.value
        assert v.fitted_tail_exponent == pytest.approx(a0 + alpha - 3, abs=1e-3)


def test_shell_classifier_reports_inconclusive_near_boundary():
    v = cd.condition_integral(NoiseModel(sp.homogeneous(2.45, 1.0, 3), 0.5), method="shells")
    assert v.status in ("inconclusive", "finite")
    assert v.status != "divergent"


def test_riesz_dalang_in_space():
    # alpha = 2.5 in d = 3: int (1+|xi|^2)^{-1} |xi|^{-1/2} dxi grows like R^{1/2}
    m = NoiseModel(sp.to_spectral(sp.riesz(2.5, 3)), 0.0)
    assert cd.dalang_integral(m).status == "divergent"
    assert cd.dalang_integral(NoiseModel(sp.to_spectral(sp.riesz(1.5, 3)), 0.0)).status == "finite"


def test_atomic_is_exact_sum():
    mu = sp.atomic([[1.0], [-1.0], [3.0], [-3.0]], [1.0, 1.0, 0.5, 0.5])
    v = cd.condition_integral(NoiseModel(mu, 0.5))
    expected = 2 * 2 ** -1.25 + 10 ** -1.25
    assert v.status == "finite" and math.isclose(v.value, expected, rel_tol=1e-14)


def test_truncated_lattice_is_inconclusive():
    mu = sp.to_spectral(sp.delta_comb(1.0, 1), r_max=40.0)
    v = cd.condition_integral(NoiseModel(mu, 0.5))
    assert v.status == "inconclusive"
    assert v.value is None


def test_decay_integral_rejects_bad_power():
    with pytest.raises(InvalidParameter):
        cd.decay_integral(sp.homogeneous(1.0, 1.0, 1), 0.0)


def test_spherical_reduce_on_non_radial_density():
    mu = sp.to_spectral(sp.fractional_sheet((0.7, 0.8)))
    v = cd.spherical_reduce(mu, lambda r: (1 + r * r) ** -1.5).value
    expected = oracles.homogeneous_profile_integral(mu.alpha, mu.unit_ball_mass, 3.0)
    assert math.isclose(v, expected, rel_tol=1e-7)


def test_shells_are_dyadic_and_positive():
    v = cd.condition_integral(NoiseModel(sp.homogeneous(1.0, 1.0, 2), 0.5), method="shells")
    ks = [k for k, _ in v.shells]
    assert ks == sorted(ks)
    assert all(s > 0 for _, s in v.shells)
    assert np.all(np.diff([s for _, s in v.shells][3:]) < 0)
