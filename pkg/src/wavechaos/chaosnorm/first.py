"""First-chaos norms ||f_1(., t, x)||^2 against a spectral measure."""

from __future__ import annotations

from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import integrate, special

from .. import quadrature as qd
from ..conventions import temporal_constant
from ..errors import DivergenceError, InvalidParameter, QuadratureError, UnsupportedEvaluation
from ..results import Estimate
from ..spectral import NoiseModel
from . import modes

R_CUT_TIME = (250.0, 2000.0)  # retried with the larger cut when the tail bound is too loose
R_CUT_FOURIER = 100.0


@dataclass(frozen=True)
class ChaosKernelSpec:
    """Order, horizon and noise of a chaos kernel.

    ``w_sup`` is None for the kernels built with w = 1, otherwise the sup
    norm of a bounded free-wave term.  Norms do not depend on the spatial
    point, which is therefore not stored.
    """

    order: int
    t: float
    model: NoiseModel
    w_sup: float | None = None

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 1:
            raise InvalidParameter("chaos order must be an integer >= 1")
        if not self.t >= 0:
            raise InvalidParameter("time horizon must be non-negative")
        if self.w_sup is not None and not self.w_sup >= 0:
            raise InvalidParameter("w_sup must be non-negative")

    @property
    def dimension(self):
        return self.model.dimension

    @property
    def alpha0(self):
        return self.model.alpha0

    @property
    def measure(self):
        return self.model.measure

    def with_time(self, t):
        return ChaosKernelSpec(self.order, t, self.model, self.w_sup)


def _first_order(spec):
    if spec.order != 1:
        raise InvalidParameter("this route computes the first chaos only (order 1)")


def _check_finite(mu, alpha0):
    # int N(r) mu(dr) with N(r) ~ r^{alpha0-3} (alpha0 > 0) or r^{-4} (alpha0 = 0)
    a = mu.homogeneity_order
    if mu.kind != "atomic" and a is not None:
        p = 4.0 if alpha0 == 0 else 3.0 - alpha0
        if a >= p:
            raise DivergenceError(
                f"first chaos norm is infinite: mu(B(0,r)) ~ r^{a:g} against decay r^-{p:g}")


def _radial_nodes(mu, t, r_cut, n=16, levels=30):
    """Nodes/weights in r, already carrying the shell density of mu."""
    width = 0.5 * math.pi / t
    h = width
    count = int(math.ceil((r_cut / t - h) / width))
    if mu.homogeneity_order is not None:
        a, m = mu.homogeneity_order, mu.unit_ball_mass
        # N is smooth in r, so the r^{a-1} weight is all the core rule has to absorb
        if a < 2.0:
            x0, w0 = qd.jacobi_rule(h, 1.0 - a, n=n + 4)
        else:
            x0, w0 = qd.panels(qd.graded_edges(0.0, h, 6), n)
            w0 = w0 * x0 ** (a - 1.0)
        w0 = w0 * a * m
        x1, w1 = qd.uniform_panels(h, h + count * width, count, n)
        w1 = w1 * a * m * x1 ** (a - 1.0)
    else:
        x0, w0 = qd.panels(qd.graded_edges(0.0, h, levels), 10)
        w0 = w0 * mu.shell_density(x0)
        x1, w1 = qd.uniform_panels(h, h + count * width, count, n)
        w1 = w1 * mu.shell_density(x1)
    return np.concatenate([x0, x1]), np.concatenate([w0, w1]), h + count * width


def _asymptotic_tail(mu, t, alpha0, r0, tol=1e-10):
    a1, a2 = modes.asymptotic_coefficients(t, alpha0)
    if mu.homogeneity_order is not None:
        a, m = mu.homogeneity_order, mu.unit_ball_mass
        e1, e2 = a + alpha0 - 3.0, a + alpha0 - 4.0
        val = a * m * (-a1 * r0 ** e1 / e1 if a1 else 0.0) + a * m * (-a2 * r0 ** e2 / e2)
        # next term in the expansion is O(r^{a + a0 - 5})
        err = abs(a * m * r0 ** (e2 - 1.0)) * (abs(a2) + 1.0)
        return val, err
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(lambda r: float(mu.shell_density(r)) * modes.mode_asymptotic(r, t, alpha0),
                                  r0, np.inf, epsabs=0.0, epsrel=tol, limit=200)
    return val, err + abs(val) * 1e-3


def _integrate_modes(spec, mode_fn, r_cut, tol, levels=30):
    """int N(|xi|) mu(dxi) with N given per mode by ``mode_fn(k) -> (values, errors)``."""
    mu, t, a0 = spec.measure, spec.t, spec.alpha0
    if t == 0:
        return 0.0, 0.0
    if mu.kind == "atomic":
        r, inv = np.unique(mu.norms, return_inverse=True)
        vals, errs = mode_fn(r)
        return float(np.dot(mu.weights, vals[inv])), float(np.dot(mu.weights, errs[inv]))
    _check_finite(mu, a0)
    x, w, r0 = _radial_nodes(mu, t, r_cut, levels=levels)
    vals, errs = mode_fn(x)
    body = float(np.dot(w, vals))
    x2, w2, _ = _radial_nodes(mu, t, r_cut, n=24, levels=levels)
    vals2, errs2 = mode_fn(x2)
    body2 = float(np.dot(w2, vals2))
    tail, terr = _asymptotic_tail(mu, t, a0, r0)
    value = body2 + tail
    err = abs(body - body2) + float(np.dot(np.abs(w2), errs2)) + terr
    return value, err


def _floor(spec):
    # absolute noise level for atomic sums that cancel to ~0 (e.g. t|xi| on 2 pi Z)
    mu = spec.measure
    if mu.kind != "atomic":
        return 0.0
    return 1e-12 * float(mu.weights.sum()) * spec.t ** (4.0 - spec.alpha0)


def _finish(value, err, tol, method, floor=0.0):
    if err > tol * abs(value) and err > floor:
        raise QuadratureError(f"{method} route reached relative error {err / max(abs(value), 1e-300):.3g}"
                              f" above tol {tol:g}", achieved=err)
    return Estimate(max(value, 0.0), err, 0, method)


def first_chaos_norm_time(spec: ChaosKernelSpec, tol=1e-6):
    """Time-domain route: double time integral per mode, then mu."""
    _first_order(spec)
    a0 = spec.alpha0

    def fn(k):
        v = modes.mode_norm_time(k, spec.t, a0)
        f = modes.mode_norm_time(k, spec.t, a0, fine=True)
        return f, np.abs(f - v) + 1e-15 * np.abs(f)

    for r_cut in R_CUT_TIME:
        value, err = _integrate_modes(spec, fn, r_cut, tol)
        if err <= tol * abs(value) or spec.measure.kind == "atomic":
            break
    return _finish(value, err, tol, "quadrature", _floor(spec))


def first_chaos_norm_fourier(spec: ChaosKernelSpec, tol=1e-6):
    """Frequency-domain route through the |lambda|^{alpha0-1} weight."""
    _first_order(spec)
    if spec.alpha0 == 0:
        raise UnsupportedEvaluation("alpha0 = 0: use first_chaos_norm_closed_alpha0")

    # atoms get two lambda resolutions; for densities the radial rule is doubled instead
    paired = spec.measure.kind == "atomic"

    def fn(k):
        return modes.mode_norm_fourier(k, spec.t, spec.alpha0, with_error=True, paired=paired)

    value, err = _integrate_modes(spec, fn, R_CUT_FOURIER, tol, levels=12)
    return _finish(value, err, tol, "quadrature", _floor(spec))


def first_chaos_norm_closed_alpha0(spec: ChaosKernelSpec, tol=1e-6):
    """int (1 - cos(t|xi|))^2 / |xi|^4 mu(dxi) for time-independent noise."""
    _first_order(spec)
    if spec.alpha0 != 0:
        raise UnsupportedEvaluation("the closed form only holds for alpha0 = 0")

    def fn(k):
        v = modes.mode_norm_closed(k, spec.t)
        return v, 1e-15 * np.abs(v)

    value, err = _integrate_modes(spec, fn, R_CUT_TIME[-1], tol)
    method = "closed-form" if spec.measure.kind == "atomic" else "quadrature"
    return _finish(value, err, tol, method, _floor(spec))


def first_chaos_norm(spec: ChaosKernelSpec, tol=1e-6):
    """Best available deterministic route for the first chaos."""
    if spec.alpha0 == 0:
        return first_chaos_norm_closed_alpha0(spec, tol)
    return first_chaos_norm_time(spec, tol)


def _tau_integral(r, t):
    """int_0^r ((1 - cos(tau t))/tau)^2 dtau.

    Small r t: direct quadrature of a cancellation-free integrand.  Otherwise
    the complement of the full integral pi t / 2, written with sine integrals.
    """
    if r * t < 4.0:
        def g(tau):
            return (0.5 * t * t * tau * np.sinc(tau * t / (2.0 * np.pi)) ** 2) ** 2

        return integrate.quad(g, 0.0, r, epsabs=0.0, epsrel=1e-12)[0]
    si1, _ = special.sici(t * r)
    si2, _ = special.sici(2.0 * t * r)
    half = 0.5 * math.pi
    rest = (1.5 / r - 2.0 * (math.cos(t * r) / r - t * (half - si1))
            + 0.5 * (math.cos(2.0 * t * r) / r - 2.0 * t * (half - si2)))
    return half * t - rest


@dataclass(frozen=True)
class NecessityBound:
    """Lower bounds on the first chaos norm with the package constants.

    ``pointwise`` keeps the tau-integral up to |xi| inside the mu-integral;
    ``value`` is the weaker product form constant * int_{|xi|>=1} |xi|^{a0-3} mu.
    """

    value: float
    pointwise: float
    constant: float
    tail_integral: float

    def to_dict(self):
        return dict(value=self.value, pointwise=self.pointwise, constant=self.constant,
                    tail_integral=self.tail_integral)


def necessity_lower_bound(spec: ChaosKernelSpec):
    _first_order(spec)
    a0, t, mu = spec.alpha0, spec.t, spec.measure
    if a0 == 0:
        raise UnsupportedEvaluation("the lower bound uses the alpha0 > 0 frequency form")
    c = temporal_constant(a0) / 4.0
    constant = c * _tau_integral(1.0, t)
    if mu.kind == "atomic":
        r = mu.norms
        big = r >= 1.0
        tail = float(np.dot(mu.weights[big], r[big] ** (a0 - 3.0)))
        point = float(sum(w * x ** (a0 - 3.0) * _tau_integral(x, t)
                          for w, x in zip(mu.weights[big], r[big])))
        return NecessityBound(constant * tail, c * point, constant, tail)
    _check_finite(mu, a0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        tail = integrate.quad(lambda x: float(mu.shell_density(x)) * x ** (a0 - 3.0), 1.0, np.inf,
                              epsabs=0.0, epsrel=1e-10, limit=200)[0]
        # the tau integral tends to pi t / 2, so the pointwise form is also finite
        point = integrate.quad(lambda x: float(mu.shell_density(x)) * x ** (a0 - 3.0) * _tau_integral(x, t),
                               1.0, np.inf, epsabs=0.0, epsrel=1e-8, limit=200)[0]
    return NecessityBound(constant * tail, c * point, constant, tail)
