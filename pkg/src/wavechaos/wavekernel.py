"""Wave fundamental solution G_t, the free-wave term w and a few closed-form
time integrals built from sin(t|xi|)/|xi|."""

from __future__ import annotations

from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import integrate, special

from .errors import (InvalidParameter, QuadratureError, SingularityError,
                     UnsupportedEvaluation)


def _dim(d):
    if d not in (1, 2, 3):
        raise InvalidParameter(f"dimension must be 1, 2 or 3, got {d!r}")


def _norm(d, xi):
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        return np.abs(xi)
    if xi.shape[-1] != d:
        if d == 1:
            return np.abs(xi)
        raise InvalidParameter(f"point must have {d} coordinates")
    return np.linalg.norm(xi, axis=-1)


def ghat_radial(t, r):
    """sin(t r)/r with value t at r = 0; vectorised in ``r``."""
    r = np.asarray(r, dtype=float)
    return t * np.sinc(t * r / np.pi)


def ghat(d, t, xi):
    """Spatial Fourier transform of G_t at the frequency ``xi``.

    ``xi`` may be a point of R^d (last axis of length d) or a modulus.
    """
    _dim(d)
    if t < 0:
        raise InvalidParameter("time must be non-negative")
    out = ghat_radial(t, _norm(d, xi))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SphereMeasure:
    """The measure ``density * surface measure`` on the sphere |x| = radius in R^3."""

    radius: float
    density: float

    @property
    def total_mass(self):
        return self.density * 4.0 * math.pi * self.radius ** 2

    def integrate(self, f, center=(0.0, 0.0, 0.0), tol=1e-10):
        """int f(center + y) over the sphere against this measure."""
        c = np.asarray(center, dtype=float)
        r = self.radius

        def g(phi, z):
            rho = math.sqrt(max(0.0, 1.0 - z * z))
            p = c + r * np.array([rho * math.cos(phi), rho * math.sin(phi), z])
            return float(f(p[None, :])[0])

        val, err = _dblquad(g, -1.0, 1.0, 0.0, 2.0 * math.pi, tol)
        scale = self.density * r * r
        return val * scale, err * scale


def g_direct(d, t, x):
    """G_t(x) in direct space; a :class:`SphereMeasure` when d = 3."""
    _dim(d)
    if not t > 0:
        raise InvalidParameter("time must be positive")
    if d == 3:
        return SphereMeasure(radius=float(t), density=1.0 / (4.0 * math.pi * t))
    r = float(_norm(d, x))
    if d == 1:
        return 0.5 if r < t else 0.0
    if r == t:
        raise SingularityError("the d=2 wave kernel is singular on |x| = t")
    if r > t:
        return 0.0
    return 1.0 / (2.0 * math.pi * math.sqrt(t * t - r * r))


def g_total_mass(d, t):
    """int G_t(x) dx, evaluated numerically from the direct-space kernel."""
    _dim(d)
    if not t > 0:
        raise InvalidParameter("time must be positive")
    if d == 1:
        return integrate.quad(lambda x: g_direct(1, t, x), -t, t)[0]
    if d == 2:
        # radial profile (t^2 - r^2)^{-1/2} handled by an algebraic weight at r = t
        val = integrate.quad(lambda r: r / math.sqrt(t + r) / (2.0 * math.pi) * 2.0 * math.pi,
                             0.0, t, weight="alg", wvar=(0.0, -0.5))[0]
        return val
    return g_direct(3, t, None).total_mass


# ---------------------------------------------------------------- initial data

FUNCTION_KINDS = ("constant", "box", "gaussian", "fourier-table")


@dataclass(frozen=True)
class FunctionSpec:
    """A function on R^d from a small closed family.

    constant      ``value``
    box           ``value`` times the indicator of prod [lower_j, upper_j]
    gaussian      ``amplitude * exp(-|x - center|^2 / (2 width^2))``
    fourier-table ``sum_k amplitudes_k cos(frequencies_k . x + phases_k)``
    """

    kind: str
    value: float = 1.0
    lower: tuple = ()
    upper: tuple = ()
    amplitude: float = 1.0
    center: tuple = ()
    width: float = 1.0
    frequencies: tuple = ()
    amplitudes: tuple = ()
    phases: tuple = ()

    def __post_init__(self):
        if self.kind not in FUNCTION_KINDS:
            raise InvalidParameter(f"unknown function kind {self.kind!r}")
        if self.kind == "box":
            lo, hi = np.atleast_1d(self.lower), np.atleast_1d(self.upper)
            if lo.shape != hi.shape or np.any(lo > hi):
                raise InvalidParameter("box needs lower <= upper coordinatewise")
        if self.kind == "gaussian" and not self.width > 0:
            raise InvalidParameter("gaussian width must be positive")
        if self.kind == "fourier-table":
            n = len(self.amplitudes)
            if n == 0 or len(self.frequencies) != n:
                raise InvalidParameter("fourier-table needs matching frequencies and amplitudes")
            if self.phases and len(self.phases) != n:
                raise InvalidParameter("phases must match amplitudes")

    @classmethod
    def constant(cls, value):
        return cls("constant", value=float(value))

    @classmethod
    def box(cls, lower, upper, value=1.0):
        return cls("box", value=float(value), lower=tuple(np.atleast_1d(lower).tolist()),
                   upper=tuple(np.atleast_1d(upper).tolist()))

    @classmethod
    def gaussian(cls, amplitude, center, width):
        return cls("gaussian", amplitude=float(amplitude),
                   center=tuple(np.atleast_1d(center).astype(float).tolist()), width=float(width))

    @classmethod
    def fourier_table(cls, frequencies, amplitudes, phases=None):
        freqs = np.atleast_2d(np.asarray(frequencies, dtype=float))
        if freqs.shape[0] == 1 and len(amplitudes) != 1:
            freqs = freqs.T
        return cls("fourier-table", frequencies=tuple(map(tuple, freqs.tolist())),
                   amplitudes=tuple(float(a) for a in amplitudes),
                   phases=tuple(float(p) for p in phases) if phases is not None else ())

    @classmethod
    def from_dict(cls, data):
        data = dict(data)
        kind = data.pop("kind")
        if kind == "constant":
            return cls.constant(data["value"])
        if kind == "box":
            return cls.box(data["lower"], data["upper"], data.get("value", 1.0))
        if kind == "gaussian":
            return cls.gaussian(data.get("amplitude", 1.0), data["center"], data["width"])
        if kind == "fourier-table":
            return cls.fourier_table(data["frequencies"], data["amplitudes"], data.get("phases"))
        raise InvalidParameter(f"unknown function kind {kind!r}")

    def to_dict(self):
        out = {"kind": self.kind}
        if self.kind == "constant":
            out["value"] = self.value
        elif self.kind == "box":
            out.update(value=self.value, lower=list(self.lower), upper=list(self.upper))
        elif self.kind == "gaussian":
            out.update(amplitude=self.amplitude, center=list(self.center), width=self.width)
        else:
            out.update(frequencies=[list(f) for f in self.frequencies],
                       amplitudes=list(self.amplitudes), phases=list(self.phases))
        return out

    def _phases(self):
        return np.asarray(self.phases) if self.phases else np.zeros(len(self.amplitudes))

    def check_dimension(self, d):
        if self.kind == "box" and len(self.lower) != d:
            raise InvalidParameter(f"box must have {d} coordinates")
        if self.kind == "gaussian" and len(self.center) != d:
            raise InvalidParameter(f"gaussian center must have {d} coordinates")
        if self.kind == "fourier-table" and len(self.frequencies[0]) != d:
            raise InvalidParameter(f"frequencies must have {d} coordinates")

    @property
    def sup(self):
        """sup |u|, and also (2 pi)^-d int |u^| for the Fourier-integrable kinds."""
        if self.kind == "constant":
            return abs(self.value)
        if self.kind == "box":
            return abs(self.value)
        if self.kind == "gaussian":
            return abs(self.amplitude)
        return float(np.sum(np.abs(self.amplitudes)))

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if self.kind == "constant":
            return np.full(x.shape[0], self.value)
        if self.kind == "box":
            inside = np.all((x >= np.asarray(self.lower)) & (x <= np.asarray(self.upper)), axis=1)
            return np.where(inside, self.value, 0.0)
        if self.kind == "gaussian":
            r2 = np.sum((x - np.asarray(self.center)) ** 2, axis=1)
            return self.amplitude * np.exp(-r2 / (2.0 * self.width ** 2))
        f = np.asarray(self.frequencies)
        return np.cos(x @ f.T + self._phases()) @ np.asarray(self.amplitudes)

    def breakpoints(self):
        if self.kind == "box":
            return list(self.lower) + list(self.upper)
        return []


@dataclass(frozen=True)
class InitialData:
    u0: FunctionSpec
    u1: FunctionSpec
    dimension: int

    def __post_init__(self):
        _dim(self.dimension)
        self.u0.check_dimension(self.dimension)
        self.u1.check_dimension(self.dimension)
        if self.dimension > 1 and self.u0.kind == "box":
            raise UnsupportedEvaluation("u0 needs an integrable Fourier transform when d >= 2; "
                                        "indicator boxes do not have one")

    @property
    def m0(self):
        return self.u0.sup

    @property
    def m1(self):
        return self.u1.sup

    def bound(self, t):
        """The a-priori bound M0 + M1 t on |w(t, x)|."""
        return self.m0 + self.m1 * t

    @classmethod
    def from_dict(cls, data):
        return cls(FunctionSpec.from_dict(data["u0"]), FunctionSpec.from_dict(data["u1"]),
                   int(data["dimension"]))

    def to_dict(self):
        return {"dimension": self.dimension, "u0": self.u0.to_dict(), "u1": self.u1.to_dict()}


def _dblquad(g, a, b, c, e, tol):
    # g(inner, outer); outer on [a, b], inner on [c, e]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.dblquad(g, a, b, c, e, epsabs=tol, epsrel=tol)


def _time_derivative_term(u0, d, t, x):
    """d/dt (G_t * u0)(x)."""
    if u0.kind == "constant":
        return u0.value, 0.0
    if u0.kind == "fourier-table":
        f = np.asarray(u0.frequencies)
        k = np.linalg.norm(f, axis=1)
        vals = np.cos(t * k) * np.cos(f @ x + u0._phases())
        return float(vals @ np.asarray(u0.amplitudes)), 0.0
    if d == 1:
        return 0.5 * float(u0(x + t)[0] + u0(x - t)[0]), 0.0
    # gaussian, d = 2, 3: (2 pi)^-d int cos(t|xi|) u0^(xi) e^{i xi.x} dxi in polar form
    s = u0.width
    rho = float(np.linalg.norm(x - np.asarray(u0.center)))
    pref = u0.amplitude * s ** d / (2.0 * math.pi) ** (d / 2.0)
    if d == 2:
        def radial(r):
            return math.cos(t * r) * math.exp(-0.5 * (s * r) ** 2) * special.j0(r * rho) * r
        ang = 2.0 * math.pi
    else:
        def radial(r):
            return math.cos(t * r) * math.exp(-0.5 * (s * r) ** 2) * np.sinc(r * rho / math.pi) * r * r
        ang = 4.0 * math.pi
    top = 40.0 / s
    npts = max(50, int(4 * (t + rho) * top / math.pi) + 1)
    val, err = integrate.quad(radial, 0.0, top, limit=max(200, 2 * npts), epsabs=1e-13, epsrel=1e-12)
    return pref * ang * val, pref * ang * err


def _arc_inside(c, rho, lo, hi):
    """Angle of the circle |y - c| = rho lying inside the rectangle [lo, hi]."""
    if rho == 0.0:
        return 2.0 * math.pi if np.all((c >= lo) & (c <= hi)) else 0.0
    cuts = [0.0, 2.0 * math.pi]
    for j, (a, b) in enumerate(zip(lo, hi)):
        for edge in (a, b):
            v = (edge - c[j]) / rho
            if -1.0 < v < 1.0:
                base = math.acos(v) if j == 0 else math.asin(v)
                for th in (base, -base, math.pi - base):
                    cuts.append(th % (2.0 * math.pi))
    cuts = np.unique(cuts)
    mids = 0.5 * (cuts[:-1] + cuts[1:])
    px = c[0] + rho * np.cos(mids)
    py = c[1] + rho * np.sin(mids)
    inside = (px >= lo[0]) & (px <= hi[0]) & (py >= lo[1]) & (py <= hi[1])
    return float(np.sum(np.diff(cuts)[inside]))


def _box_convolution(u1, d, t, x, tol):
    # the angular part is measured exactly, leaving a 1-d integral with a few kinks
    lo, hi = np.asarray(u1.lower), np.asarray(u1.upper)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if d == 2:
            def g(phi):
                rr = t * math.sin(phi)
                return t * math.sin(phi) / (2.0 * math.pi) * _arc_inside(x, rr, lo, hi)

            val, err = integrate.quad(g, 0.0, math.pi / 2.0, epsabs=tol, epsrel=tol, limit=400)
        else:
            def g(z):
                h = x[2] + t * z
                if h < lo[2] or h > hi[2]:
                    return 0.0
                return _arc_inside(x[:2], t * math.sqrt(max(0.0, 1.0 - z * z)), lo[:2], hi[:2])

            pts = [(e - x[2]) / t for e in (lo[2], hi[2]) if -1.0 < (e - x[2]) / t < 1.0]
            val, err = integrate.quad(g, -1.0, 1.0, points=pts or None, epsabs=tol, epsrel=tol,
                                      limit=400)
            val, err = val * t / (4.0 * math.pi), err * t / (4.0 * math.pi)
    return u1.value * val, abs(u1.value) * err


def _convolution_term(u1, d, t, x, tol):
    """(G_t * u1)(x) by quadrature over the support of G_t."""
    if d == 1:
        pts = [x[0] - b for b in u1.breakpoints() if -t < x[0] - b < t]
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(lambda y: 0.5 * u1(np.array([[x[0] - y]]))[0], -t, t,
                                      points=pts or None, epsabs=tol, epsrel=tol, limit=400)
        return val, err
    if u1.kind == "box":
        return _box_convolution(u1, d, t, x, tol)
    if d == 2:
        # y = t sin(phi) (cos th, sin th) removes the (t^2 - |y|^2)^{-1/2} edge singularity
        def g(th, phi):
            rr = t * math.sin(phi)
            p = x - rr * np.array([math.cos(th), math.sin(th)])
            return t * math.sin(phi) / (2.0 * math.pi) * u1(p[None, :])[0]

        return _dblquad(g, 0.0, math.pi / 2.0, 0.0, 2.0 * math.pi, tol)
    sphere = g_direct(3, t, x)
    # the sphere is symmetric, so u1(x - y) and u1(x + y) integrate alike
    return sphere.integrate(u1, center=x, tol=tol)


def w_eval(data, d, t, x, tol=1e-8):
    """Free-wave term w(t, x) = d/dt (G_t * u0)(x) + (G_t * u1)(x).

    Returns ``(value, error_bound)``.
    """
    _dim(d)
    if data.dimension != d:
        raise InvalidParameter("initial data dimension does not match d")
    if t < 0:
        raise InvalidParameter("time must be non-negative")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (d,):
        raise InvalidParameter(f"point must have {d} coordinates")
    if t == 0:
        return float(data.u0(x)[0]), 0.0
    a, ea = _time_derivative_term(data.u0, d, t, x)
    if data.u1.kind == "fourier-table":
        f = np.asarray(data.u1.frequencies)
        k = np.linalg.norm(f, axis=1)
        b = float((ghat_radial(t, k) * np.cos(f @ x + data.u1._phases())) @ np.asarray(data.u1.amplitudes))
        eb = 0.0
    else:
        b, eb = _convolution_term(data.u1, d, t, x, tol)
    err = ea + eb
    if err > 100 * tol * max(1.0, abs(a + b)):
        raise QuadratureError(f"w quadrature reached only {err:.3g}", achieved=err)
    return a + b, err


# ------------------------------------------------------------ closed forms


def sine_laplace(beta, eta_norm):
    """int_0^inf e^{-beta r} sin(r eta)/eta dr = 1/(beta^2 + eta^2)."""
    beta = complex(beta)
    if not beta.real > 0:
        raise InvalidParameter("sine Laplace transform needs Re(beta) > 0")
    if eta_norm < 0:
        raise InvalidParameter("eta_norm must be non-negative")
    return 1.0 / (beta * beta + eta_norm * eta_norm)


def _one_minus_cos_over(u, t):
    # (1 - cos(u t))/u = (t^2 u / 2) sinc(u t / 2pi)^2, exact and smooth through u = 0
    return 0.5 * t * t * u * np.sinc(u * t / (2.0 * np.pi)) ** 2


def q_closed_form(t, lam, xi_norm):
    """int_0^t cos(lam s) sin(xi s) ds in closed form."""
    if t < 0:
        raise InvalidParameter("time must be non-negative")
    out = 0.5 * (_one_minus_cos_over(np.add(lam, xi_norm), t)
                 + _one_minus_cos_over(np.subtract(xi_norm, lam), t))
    return float(out) if np.ndim(out) == 0 else out


def _exp_integral(u, t):
    # int_0^t e^{i u s} ds
    return t * np.exp(0.5j * u * t) * np.sinc(u * t / (2.0 * np.pi))


def _moment(m, lam, t):
    # int_0^t s^m e^{i lam s} ds
    lam = np.asarray(lam, dtype=float)
    out = np.empty(lam.shape, dtype=complex)
    small = np.abs(lam) * t < 1.0
    if np.any(small):
        z = 1j * lam[small] * t
        acc = np.zeros(z.shape, dtype=complex)
        term = np.ones(z.shape, dtype=complex)
        for j in range(30):
            acc += term / (m + j + 1)
            term = term * z / (j + 1)
        out[small] = acc * t ** (m + 1)
    if np.any(~small):
        ll = lam[~small]
        il = 1j * ll
        e = np.exp(il * t)
        acc = np.zeros(ll.shape, dtype=complex)
        for j in range(m + 1):
            acc += (-1) ** j * math.factorial(m) / math.factorial(m - j) * t ** (m - j) / il ** (j + 1)
        out[~small] = e * acc - (-1) ** m * math.factorial(m) / il ** (m + 1)
    return out


def time_fourier_sine(t, lam, k):
    """int_0^t e^{i lam s} sin(k s)/k ds, vectorised in ``lam``."""
    lam = np.asarray(lam, dtype=float)
    if k * t < 1e-3:
        return _moment(1, lam, t) - k * k / 6.0 * _moment(3, lam, t)
    return (_exp_integral(lam + k, t) - _exp_integral(lam - k, t)) / (2j * k)
