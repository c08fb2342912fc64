"""Laplace-transform bounds: Phi_p, L_{alpha0,n} and the inequality checks."""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy import integrate, special

from ..condition import condition_integral, decay_integral
from ..errors import DivergenceError, InvalidParameter
from ..results import Estimate
from ..spectral import NoiseModel, integrate_radial
from .first import ChaosKernelSpec, first_chaos_norm


def phi_p(lam, xi, p):
    """|(p - i lam)^2 + |xi|^2|^2 = 4 p^2 lam^2 + (p^2 + |xi|^2 - lam^2)^2; ``xi`` is a norm."""
    lam, xi = np.asarray(lam, dtype=float), np.asarray(xi, dtype=float)
    return 4.0 * p * p * lam * lam + (p * p + xi * xi - lam * lam) ** 2


def phi_p_swapped(lam, xi, p):
    return phi_p(xi, lam, p)


def phi_p_symmetrized(lam, xi, p):
    lam, xi = np.abs(np.asarray(lam, dtype=float)), np.abs(np.asarray(xi, dtype=float))
    return p ** 4 + ((xi + lam) * (xi - lam)) ** 2 + 2.0 * p * p * (xi * xi + lam * lam)


def phi_p_lower(lam, xi, p):
    lam, xi = np.abs(np.asarray(lam, dtype=float)), np.abs(np.asarray(xi, dtype=float))
    return p ** 4 + (xi + lam) ** 2 * (p * p + (xi - lam) ** 2)


@dataclass(frozen=True)
class PhiReport:
    draws: int
    max_swap_error: float
    max_symmetrized_error: float
    min_lower_margin: float
    tol: float

    def __bool__(self):
        return (self.max_swap_error <= self.tol and self.max_symmetrized_error <= self.tol
                and self.min_lower_margin >= -self.tol)

    def to_dict(self):
        return dict(draws=self.draws, max_swap_error=self.max_swap_error,
                    max_symmetrized_error=self.max_symmetrized_error,
                    min_lower_margin=self.min_lower_margin, tol=self.tol, holds=bool(self))


def phi_identity_check(draws=100_000, seed=0, tol=1e-12, scale=(-3.0, 3.0)):
    """Swap symmetry, symmetrized form and lower bound of Phi_p on random draws.

    Magnitudes are log-uniform over ``10**scale``; errors are relative to Phi_p.
    """
    rng = np.random.default_rng(seed)
    lo, hi = scale
    lam = rng.choice([-1.0, 1.0], draws) * 10.0 ** rng.uniform(lo, hi, draws)
    xi = 10.0 ** rng.uniform(lo, hi, draws)
    p = 10.0 ** rng.uniform(lo, hi, draws)
    ref = phi_p(lam, xi, p)
    swap = np.abs(phi_p_swapped(lam, xi, p) - ref) / ref
    sym = np.abs(phi_p_symmetrized(lam, xi, p) - ref) / ref
    margin = (ref - phi_p_lower(lam, xi, p)) / ref
    return PhiReport(draws, float(swap.max()), float(sym.max()), float(margin.min()), tol)


# ------------------------------------------------------------------ L_{a0,n}


def _quad(f, a, b, tol, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        return integrate.quad(f, a, b, epsabs=0.0, epsrel=tol, limit=200, **kw)


def lambda_integral(k, n, alpha0, tol=1e-11):
    """int_R |lam|^{alpha0-1} / Phi_n(lam, k) dlam for 0 < alpha0 < 1.

    The integrand peaks near lam = sqrt(k^2 + n^2) with width about n, so the
    half line is cut there; the origin singularity goes to QUADPACK as a weight.
    """
    k, n = float(k), float(n)
    peak = math.sqrt(k * k + n * n)
    a = 0.5 * min(n, peak)
    nn, kk, e = n * n, k * k, alpha0 - 1.0

    # scalar arithmetic: QUADPACK calls these one point at a time
    def phi(lam):
        q = nn + kk - lam * lam
        return 4.0 * nn * lam * lam + q * q

    def g(lam):
        return lam ** e / phi(lam)

    v0, e0 = _quad(lambda lam: 1.0 / phi(lam), 0.0, a, tol, weight="alg", wvar=(e, 0.0))
    v1, e1 = _quad(g, a, peak, tol)
    v2, e2 = _quad(g, peak, peak + 20.0 * n, tol)
    v3, e3 = _quad(g, peak + 20.0 * n, np.inf, tol)
    return 2.0 * (v0 + v1 + v2 + v3), 2.0 * (e0 + e1 + e2 + e3)


def _l_check(model, alpha0):
    mu = model.measure
    if alpha0 > 0:
        verdict = condition_integral(model)
    else:
        # (n^2 + |xi|^2)^{-2} decays like the p = 4 profile
        verdict = decay_integral(mu, 4.0)
    if verdict.status == "divergent":
        raise DivergenceError("L_{alpha0,n} is infinite for this model", verdict)
    return verdict


def l_alpha0_n(model: NoiseModel, n, tol=1e-8):
    """L_{alpha0,n} = int int |lam|^{alpha0-1} / Phi_n(lam, xi) dlam mu(dxi).

    For alpha0 = 0 this is int (n^2 + |xi|^2)^{-2} mu(dxi).  Raises
    DivergenceError (with the verdict attached) when the integral is infinite.
    """
    if int(n) != n or n < 1:
        raise InvalidParameter("n must be an integer >= 1")
    n = float(n)
    a0 = model.alpha0
    _l_check(model, a0)
    mu = model.measure
    edges = (min(1.0, n), n, 4.0 * n) if n > 1 else (1.0, 4.0)
    if a0 == 0:
        value, err = integrate_radial(mu, lambda r: 1.0 / (n * n + r * r) ** 2, tol=tol, edges=edges)
        return Estimate(value, err, 0, "closed-form" if mu.kind == "atomic" else "quadrature")
    inner = tol * 1e-2

    def f(r):
        return lambda_integral(r, n, a0, tol=inner)[0]

    value, err = integrate_radial(mu, f, tol=tol, edges=edges)
    # each inner integral is relatively accurate to ``inner``
    return Estimate(value, err + inner * abs(value), 0, "quadrature")


def l_sequence(model: NoiseModel, ns=(1, 2, 4, 8, 16, 32, 64), tol=1e-8):
    """``[(n, n L_n, n * error)]`` for the decay diagnostic n L_{alpha0,n} -> 0."""
    out = []
    for n in ns:
        e = l_alpha0_n(model, n, tol)
        out.append((int(n), n * e.value, n * e.error))
    return out


# ---------------------------------------------------------- Laplace inequality


@dataclass
class LaplaceReport:
    """Both sides of 2 int_0^inf e^{-2ps} N(s) ds >= e^{-2pt} N(t) / p."""

    n: int
    p: float
    t: float
    lhs: float
    lhs_error: float
    rhs: float
    rhs_error: float
    status: str  # "holds" | "violated" | "inconclusive"
    grid: list = field(default_factory=list)
    norms: list = field(default_factory=list)
    monotone: bool = True
    monotone_expected: bool = True

    def __bool__(self):
        return self.status == "holds"

    def to_dict(self):
        return dict(n=self.n, p=self.p, t=self.t, lhs=self.lhs, lhs_error=self.lhs_error,
                    rhs=self.rhs, rhs_error=self.rhs_error, status=self.status,
                    grid=list(map(float, self.grid)), norms=list(map(float, self.norms)),
                    monotone=self.monotone, monotone_expected=self.monotone_expected)


def _small_time_power(spec):
    # N(s) = s^beta F(s) with F smooth at 0
    mu, a0 = spec.measure, spec.alpha0
    beta = 4.0 - a0
    if mu.kind != "atomic" and mu.homogeneity_order is not None:
        beta -= mu.homogeneity_order
    return beta


def laplace_monotonicity_check(spec: ChaosKernelSpec, t=None, p=None, norm=None,
                               nodes=None, grid_points=9, tol=1e-6):
    """Check the Laplace inequality at ``t`` and monotonicity of s -> N(s) on [0, 2t].

    ``norm(spec) -> Estimate`` defaults to the deterministic first-chaos norm,
    so order > 1 needs an explicit ``norm``.  The left side uses generalized
    Gauss-Laguerre in u = 2ps with the small-time power of N as weight; its
    error combines two node counts and the norm errors.  Atomic measures
    make N oscillate, so they get more nodes by default (their norms are cheap).
    """
    if norm is None:
        if spec.order != 1:
            raise InvalidParameter("pass a norm evaluator for chaos orders above 1")

        def norm(s):
            return first_chaos_norm(s, tol=tol)
    t = spec.t if t is None else float(t)
    p = float(spec.order if p is None else p)
    if not p > 0:
        raise InvalidParameter("p must be positive")
    beta = _small_time_power(spec)
    if nodes is None:
        nodes = (32, 48) if spec.measure.kind == "atomic" else (12, 16)
    sums = []
    for m in nodes:
        u, w = special.roots_genlaguerre(m, beta)
        total, err = 0.0, 0.0
        for uu, ww in zip(u, w):
            s = uu / (2.0 * p)
            e = norm(spec.with_time(s))
            f = ww / uu ** beta / (2.0 * p)
            total += f * e.value
            err += abs(f) * e.error
        sums.append((2.0 * total, 2.0 * err))
    lhs, lhs_err = sums[-1][0], abs(sums[-1][0] - sums[0][0]) + sums[-1][1]
    at_t = norm(spec.with_time(t))
    scale = math.exp(-2.0 * p * t) / p
    rhs, rhs_err = scale * at_t.value, scale * at_t.error
    gap = lhs - rhs
    if gap > lhs_err + rhs_err:
        status = "holds"
    elif gap < -(lhs_err + rhs_err):
        status = "violated"
    else:
        status = "inconclusive"
    grid = np.linspace(0.0, 2.0 * t, grid_points) if t > 0 else np.zeros(1)
    ests = [norm(spec.with_time(s)) for s in grid]
    vals = [e.value for e in ests]
    monotone = all(b - a >= -(ea.error + eb.error)
                   for a, b, ea, eb in zip(vals, vals[1:], ests, ests[1:]))
    return LaplaceReport(spec.order, p, t, lhs, lhs_err, rhs, rhs_err, status,
                         list(grid), vals, monotone, spec.measure.kind != "atomic")


# --------------------------------------------------------- reverse convolution

F_FAMILIES = ("gaussian", "cauchy")
NU_FAMILIES = ("gaussian", "cauchy", "power")


@dataclass(frozen=True)
class Family:
    """A 1-d function or measure density with a known non-negative Fourier transform.

    ``power`` is |lam|^{-beta} on [-R, R] with 1/2 <= beta < 1.  ``phi-inverse``
    is 1 / Phi_1(lam, 1) = 1 / (lam^4 + 4), whose transform changes sign; it is
    accepted for numerical checks only.
    """

    kind: str
    scale: float = 1.0
    beta: float = 0.5
    radius: float = 10.0

    def __post_init__(self):
        if self.kind not in ("gaussian", "cauchy", "power", "phi-inverse"):
            raise InvalidParameter(f"unknown family {self.kind!r}")
        if not self.scale > 0 or not self.radius > 0:
            raise InvalidParameter("scale and radius must be positive")
        if self.kind == "power" and not 0.5 <= self.beta < 1.0:
            raise InvalidParameter("power family needs 1/2 <= beta < 1")

    @property
    def fourier_positive(self):
        return self.kind != "phi-inverse"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        s = self.scale
        if self.kind == "gaussian":
            return np.exp(-0.5 * (x / s) ** 2)
        if self.kind == "cauchy":
            return s * s / (x * x + s * s)
        if self.kind == "phi-inverse":
            return 1.0 / (x ** 4 + 4.0)
        return np.where(np.abs(x) <= self.radius, np.abs(x) ** -self.beta, 0.0)

    def to_dict(self):
        return dict(kind=self.kind, scale=self.scale, beta=self.beta, radius=self.radius)


def _against(f, nu, eta, tol):
    """int f(x - eta) nu(x) dx."""
    if nu.kind == "power":
        def g(x):
            return f(x - eta) + f(-x - eta)
        return _quad(g, 0.0, nu.radius, tol, weight="alg", wvar=(-nu.beta, 0.0))
    pts = sorted({eta, 0.0})
    lo, hi = pts[0], pts[-1]

    def h(x):
        return f(x - eta) * nu(x)
    parts = [_quad(h, -np.inf, lo, tol), _quad(h, hi, np.inf, tol)]
    if hi > lo:
        parts.append(_quad(h, lo, hi, tol))
    return sum(v for v, _ in parts), sum(e for _, e in parts)


@dataclass
class ConvolutionReport:
    f: Family
    nu: Family
    shifts: list
    shifted: list
    centred: float
    error: float
    holds: bool

    def __bool__(self):
        return self.holds

    def to_dict(self):
        return dict(f=self.f.to_dict(), nu=self.nu.to_dict(), shifts=self.shifts,
                    shifted=self.shifted, centred=self.centred, error=self.error, holds=self.holds)


def reverse_convolution_check(f: Family, nu: Family, shifts, tol=1e-10):
    """int f(x - eta) nu(dx) <= int f(x) nu(dx) for every shift, within quadrature error."""
    centred, e0 = _against(f, nu, 0.0, tol)
    shifted, errs = [], []
    for eta in shifts:
        v, e = _against(f, nu, float(eta), tol)
        shifted.append(v)
        errs.append(e)
    err = e0 + max(errs, default=0.0) + 1e-13 * abs(centred)
    holds = all(v <= centred + err for v in shifted)
    return ConvolutionReport(f, nu, [float(x) for x in shifts], shifted, centred, err, holds)


def random_family_draws(count, seed=0, shifts=5):
    """``count`` random (f, nu, shifts) triples from the Fourier-positive families."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        f = Family(str(rng.choice(F_FAMILIES)), scale=float(rng.uniform(0.2, 5.0)))
        kind = str(rng.choice(NU_FAMILIES))
        nu = Family(kind, scale=float(rng.uniform(0.2, 5.0)), beta=float(rng.uniform(0.5, 0.95)),
                    radius=float(rng.uniform(1.0, 20.0)))
        out.append((f, nu, [0.0] + list(rng.uniform(-5.0, 5.0, shifts - 1))))
    return out
