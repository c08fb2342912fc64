"""Monte Carlo for ||g_n(., t, x)||^2 in d = 1 with a Riesz covariance.

In one dimension G_r(x) = 1{|x| < r} / 2, so after reversing time the kernel
norm is an integral over two ordered time chains s, s' in [0, t], two
spatial chains started at x with steps bounded by the time increments, and
the weight prod |s_k - s'_k|^{-alpha0} |x_k - x'_k|^{-alpha}.  The sampler

* draws s as sorted uniforms (weight t^n / n!),
* draws each s'_k on (s'_{k-1}, t) with density proportional to
  |s'_k - s_k|^{-alpha0},
* walks x' uniformly inside its light cone,
* draws the pair difference z_k = x_k - x'_k with density proportional to
  |z|^{-alpha} on the interval allowed by the cone of x.

All weights left over are bounded, so the estimator has finite variance for
every alpha < 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy import integrate

from ..conventions import direct_to_fourier_factor
from ..errors import InvalidParameter, MCDiagnosticError, UnsupportedEvaluation
from ..results import Estimate
from ..rng import DEFAULT_CHUNK, check_variance_decay, operation_key, run_chunks
from ..spectral import CovarianceDescriptor, NoiseModel, riesz, to_spectral
from .first import ChaosKernelSpec, first_chaos_norm

MAX_ORDER = 3


def _power_cdf(z, beta):
    # antiderivative of |z|^{-beta}
    return np.sign(z) * np.abs(z) ** (1.0 - beta) / (1.0 - beta)


def _power_icdf(y, beta):
    return np.sign(y) * ((1.0 - beta) * np.abs(y)) ** (1.0 / (1.0 - beta))


def sample_power(rng, lo, hi, beta):
    """Draw from density proportional to |z|^{-beta} on [lo, hi]; returns (z, mass)."""
    a, b = _power_cdf(lo, beta), _power_cdf(hi, beta)
    mass = b - a
    z = _power_icdf(a + rng.random(np.shape(lo)) * mass, beta)
    return np.clip(z, lo, hi), mass


def riesz_exponent(spec: ChaosKernelSpec):
    """alpha of the direct-space Riesz covariance behind a 1-d model."""
    src = spec.measure.source
    if spec.dimension != 1 or not src:
        raise UnsupportedEvaluation("Monte Carlo needs a 1-d model built from a covariance")
    try:
        cov = CovarianceDescriptor.from_dict(src)
    except (KeyError, TypeError, InvalidParameter) as exc:
        raise UnsupportedEvaluation("measure does not come from a catalog covariance") from exc
    if cov.kind != "riesz":
        raise UnsupportedEvaluation(f"Monte Carlo supports Riesz covariances only, not {cov.kind}")
    return float(cov.alpha)


def _kernel(n, t, alpha0, alpha):
    simplex = t ** n / math.factorial(n)

    def draw(rng, size):
        s = np.sort(rng.random((size, n)) * t, axis=1)
        w = np.full(size, simplex)
        sp_prev = np.zeros(size)
        x_prev = np.zeros(size)
        xp_prev = np.zeros(size)
        s_prev = np.zeros(size)
        for k in range(n):
            sk = s[:, k]
            u, z_time = sample_power(rng, sp_prev - sk, t - sk, alpha0)
            spk = sk + u
            r, rp = sk - s_prev, spk - sp_prev
            xpk = xp_prev + (2.0 * rng.random(size) - 1.0) * rp
            c = x_prev - xpk
            z, z_sp = sample_power(rng, c - r, c + r, alpha)
            w *= z_time * 0.5 * rp * z_sp
            x_prev, xp_prev, s_prev, sp_prev = xpk + z, xpk, sk, spk
        return w

    return draw


@dataclass(frozen=True)
class MCConfig:
    samples: int = 1_000_000
    seed: int = 12345
    threads: int | None = None
    chunk_size: int = DEFAULT_CHUNK
    check_variance: bool = True


def gn_norm_mc(spec: ChaosKernelSpec, config: MCConfig = MCConfig()):
    """Monte Carlo estimate of ||g_n(., t, x)||^2 (Fourier normalisation), n = spec.order."""
    n, t, a0 = spec.order, spec.t, spec.alpha0
    if n > MAX_ORDER:
        raise InvalidParameter(f"Monte Carlo is limited to orders <= {MAX_ORDER}")
    alpha = riesz_exponent(spec)
    if t == 0:
        return Estimate(0.0, 0.0, int(config.samples), "monte-carlo")
    key = operation_key("gn_norm_mc", n=n, t=float(t), alpha0=float(a0), alpha=alpha)
    res = run_chunks(_kernel(n, float(t), a0, alpha), config.samples, config.seed, key,
                     chunk_size=config.chunk_size, threads=config.threads)
    if config.check_variance and not check_variance_decay(res):
        p = res.partial_stderr
        raise MCDiagnosticError("standard error does not shrink like N^-1/2",
                                ratios=[p[0] / x for x in p[1:]])
    scale = direct_to_fourier_factor(1, n)
    return Estimate(scale * res.mean, scale * res.stderr, res.samples, "monte-carlo")


def g1_norm_direct(t, alpha0, alpha, tol=1e-11):
    """||g_1(., t, x)||^2 for gamma = |x|^{-alpha} in d = 1 by 1-d quadrature in direct space."""
    if not 0.0 < alpha < 1.0 or not 0.0 <= alpha0 < 1.0:
        raise InvalidParameter("need 0 < alpha < 1 and 0 <= alpha0 < 1")
    c2 = (1.0 - alpha) * (2.0 - alpha)
    c3 = c2 * (3.0 - alpha)

    def h(z):
        return z ** (2.0 - alpha) / c2

    def k2(z):
        return z ** (3.0 - alpha) / c3

    def f(u):
        return 0.5 * (k2(2.0 * t - u) - k2(u)) - (t - u) * h(u)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        v, e = integrate.quad(f, 0.0, t, weight="alg", wvar=(-alpha0, 0.0), epsabs=0.0, epsrel=tol)
    scale = direct_to_fourier_factor(1)
    return Estimate(scale * v, scale * e, 0, "quadrature")


# ----------------------------------------------------------------- scaling


@dataclass
class ScalingReport:
    n: int
    alpha0: float
    alpha: float
    exponent: float
    reference: Estimate
    rows: list = field(default_factory=list)  # dicts per t
    status: str = "holds"
    recommendation: int | None = None

    def __bool__(self):
        return self.status == "holds"

    def to_dict(self):
        return dict(n=self.n, alpha0=self.alpha0, alpha=self.alpha, exponent=self.exponent,
                    reference=self.reference.to_dict(), rows=self.rows, status=self.status,
                    recommendation=self.recommendation)


def scaling_check(n, alpha0, alpha, times, config: MCConfig = MCConfig(), z_max=3.0,
                  max_rel_stderr=0.05):
    """Compare ||g_n(t)||^2 with t^{(4 - alpha - alpha0) n} ||g_n(1)||^2.

    Every time gets its own random stream, so the two estimates in a ratio
    are independent and the combined standard error is
    sqrt(se_t^2 + (t^e se_1)^2).
    """
    model = NoiseModel(to_spectral(riesz(alpha, 1)), alpha0)
    expo = (4.0 - alpha - alpha0) * n
    ref = gn_norm_mc(ChaosKernelSpec(n, 1.0, model), config)
    report = ScalingReport(n, alpha0, alpha, expo, ref)
    worst = ref.error / abs(ref.value)
    for t in times:
        est = gn_norm_mc(ChaosKernelSpec(n, float(t), model), config)
        factor = float(t) ** expo
        se = math.hypot(est.error, factor * ref.error)
        z = (est.value - factor * ref.value) / se
        ratio = est.value / ref.value
        report.rows.append(dict(t=float(t), estimate=est.value, stderr=est.error,
                                ratio=ratio, expected_ratio=factor,
                                relative_deviation=ratio / factor - 1.0, z=z))
        worst = max(worst, est.error / abs(est.value))
        if abs(z) > z_max:
            report.status = "violated"
    if worst > max_rel_stderr and report.status != "violated":
        report.status = "inconclusive"
        report.recommendation = int(math.ceil(config.samples * (worst / max_rel_stderr) ** 2))
    return report


# ------------------------------------------------------------------ series


@dataclass
class SeriesReport:
    """Diagnostic only: partial sums of an upper bound for E|u(t, x)|^2."""

    t: float
    w_sup: float
    terms: list
    term_errors: list
    partial_sums: list
    ratios: list
    note: str = "diagnostic, not a proof of convergence"

    def to_dict(self):
        return dict(t=self.t, w_sup=self.w_sup, terms=self.terms, term_errors=self.term_errors,
                    partial_sums=self.partial_sums, ratios=self.ratios, note=self.note)


def series_diagnostic(model, t, n_max=3, w_sup=1.0, config: MCConfig = MCConfig()):
    """Terms w_sup^2 n! ||g_n||^2 for n <= n_max, their partial sums and ratios.

    n = 0 contributes w_sup^2.  Order 1 is deterministic; higher orders use
    Monte Carlo and therefore need a 1-d Riesz model.
    """
    if not 0 <= n_max <= MAX_ORDER:
        raise InvalidParameter(f"n_max must lie in 0..{MAX_ORDER}")
    if not w_sup >= 0:
        raise InvalidParameter("w_sup must be non-negative")
    w2 = float(w_sup) ** 2
    terms, errs = [w2], [0.0]
    for n in range(1, n_max + 1):
        spec = ChaosKernelSpec(n, float(t), model)
        if t == 0:
            est = Estimate(0.0, 0.0)
        elif n == 1:
            est = first_chaos_norm(spec)
        else:
            est = gn_norm_mc(spec, config)
        f = w2 * math.factorial(n)
        terms.append(f * est.value)
        errs.append(f * est.error)
    partial = list(np.cumsum(terms))
    ratios = [b / a if a > 0 else None for a, b in zip(terms[1:], terms[2:])]
    return SeriesReport(float(t), float(w_sup), terms, errs, [float(x) for x in partial], ratios)
