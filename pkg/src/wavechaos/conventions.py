"""Fourier conventions and the normalising constants derived from them.

Every constant in the package is computed under

    F f(xi) = int exp(-i xi.x) f(x) dx,

with the spectral measure of a covariance taken as ``mu = F gamma``.  The
Hilbert-space inner product of the noise is *defined* by its Fourier form

    <phi, psi> = int int |r-s|^{-alpha0} int phi^(r, xi) conj(psi^(s, xi)) mu(dxi) dr ds,

which equals ``(2 pi)^d`` times the direct-space double integral against
``gamma``.  Monte Carlo routines working in direct space multiply by
``direct_to_fourier_factor`` before reporting.
"""

import math

from scipy import special

CONSTANTS_VERSION = "wavechaos-constants/1"

WHITE_NOISE_DENSITY = 1.0


def riesz_constant(alpha, d):
    """C such that F(|x|^{-alpha}) = C |xi|^{alpha-d} in dimension d."""
    if not 0.0 < alpha < d:
        raise ValueError(f"Riesz exponent must lie in (0, {d}), got {alpha}")
    return (2.0 ** (d - alpha) * math.pi ** (d / 2.0)
            * special.gamma((d - alpha) / 2.0) / special.gamma(alpha / 2.0))


def temporal_constant(alpha0):
    """c such that int int |r-s|^{-a0} f(r) f(s) = c int |lam|^{a0-1} |int e^{i lam s} f|^2.

    Comes from F(|t|^{-a0}) = 2 Gamma(1-a0) sin(pi a0 / 2) |lam|^{a0-1}
    and Plancherel's 1/(2 pi).
    """
    if not 0.0 < alpha0 < 1.0:
        raise ValueError("temporal constant needs alpha0 in (0, 1)")
    return special.gamma(1.0 - alpha0) * math.sin(math.pi * alpha0 / 2.0) / math.pi


def sheet_constant(hurst):
    """Spectral constant of prod_j |x_j|^{-(2-2H_j)}."""
    c = 1.0
    for h in hurst:
        c *= riesz_constant(2.0 - 2.0 * h, 1)
    return c


def sphere_area(d):
    """Surface measure of the unit sphere in R^d (2 points when d = 1)."""
    return 2.0 * math.pi ** (d / 2.0) / special.gamma(d / 2.0)


def ball_volume(d):
    return math.pi ** (d / 2.0) / special.gamma(d / 2.0 + 1.0)


def direct_to_fourier_factor(d, n=1):
    return (2.0 * math.pi) ** (d * n)


def constants_table():
    """Plain-data summary embedded in every CLI report."""
    return {
        "version": CONSTANTS_VERSION,
        "fourier_transform": "F f(xi) = int exp(-i xi.x) f(x) dx",
        "spectral_measure": "mu = F gamma",
        "inner_product": "Fourier form; equals (2pi)^d x direct-space form",
        "white_noise_density": WHITE_NOISE_DENSITY,
        "riesz_constant": "2^(d-a) pi^(d/2) Gamma((d-a)/2) / Gamma(a/2)",
        "temporal_constant": "Gamma(1-a0) sin(pi a0/2) / pi",
        "delta_comb": "mu = sum_{k in Z^d} delta_{a k}, gamma = a^-d sum_j delta_{2 pi j / a}",
    }
