"""Per-frequency first-chaos norms.

For a single spatial mode of modulus k the first chaos norm reduces to

    N(k) = int_0^t int_0^t |r - s|^{-alpha0} sin(rk)/k sin(sk)/k dr ds,

and the full norm is int N(|xi|) mu(dxi).  Three independent evaluations
are provided: a time-domain one (``mode_norm_time``), a frequency-domain
one (``mode_norm_fourier``) and the alpha0 = 0 closed form.
"""

import math

import numpy as np
from scipy import special

from .. import quadrature as qd
from ..conventions import temporal_constant
from ..errors import InvalidParameter, UnsupportedEvaluation
from ..wavekernel import ghat_radial, time_fourier_sine

LARGE_KT = 4.0


def _as_k(k):
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(k < 0):
        raise InvalidParameter("mode modulus must be non-negative")
    return k


def mode_norm_closed(k, t):
    """(1 - cos(kt))^2 / k^4, written as ((t^2/2) sinc(kt/2pi)^2)^2."""
    k = np.asarray(k, dtype=float)
    return (0.5 * t * t * np.sinc(k * t / (2.0 * np.pi)) ** 2) ** 2


def _j_integral(beta, k, t, n=64):
    """int_0^t u^{-beta} e^{iku} du for kt >= LARGE_KT (beta < 1).

    The integral to infinity is a Gamma function; the piece beyond t is
    taken along the vertical ray u = t + i x/k with Gauss-Laguerre.
    """
    x, w = qd.laguerre(n)
    k = np.asarray(k, dtype=float)
    head = special.gamma(1.0 - beta) * np.exp(0.5j * np.pi * (1.0 - beta)) * k ** (beta - 1.0)
    z = t + 1j * x[None, :] / k[:, None]
    tail = 1j * np.exp(1j * k * t) / k * (z ** (-beta) @ w)
    return head - tail


def _mode_time_large(k, t, a0, n=64):
    j0 = _j_integral(a0, k, t, n)
    j1 = _j_integral(a0 - 1.0, k, t, n)
    c0, s0, c1 = j0.real, j0.imag, j1.real
    return ((t * c0 - c1) / k ** 2
            - (np.sin(2 * k * t) * c0 - (np.cos(2 * k * t) + 1.0) * s0) / (2.0 * k ** 3))


def _mode_time_small(k, t, a0, n_u=24, n_s=20):
    # N = 2 int_0^t u^{-a0} A(u) du with A(u) = int_0^{t-u} G_{s+u} G_s ds;
    # A is entire in u, so Gauss-Jacobi carries the u^{-a0} weight exactly
    u, wu = qd.jacobi_rule(t, a0, n=n_u)
    xs, ws = qd._legendre(n_s)
    span = t - u
    s = 0.5 * span[:, None] * (xs[None, :] + 1.0)
    wss = 0.5 * span[:, None] * ws[None, :]
    out = np.empty(k.shape)
    for i, kk in enumerate(k):
        prod = ghat_radial(s + u[:, None], kk) * ghat_radial(s, kk)
        out[i] = 2.0 * np.dot(wu, np.sum(prod * wss, axis=1))
    return out


def mode_norm_time(k, t, alpha0, fine=False):
    """Time-domain N(k); vectorised in ``k``."""
    if not 0.0 <= alpha0 < 1.0:
        raise InvalidParameter("alpha0 must lie in [0, 1)")
    k = _as_k(k)
    if t == 0:
        return np.zeros(k.shape)
    out = np.empty(k.shape)
    big = k * t >= LARGE_KT
    if np.any(big):
        out[big] = _mode_time_large(k[big], t, alpha0, n=80 if fine else 64)
    if np.any(~big):
        if fine:
            out[~big] = _mode_time_small(k[~big], t, alpha0, n_u=32, n_s=26)
        else:
            out[~big] = _mode_time_small(k[~big], t, alpha0)
    return out


def mode_asymptotic(k, t, alpha0):
    """Non-oscillating part of N(k) for large k: a1 k^{a0-3} + a2 k^{a0-4}."""
    a1, a2 = asymptotic_coefficients(t, alpha0)
    k = np.asarray(k, dtype=float)
    return a1 * k ** (alpha0 - 3.0) + a2 * k ** (alpha0 - 4.0)


def asymptotic_coefficients(t, alpha0):
    a1 = t * special.gamma(1.0 - alpha0) * math.sin(math.pi * alpha0 / 2.0)
    a2 = math.cos(math.pi * alpha0 / 2.0) * (special.gamma(2.0 - alpha0)
                                             + 0.5 * special.gamma(1.0 - alpha0))
    return a1, a2


# ------------------------------------------------------------ Fourier route


def _tail_parts(lam, k, t):
    """Split |I(lam)|^2 for lam > k into a smooth part and cos/sin coefficients."""
    d = lam * lam - k * k
    sk = t * np.sinc(k * t / np.pi)  # sin(kt)/k
    smooth = 2.0 / d ** 2 + sk * sk / d
    cos_coef = -2.0 * math.cos(k * t) / d ** 2
    sin_coef = -2.0 * lam * sk / d ** 2
    return smooth, cos_coef, sin_coef


def _fourier_tail(k, t, a0, lam0, terms=16):
    """int_{lam0}^inf lam^{a0-1} |I(lam)|^2 dlam for lam0 >= 20 k.

    The smooth part is summed from its expansion in (k/lam)^2; the two
    oscillating parts get one integration by parts, whose remainder is the
    returned error bound.
    """
    q = (k / lam0) ** 2
    sk = t * np.sinc(k * t / np.pi)
    j = np.arange(terms)
    smooth = np.sum(q ** j * (2.0 * (j + 1) * lam0 ** (a0 - 4.0) / (4.0 + 2 * j - a0)
                              + sk * sk * lam0 ** (a0 - 2.0) / (2.0 + 2 * j - a0)))
    _, cc, sc = _tail_parts(lam0, k, t)
    g_c = lam0 ** (a0 - 1.0) * cc
    g_s = lam0 ** (a0 - 1.0) * sc
    osc = -g_c * math.sin(lam0 * t) / t + g_s * math.cos(lam0 * t) / t
    err = 6.0 * (abs(g_c) + abs(g_s)) / (lam0 * t * t) + abs(smooth) * q ** terms
    return smooth + osc, err


def _fourier_single(k, t, a0, n):
    c = temporal_constant(a0)
    width = 0.5 * math.pi / t
    h = 0.5 / t
    lam_max = max(20.0 * k, 200.0 / t)
    x0, w0 = qd.singular_rule(h, 1.0 - a0, levels=30, n=max(8, n // 2))
    count = int(math.ceil((lam_max - h) / width))
    x1, w1 = qd.uniform_panels(h, h + count * width, count, n)
    lam_top = h + count * width
    body = np.dot(w0, np.abs(time_fourier_sine(t, x0, k)) ** 2)
    body += np.dot(w1 * x1 ** (a0 - 1.0), np.abs(time_fourier_sine(t, x1, k)) ** 2)
    tail, terr = _fourier_tail(k, t, a0, lam_top)
    return 2.0 * c * (body + tail), 2.0 * c * terr


def mode_norm_fourier(k, t, alpha0, with_error=False, paired=True):
    """Frequency-domain N(k) = c 2 int_0^inf lam^{a0-1} |int_0^t e^{i lam s} sin(ks)/k ds|^2 dlam.

    With ``with_error`` the error bound adds the tail remainder and, when
    ``paired``, the difference between 16- and 24-node panel rules.
    """
    if not 0.0 < alpha0 < 1.0:
        raise UnsupportedEvaluation("the frequency route needs 0 < alpha0 < 1; "
                                    "use the closed form at alpha0 = 0")
    k = _as_k(k)
    vals = np.empty(k.shape)
    errs = np.empty(k.shape)
    for i, kk in enumerate(k):
        if t == 0:
            vals[i], errs[i] = 0.0, 0.0
            continue
        a, ea = _fourier_single(kk, t, alpha0, 16)
        if with_error and paired:
            b, eb = _fourier_single(kk, t, alpha0, 24)
            vals[i], errs[i] = b, abs(a - b) + ea + eb
        else:
            vals[i], errs[i] = a, ea
    return (vals, errs) if with_error else vals
