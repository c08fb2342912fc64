"""Fixed quadrature rules: Gauss-Legendre panels, graded rules for algebraic
endpoint singularities, and product rules on spheres."""

from functools import lru_cache
import math

import numpy as np
from scipy import special


@lru_cache(maxsize=None)
def _legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=None)
def laguerre(n):
    x, w = special.roots_laguerre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panels(edges, n=16):
    """Gauss-Legendre with ``n`` nodes on each interval of ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = _legendre(n)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * x).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def uniform_panels(a, b, count, n=16):
    return panels(np.linspace(a, b, int(count) + 1), n)


def graded_edges(a, b, levels=30):
    """Edges a, a + h 2^-levels, ..., a + h/2, b (geometric towards ``a``)."""
    h = b - a
    return a + h * np.concatenate(([0.0], 2.0 ** -np.arange(levels, -1, -1.0)))


def singular_rule(h, beta, levels=30, n=10):
    """Nodes/weights for int_0^h x^{-beta} F(x) dx with beta < 1.

    Uses x = v^{1/(1-beta)} so the weight becomes constant, then grades the
    panels in v towards zero where F(v^{1/(1-beta)}) loses smoothness.
    The returned weights already include x^{-beta}.
    """
    if beta >= 1.0:
        raise ValueError("need beta < 1 for an integrable endpoint singularity")
    p = 1.0 / (1.0 - beta)
    v, wv = panels(graded_edges(0.0, h ** (1.0 - beta), levels), n)
    return v ** p, wv * p


def jacobi_rule(h, beta, n=20):
    """Gauss-Jacobi nodes/weights for int_0^h x^{-beta} F(x) dx, F smooth, -1 < beta < 1."""
    if not -1.0 < beta < 1.0:
        raise ValueError("Gauss-Jacobi needs -1 < beta < 1")
    y, w = special.roots_jacobi(n, 0.0, -beta)
    return 0.5 * h * (y + 1.0), w * (0.5 * h) ** (1.0 - beta)


def sphere_rule(d, n=32):
    """Directions and weights on S^{d-1}; weights sum to the surface area."""
    if d == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    if d == 2:
        m = 2 * n
        th = 2.0 * np.pi * (np.arange(m) + 0.5) / m
        return np.stack([np.cos(th), np.sin(th)], axis=1), np.full(m, 2.0 * np.pi / m)
    if d == 3:
        z, wz = _legendre(n)
        m = 2 * n
        ph = 2.0 * np.pi * (np.arange(m) + 0.5) / m
        zz, pp = np.meshgrid(z, ph, indexing="ij")
        rho = np.sqrt(1.0 - zz ** 2)
        dirs = np.stack([rho * np.cos(pp), rho * np.sin(pp), zz], axis=-1).reshape(-1, 3)
        w = (wz[:, None] * np.full(m, 2.0 * np.pi / m)[None, :]).ravel()
        return dirs, w
    raise ValueError(f"unsupported dimension {d}")


def tail_rule(a, power_hint=2.0, n=32):
    """Nodes/weights for int_a^inf F(x) dx when F decays like x^{-power_hint}.

    Substitutes x = a / y^q with q chosen so the transformed integrand is
    bounded at y = 0.
    """
    q = 1.0 / max(power_hint - 1.0, 0.25)
    y, wy = panels(graded_edges(0.0, 1.0, 12), n // 2 if n > 8 else n)
    x = a * y ** (-q)
    w = wy * a * q * y ** (-q - 1.0)
    return x, w


def fsum_ordered(values):
    return math.fsum(values)
