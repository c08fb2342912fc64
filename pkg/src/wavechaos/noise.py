"""Finite Gaussian families W(phi_1), ..., W(phi_m) over an atomic spectral measure.

Test functions are given in spatial Fourier form on the atoms.  Their
covariance is the noise inner product

    <phi, psi> = sum_j w_j int int |r-s|^{-alpha0} phi^(r, xi_j) conj(psi^(s, xi_j)) dr ds,

evaluated per atom with the substitution u = r - s, which turns the time
singularity into a weight u^{-alpha0} against the cross-correlation of the
two time profiles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from . import quadrature as qd
from .chaosnorm.first import ChaosKernelSpec, first_chaos_norm_time
from .errors import InvalidGram, InvalidParameter, UnsupportedEvaluation
from .rng import DEFAULT_CHUNK, chunk_plan, operation_key, stream
from .spectral import NoiseModel

MAX_ATOMS = 64
PSD_TOL = 1e-10


@dataclass(frozen=True)
class TestFunction:
    """phi^(s, xi) = time(s, |xi|) * spatial(xi) on a time support [a, b].

    ``kind="kernel"`` is the first-chaos kernel G_{t-s}(x - .) 1_{[0,t]}(s):
    time profile sin((t-s)|xi|)/|xi| and spatial factor exp(-i xi.x).
    ``kind="separable"`` has a polynomial time profile (coefficients in
    increasing powers of s) and a spatial factor that is either an array
    aligned with the atoms or a callable of xi.
    """

    __test__ = False  # not a pytest class

    kind: str
    support: tuple
    t: float | None = None
    x: tuple | None = None
    poly: tuple = (1.0,)
    spatial: object = None

    def __post_init__(self):
        a, b = self.support
        if not (math.isfinite(a) and math.isfinite(b)) or b < a:
            raise InvalidParameter("time support must be a finite interval [a, b]")
        if self.kind == "kernel":
            if self.t is None or not self.t >= 0:
                raise InvalidParameter("kernel test functions need t >= 0")
        elif self.kind == "separable":
            if self.spatial is None:
                raise InvalidParameter("separable test functions need a spatial factor")
        else:
            raise InvalidParameter(f"unknown test function kind {self.kind!r}")

    def time_profile(self, s, k):
        s = np.asarray(s, dtype=float)
        if self.kind == "kernel":
            return (self.t - s) * np.sinc((self.t - s) * k / np.pi)
        return np.polynomial.polynomial.polyval(s, self.poly)

    def frequency(self, k):
        """Rough angular frequency of the time profile, used to size panels."""
        if self.kind == "kernel":
            return float(k)
        return float(len(self.poly))

    def spatial_values(self, atoms):
        atoms = np.atleast_2d(atoms)
        if self.kind == "kernel":
            x = np.zeros(atoms.shape[1]) if self.x is None else np.asarray(self.x, dtype=float)
            if x.shape != (atoms.shape[1],):
                raise InvalidParameter("spatial point has the wrong dimension")
            return np.exp(-1j * atoms @ x)
        if callable(self.spatial):
            return np.asarray(self.spatial(atoms), dtype=complex)
        vals = np.asarray(self.spatial, dtype=complex)
        if vals.shape != (atoms.shape[0],):
            raise InvalidParameter("spatial coefficients must be aligned with the atoms")
        return vals


def chaos_kernel(t, x=None):
    """The kernel of W(f_1(., t, x)) for w = 1."""
    return TestFunction("kernel", (0.0, float(t)), t=float(t), x=None if x is None else tuple(x))


def separable(support, poly, spatial):
    return TestFunction("separable", tuple(map(float, support)), poly=tuple(poly), spatial=spatial)


def _cuts(lo, hi, freq, n):
    # panels short enough that n Gauss nodes resolve an oscillation of ``freq``
    m = max(1, int(math.ceil((hi - lo) * freq / (0.25 * n))))
    return np.linspace(lo, hi, m + 1)


def _cross(f, g, u, n):
    """A(u) = int f(s + u) g(s) ds for each u; f, g are (profile, a, b, freq)."""
    pf, af, bf, wf = f
    pg, ag, bg, wg = g
    out = np.zeros(len(u))
    for i, uu in enumerate(u):
        lo, hi = max(ag, af - uu), min(bg, bf - uu)
        if hi <= lo:
            continue
        s, w = qd.panels(_cuts(lo, hi, max(wf, wg), n), n)
        out[i] = np.dot(w, pf(s + uu) * pg(s))
    return out


def _u_integral(f, g, alpha0, n):
    """int_0^inf u^{-alpha0} A_fg(u) du."""
    pf, af, bf, wf = f
    pg, ag, bg, wg = g
    top = bf - ag
    if top <= 0:
        return 0.0
    brk = sorted({0.0, top} | {x for x in (af - ag, af - bg, bf - bg) if 0.0 < x < top})
    freq = max(wf, wg)
    total = 0.0
    for lo, hi in zip(brk[:-1], brk[1:]):
        edges = _cuts(lo, hi, freq, n)
        if 0.0 < lo < edges[1] - lo:
            # grade geometrically so u^{-alpha0} is smooth on every panel
            grade = lo * 2.0 ** np.arange(1, int(math.log2((edges[1]) / lo)) + 1)
            edges = np.concatenate(([lo], grade[grade < edges[1]], edges[1:]))
        for j, (a, b) in enumerate(zip(edges[:-1], edges[1:])):
            if a == 0.0:
                u, w = qd.jacobi_rule(b, alpha0, n=n)
            else:
                u, w = qd.panels([a, b], n)
                w = w * u ** -alpha0
            total += np.dot(w, _cross(f, g, u, n))
    return total


def time_bilinear(f, g, alpha0, n=16):
    """int int |r-s|^{-alpha0} f(r) g(s) dr ds for smooth profiles on intervals.

    ``f`` and ``g`` are tuples ``(profile, a, b, freq)``.
    """
    if alpha0 == 0:
        pf, af, bf, wf = f
        pg, ag, bg, wg = g
        if bf <= af or bg <= ag:
            return 0.0
        x1, w1 = qd.panels(_cuts(af, bf, wf, n), n)
        x2, w2 = qd.panels(_cuts(ag, bg, wg, n), n)
        return float(np.dot(w1, pf(x1)) * np.dot(w2, pg(x2)))
    return float(_u_integral(f, g, alpha0, n) + _u_integral(g, f, alpha0, n))


def _require_atomic(model):
    mu = model.measure
    if mu.kind != "atomic":
        raise UnsupportedEvaluation("sampling needs an atomic measure; discretize continuous ones first")
    return mu


def inner_product(phi: TestFunction, psi: TestFunction, model: NoiseModel, n=16):
    """<phi, psi> in the noise Hilbert space over an atomic measure."""
    mu = _require_atomic(model)
    a0 = model.alpha0
    sp_phi = phi.spatial_values(mu.atoms)
    sp_psi = psi.spatial_values(mu.atoms)
    coef = mu.weights * sp_phi * np.conj(sp_psi)
    norms = mu.norms
    uniq, inv = np.unique(norms, return_inverse=True)
    times = np.empty(len(uniq))
    for i, k in enumerate(uniq):
        f = (lambda s, k=k: phi.time_profile(s, k), *phi.support, phi.frequency(k))
        g = (lambda s, k=k: psi.time_profile(s, k), *psi.support, psi.frequency(k))
        times[i] = time_bilinear(f, g, a0, n)
    total = np.sum(coef * times[inv])
    # conjugate-symmetric profiles over a symmetric measure give a real number
    return float(total.real)


@dataclass(frozen=True)
class GramMatrix:
    matrix: np.ndarray
    labels: tuple = ()
    quadrature_nodes: int = 16

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidGram("Gram matrix must be square")
        if not np.allclose(m, m.T, rtol=1e-12, atol=1e-14 * max(1.0, np.abs(m).max())):
            raise InvalidGram("Gram matrix is not symmetric")
        object.__setattr__(self, "matrix", 0.5 * (m + m.T))

    @property
    def size(self):
        return self.matrix.shape[0]

    def to_dict(self):
        return {"matrix": self.matrix.tolist(), "labels": list(self.labels),
                "quadrature_nodes": self.quadrature_nodes}


def build_gram(functions, model: NoiseModel, labels=(), n=16):
    m = len(functions)
    g = np.empty((m, m))
    for i in range(m):
        for j in range(i, m):
            g[i, j] = g[j, i] = inner_product(functions[i], functions[j], model, n)
    return GramMatrix(g, tuple(labels), n)


def gram_root(gram: GramMatrix):
    """Symmetric square root and the largest clipped negative eigenvalue.

    Raises InvalidGram when an eigenvalue is below -PSD_TOL * trace.
    """
    vals, vecs = np.linalg.eigh(gram.matrix)
    trace = max(float(np.trace(gram.matrix)), 0.0)
    if vals.min() < -PSD_TOL * max(trace, 1e-300):
        raise InvalidGram(f"Gram matrix is indefinite: eigenvalue {vals.min():.3g}, trace {trace:.3g}")
    clipped = float(max(0.0, -vals.min()))
    root = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.T
    return root, clipped


def sample_gaussian_family(gram: GramMatrix, n_samples, seed, chunk_size=DEFAULT_CHUNK, op="gaussian-family"):
    """``n_samples`` x m centred Gaussian vectors with covariance ``gram``.

    Standard normals come from the chunked counter-based streams, so the
    output only depends on the seed and the chunk size.
    """
    root, _ = gram_root(gram)
    key = operation_key(op, size=gram.size)
    out = []
    for i, size in enumerate(chunk_plan(n_samples, chunk_size)):
        z = stream(seed, key, i).standard_normal((size, gram.size))
        out.append(z @ root)
    if not out:
        return np.zeros((0, gram.size))
    return np.concatenate(out)


def covariance_check(gram: GramMatrix, n_samples, seed, z_max=4.0):
    """Entrywise z-scores of the empirical covariance against ``gram``."""
    x = sample_gaussian_family(gram, n_samples, seed)
    n = x.shape[0]
    prod = x[:, :, None] * x[:, None, :]
    emp = prod.mean(axis=0)
    se = prod.std(axis=0, ddof=1) / math.sqrt(n)
    z = np.where(se > 0, (emp - gram.matrix) / np.where(se > 0, se, 1.0), 0.0)
    return {"empirical": emp.tolist(), "stderr": se.tolist(), "max_abs_z": float(np.abs(z).max()),
            "ok": bool(np.abs(z).max() <= z_max)}


@dataclass
class VarianceReport:
    t: float
    samples: int
    seed: int
    norm_quadrature: float
    norm_gram: float
    norm_empirical: float
    stderr: float
    z: float
    status: str
    gram: GramMatrix | None = None
    clipped: float = 0.0
    times: list = field(default_factory=list)

    def __bool__(self):
        return self.status == "ok"

    def to_dict(self):
        return dict(t=self.t, samples=self.samples, seed=self.seed,
                    norm_quadrature=self.norm_quadrature, norm_gram=self.norm_gram,
                    norm_empirical=self.norm_empirical, stderr=self.stderr, z=self.z,
                    status=self.status, clipped=self.clipped, times=self.times,
                    gram=None if self.gram is None else self.gram.to_dict())


def first_chaos_variance_check(model: NoiseModel, t, n_samples=1_000_000, seed=12345,
                               fractions=(0.25, 0.5, 0.75, 1.0), z_max=4.0, x=None):
    """Empirical variance of W(f_1(., t, x)) against the deterministic norm.

    The kernels at times t * fractions are sampled jointly through their Gram
    matrix; the last one is the variable of interest.
    """
    mu = _require_atomic(model)
    if len(mu.weights) > MAX_ATOMS:
        raise InvalidParameter(f"variance check is limited to {MAX_ATOMS} atoms")
    if not t >= 0:
        raise InvalidParameter("t must be non-negative")
    times = [float(t) * f for f in fractions]
    funcs = [chaos_kernel(s, x) for s in times]
    gram = build_gram(funcs, model, labels=[f"f1(t={s:g})" for s in times])
    _, clipped = gram_root(gram)
    quad = first_chaos_norm_time(ChaosKernelSpec(1, float(t), model)).value if t > 0 else 0.0
    xs = sample_gaussian_family(gram, n_samples, seed, op="first-chaos-variance")[:, -1]
    m2 = float(np.mean(xs ** 2))
    m4 = float(np.mean(xs ** 4))
    n = xs.size
    se = math.sqrt(max(m4 - m2 * m2, 0.0) / n)
    if se > 0:
        z = (m2 - quad) / se
    else:
        z = 0.0 if m2 == quad else math.inf
    status = "ok" if abs(z) <= z_max else "check-failed"
    return VarianceReport(float(t), n, int(seed), quad, float(gram.matrix[-1, -1]), m2, se, z,
                          status, gram, clipped, times)
