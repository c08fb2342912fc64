"""Spatial covariances gamma and their spectral measures mu.

A covariance is described by a :class:`CovarianceDescriptor` from a small
catalog (Riesz, white noise, fractional sheet, delta comb) and mapped to a
:class:`SpectralMeasure` by :func:`to_spectral`.  Spectral measures come in
three kinds:

``continuous-density``
    a density on R^d together with its angular integral
    ``shell_density(r) = r^{d-1} int_{S^{d-1}} density(r w) dw``, so that
    ``mu(B(0, R)) = int_0^R shell_density(r) dr``;
``atomic``
    a finite, symmetric list of atoms, optionally the truncation of an
    infinite lattice at a declared radius;
``homogeneous-radial``
    known only through ``mu(B(0, r)) = r^alpha mu(B(0, 1))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings
from typing import Callable

import numpy as np
from scipy import integrate, special

from . import quadrature as qd
from .conventions import (WHITE_NOISE_DENSITY, ball_volume, riesz_constant,
                          sheet_constant, sphere_area)
from .errors import (InvalidParameter, QuadratureError, SingularityError,
                     UnsupportedEvaluation)

SCHEMA = "wavechaos.spectral/1"
KINDS = ("continuous-density", "atomic", "homogeneous-radial")
COVARIANCE_KINDS = ("riesz", "white-noise", "fractional-sheet", "delta-comb")


def _check_dimension(d):
    if d not in (1, 2, 3):
        raise InvalidParameter(f"dimension must be 1, 2 or 3, got {d!r}")


@dataclass(frozen=True)
class CovarianceDescriptor:
    kind: str
    dimension: int
    alpha: float | None = None
    hurst: tuple | None = None
    spacing: float | None = None

    def __post_init__(self):
        _check_dimension(self.dimension)
        d = self.dimension
        if self.kind == "riesz":
            if self.alpha is None or not 0.0 < self.alpha < d:
                raise InvalidParameter(f"riesz needs 0 < alpha < {d}, got {self.alpha}")
        elif self.kind == "fractional-sheet":
            if self.hurst is None or len(self.hurst) != d:
                raise InvalidParameter(f"fractional-sheet needs {d} Hurst indices")
            if any(not 0.5 < h < 1.0 for h in self.hurst):
                raise InvalidParameter(f"Hurst indices must lie in (1/2, 1), got {self.hurst}")
            object.__setattr__(self, "hurst", tuple(float(h) for h in self.hurst))
        elif self.kind == "delta-comb":
            if self.spacing is None or not self.spacing > 0:
                raise InvalidParameter("delta-comb needs a positive lattice spacing")
        elif self.kind != "white-noise":
            raise InvalidParameter(f"unknown covariance kind {self.kind!r}")

    @property
    def homogeneity_order(self):
        if self.kind == "riesz":
            return float(self.alpha)
        if self.kind == "white-noise":
            return float(self.dimension)
        if self.kind == "fractional-sheet":
            return float(sum(2.0 - 2.0 * h for h in self.hurst))
        return None

    def to_dict(self):
        out = {"kind": self.kind, "dimension": self.dimension}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        if self.hurst is not None:
            out["hurst"] = list(self.hurst)
        if self.spacing is not None:
            out["spacing"] = self.spacing
        return out

    @classmethod
    def from_dict(cls, data):
        hurst = data.get("hurst")
        return cls(kind=data["kind"], dimension=int(data["dimension"]),
                   alpha=data.get("alpha"), hurst=tuple(hurst) if hurst is not None else None,
                   spacing=data.get("spacing"))


def riesz(alpha, d):
    return CovarianceDescriptor("riesz", d, alpha=float(alpha))


def white_noise(d):
    return CovarianceDescriptor("white-noise", d)


def fractional_sheet(hurst):
    hurst = tuple(hurst)
    return CovarianceDescriptor("fractional-sheet", len(hurst), hurst=hurst)


def delta_comb(spacing, d):
    return CovarianceDescriptor("delta-comb", d, spacing=float(spacing))


@dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Immutable description of a spectral measure on R^d."""

    dimension: int
    kind: str
    density: Callable | None = None
    shell_density: Callable | None = None
    atoms: np.ndarray | None = None
    weights: np.ndarray | None = None
    homogeneity_order: float | None = None
    unit_ball_mass: float | None = None
    truncation_radius: float | None = None
    radial: bool = False
    source: dict | None = field(default=None)

    def __post_init__(self):
        _check_dimension(self.dimension)
        d = self.dimension
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown measure kind {self.kind!r}")
        if self.homogeneity_order is not None:
            a = float(self.homogeneity_order)
            if not 0.0 < a <= d:
                # a homogeneous measure of negative spatial order vanishes
                raise InvalidParameter(f"homogeneity order must lie in (0, {d}], got {a}")
            if self.unit_ball_mass is None or self.unit_ball_mass < 0:
                raise InvalidParameter("homogeneous measures need unit_ball_mass >= 0")
        if self.kind == "continuous-density":
            if self.density is None:
                raise InvalidParameter("continuous-density needs a density")
            if self.shell_density is None:
                object.__setattr__(self, "shell_density", _angular_shell_density(self.density, d))
            _probe_symmetry(self.density, d)
        elif self.kind == "atomic":
            atoms = np.atleast_2d(np.asarray(self.atoms, dtype=float))
            if d == 1 and atoms.shape[0] == 1 and atoms.shape[1] != 1:
                atoms = atoms.T
            weights = np.asarray(self.weights, dtype=float).ravel()
            if atoms.shape != (weights.size, d):
                raise InvalidParameter(f"atoms must have shape (K, {d}) matching weights")
            if np.any(weights <= 0):
                raise InvalidParameter("atom weights must be positive")
            _check_atom_symmetry(atoms, weights)
            atoms.setflags(write=False)
            weights.setflags(write=False)
            object.__setattr__(self, "atoms", atoms)
            object.__setattr__(self, "weights", weights)
        elif self.homogeneity_order is None:
            raise InvalidParameter("homogeneous-radial measures need homogeneity_order")

    @property
    def alpha(self):
        return self.homogeneity_order

    @property
    def norms(self):
        """Atom moduli |xi_k| (atomic kind only)."""
        return np.linalg.norm(self.atoms, axis=1)

    def to_dict(self):
        out = {"schema": SCHEMA, "dimension": self.dimension, "kind": self.kind}
        if self.kind == "atomic":
            params = {"atoms": self.atoms.tolist(), "weights": self.weights.tolist()}
            if self.truncation_radius is not None:
                params["truncation_radius"] = self.truncation_radius
        elif self.kind == "homogeneous-radial":
            params = {}
        else:
            if self.source is None:
                raise UnsupportedEvaluation("only catalog densities can be serialised")
            params = {"covariance": self.source}
        if self.homogeneity_order is not None:
            params["homogeneity_order"] = self.homogeneity_order
            params["unit_ball_mass"] = self.unit_ball_mass
        if self.source is not None and self.kind == "atomic":
            params["covariance"] = self.source
        out["params"] = params
        return out


def _angular_shell_density(density, d, n=24):
    dirs, w = qd.sphere_rule(d, n)

    def shell(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        pts = r[:, None, None] * dirs[None, :, :]
        vals = np.asarray(density(pts.reshape(-1, d)), dtype=float).reshape(r.size, -1)
        return r ** (d - 1) * (vals @ w)

    return shell


def _probe_symmetry(density, d):
    rng = np.random.default_rng(7)
    pts = rng.normal(size=(16, d)) * 1.7
    a = np.asarray(density(pts), dtype=float)
    b = np.asarray(density(-pts), dtype=float)
    if np.any(a < 0) or not np.allclose(a, b, rtol=1e-10, atol=0.0):
        raise InvalidParameter("density must be non-negative and symmetric under xi -> -xi")


def _check_atom_symmetry(atoms, weights):
    def canon(pts):
        key = np.round(pts, 9) + 0.0
        order = np.lexsort(key.T[::-1])
        return key[order], weights[order]

    p, wp = canon(atoms)
    m, wm = canon(-atoms)
    if not (np.array_equal(p, m) and np.allclose(wp, wm, rtol=1e-12)):
        raise InvalidParameter("atomic measures must be symmetric: (xi, m) requires (-xi, m)")


def atomic(atoms, weights, dimension=None, truncation_radius=None, source=None):
    atoms = np.asarray(atoms, dtype=float)
    if atoms.ndim == 1:
        atoms = atoms[:, None]
    d = dimension if dimension is not None else atoms.shape[1]
    return SpectralMeasure(d, "atomic", atoms=atoms, weights=weights,
                           truncation_radius=truncation_radius, source=source)


def homogeneous(alpha, unit_ball_mass, dimension):
    return SpectralMeasure(dimension, "homogeneous-radial", homogeneity_order=float(alpha),
                           unit_ball_mass=float(unit_ball_mass))


def to_spectral(cov, r_max=None):
    """Spectral measure of a catalog covariance.

    ``r_max`` is the truncation radius for delta combs and is required there.
    """
    d = cov.dimension
    alpha = cov.homogeneity_order
    if cov.kind == "riesz":
        c = riesz_constant(alpha, d)
        expo = alpha - d

        def density(xi):
            return c * np.linalg.norm(np.atleast_2d(xi), axis=-1) ** expo

        def shell(r):
            return c * sphere_area(d) * np.asarray(r, dtype=float) ** (alpha - 1.0)

        return SpectralMeasure(d, "continuous-density", density=density, shell_density=shell,
                               homogeneity_order=alpha, unit_ball_mass=c * sphere_area(d) / alpha,
                               radial=True, source=cov.to_dict())
    if cov.kind == "white-noise":
        def density(xi):
            return np.full(np.atleast_2d(xi).shape[0], WHITE_NOISE_DENSITY)

        def shell(r):
            return WHITE_NOISE_DENSITY * sphere_area(d) * np.asarray(r, dtype=float) ** (d - 1)

        return SpectralMeasure(d, "continuous-density", density=density, shell_density=shell,
                               homogeneity_order=float(d),
                               unit_ball_mass=WHITE_NOISE_DENSITY * ball_volume(d),
                               radial=True, source=cov.to_dict())
    if cov.kind == "fractional-sheet":
        expos = np.array([1.0 - 2.0 * h for h in cov.hurst])
        c = sheet_constant(cov.hurst)
        # int_{S^{d-1}} prod |w_j|^{a_j} dw = 2 prod Gamma((a_j+1)/2) / Gamma(alpha/2)
        angular = 2.0 * np.prod(special.gamma((expos + 1.0) / 2.0)) / special.gamma(alpha / 2.0)

        def density(xi):
            xi = np.abs(np.atleast_2d(xi))
            return c * np.prod(xi ** expos, axis=-1)

        def shell(r):
            return c * angular * np.asarray(r, dtype=float) ** (alpha - 1.0)

        return SpectralMeasure(d, "continuous-density", density=density, shell_density=shell,
                               homogeneity_order=alpha, unit_ball_mass=c * angular / alpha,
                               radial=(d == 1), source=cov.to_dict())
    if cov.kind == "delta-comb":
        if r_max is None:
            raise InvalidParameter("delta-comb needs an explicit truncation radius r_max")
        a = cov.spacing
        m = int(math.floor(r_max / a))
        axes = [np.arange(-m, m + 1)] * d
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d) * a
        keep = np.linalg.norm(grid, axis=1) <= r_max
        pts = grid[keep]
        return SpectralMeasure(d, "atomic", atoms=pts, weights=np.ones(len(pts)),
                               truncation_radius=float(r_max), source=cov.to_dict())
    raise InvalidParameter(f"unknown covariance kind {cov.kind!r}")


def from_dict(data):
    """Inverse of :meth:`SpectralMeasure.to_dict`."""
    schema = data.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise InvalidParameter(f"unsupported spectral schema {schema!r}")
    d = int(data["dimension"])
    kind = data["kind"]
    params = data.get("params", {})
    if kind == "atomic":
        return SpectralMeasure(d, "atomic", atoms=np.asarray(params["atoms"], dtype=float),
                               weights=params["weights"],
                               truncation_radius=params.get("truncation_radius"),
                               homogeneity_order=params.get("homogeneity_order"),
                               unit_ball_mass=params.get("unit_ball_mass"),
                               source=params.get("covariance"))
    if kind == "homogeneous-radial":
        return homogeneous(params["homogeneity_order"], params["unit_ball_mass"], d)
    if kind == "continuous-density":
        if "covariance" not in params:
            raise InvalidParameter("continuous-density documents must name a catalog covariance")
        return to_spectral(CovarianceDescriptor.from_dict(params["covariance"]))
    raise InvalidParameter(f"unknown measure kind {kind!r}")


def gamma_eval(cov, x):
    """Pointwise value of the covariance function gamma(x)."""
    if cov.kind in ("white-noise", "delta-comb"):
        raise UnsupportedEvaluation(f"{cov.kind} covariance is not a function")
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    if x.shape[-1] != cov.dimension:
        raise InvalidParameter(f"point must have {cov.dimension} coordinates")
    if cov.kind == "riesz":
        r = np.linalg.norm(x, axis=-1)
        if np.any(r == 0):
            raise SingularityError("Riesz kernel is singular at the origin")
        out = r ** (-cov.alpha)
    else:
        ax = np.abs(x)
        if np.any(ax == 0):
            raise SingularityError("fractional-sheet kernel is singular on the coordinate planes")
        out = np.prod(ax ** -(2.0 - 2.0 * np.array(cov.hurst)), axis=-1)
    return float(out) if out.ndim == 0 else out


def radial_mass(mu, r, tol=1e-10):
    """mu(B(0, r)) for the closed ball of radius r."""
    if not r > 0:
        raise InvalidParameter("radius must be positive")
    if mu.kind == "atomic":
        return float(mu.weights[mu.norms <= r * (1 + 1e-14)].sum())
    if mu.kind == "homogeneous-radial":
        return float(r ** mu.homogeneity_order * mu.unit_ball_mass)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(lambda s: float(mu.shell_density(s)), 0.0, r,
                                  epsabs=0.0, epsrel=tol, limit=200)
    if err > 10 * tol * max(abs(val), 1e-300):
        raise QuadratureError(f"radial mass quadrature reached only {err:.3g}", achieved=err)
    return float(val)


def integrate_radial(mu, f, tol=1e-10, edges=(1.0,)):
    """int f(|xi|) mu(dxi) as a 1-d Stieltjes integral against r -> mu(B(0, r)).

    ``f`` maps a float radius to a float.  ``edges`` are interior break
    points for the adaptive quadrature.  Returns ``(value, error_bound)``.
    """
    if mu.kind == "atomic":
        vals = np.array([f(r) for r in mu.norms])
        return float(np.dot(mu.weights, vals)), 0.0
    cuts = [0.0] + sorted(float(e) for e in edges) + [np.inf]
    total, err = 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if mu.homogeneity_order is not None:
            # shell density is a m r^{a-1}; the power is handed to QUADPACK as a weight
            a, m = mu.homogeneity_order, mu.unit_ball_mass
            v, e = integrate.quad(f, 0.0, cuts[1], weight="alg", wvar=(a - 1.0, 0.0),
                                  epsabs=0.0, epsrel=tol, limit=400)
            total, err = a * m * v, a * m * e

            def g(r):
                return a * m * r ** (a - 1.0) * f(r)
            start = 1
        else:
            def g(r):
                return float(mu.shell_density(r)) * f(r)
            start = 0
        for lo, hi in zip(cuts[start:-1], cuts[start + 1:]):
            v, e = integrate.quad(g, lo, hi, epsabs=0.0, epsrel=tol, limit=400)
            total += v
            err += e
    return total, err


def discretize(mu, r_min=2.0 ** -6, r_max=2.0 ** 6, per_octave=4, n=4):
    """Atomic surrogate of a radial measure: shell masses placed at shell midpoints.

    Each shell [r_i, r_{i+1}) carries mass mu(shell); half of it sits at
    +m_i e_1 and half at -m_i e_1 with m_i the geometric midpoint, plus one
    innermost shell [0, r_min).  The result is only faithful for integrands
    depending on |xi|.
    """
    if mu.kind == "atomic":
        return mu
    octaves = math.log2(r_max / r_min)
    edges = r_min * 2.0 ** (np.arange(int(round(octaves * per_octave)) + 1) / per_octave)
    masses = [radial_mass(mu, r_min)]
    mids = [r_min / 2.0]
    for lo, hi in zip(edges[:-1], edges[1:]):
        if mu.kind == "homogeneous-radial":
            m = radial_mass(mu, hi) - radial_mass(mu, lo)
        else:
            x, w = qd.panels([lo, hi], n * 4)
            m = float(np.dot(w, mu.shell_density(x)))
        masses.append(m)
        mids.append(math.sqrt(lo * hi))
    masses = np.array(masses)
    mids = np.array(mids)
    d = mu.dimension
    pts = np.zeros((2 * len(mids), d))
    pts[: len(mids), 0] = mids
    pts[len(mids):, 0] = -mids
    return SpectralMeasure(d, "atomic", atoms=pts, weights=np.concatenate([masses, masses]) / 2.0,
                           truncation_radius=float(r_max),
                           source={"discretized": mu.source, "r_min": r_min, "r_max": r_max,
                                   "per_octave": per_octave})


@dataclass(frozen=True)
class NoiseModel:
    measure: SpectralMeasure
    alpha0: float

    def __post_init__(self):
        if not 0.0 <= self.alpha0 < 1.0:
            raise InvalidParameter(f"alpha0 must lie in [0, 1), got {self.alpha0}")

    @property
    def dimension(self):
        return self.measure.dimension

    def to_dict(self):
        return {"schema": "wavechaos.model/1", "alpha0": self.alpha0,
                "measure": self.measure.to_dict()}


def model_from_dict(data):
    """Build a :class:`NoiseModel` from a model document.

    The spatial part is either ``"covariance"`` (catalog descriptor, with
    optional ``"r_max"`` for delta combs and ``"discretize"`` options) or
    ``"measure"`` (a spectral-measure document).
    """
    if "alpha0" not in data:
        raise InvalidParameter("model document needs 'alpha0'")
    if "covariance" in data:
        cov = CovarianceDescriptor.from_dict(data["covariance"])
        mu = to_spectral(cov, r_max=data.get("r_max"))
    elif "measure" in data:
        mu = from_dict(data["measure"])
    else:
        raise InvalidParameter("model document needs 'covariance' or 'measure'")
    disc = data.get("discretize")
    if disc:
        mu = discretize(mu, **({} if disc is True else disc))
    return NoiseModel(mu, float(data["alpha0"]))
