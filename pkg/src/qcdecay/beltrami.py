"""Beltrami coefficients on the unit disk.

Fields are plain evaluators with a declared sup bound and a provenance tag.
The radial-stretch family is the exact oracle used throughout: a profile
k(r) yields f(r e^{i t}) = R(r) e^{i t} with r R'/R = (1 + k)/(1 - k),
R(1) = 1, whose complex dilatation is k(|z|) z / conj(z).
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, InversionFailure, QuadratureFailure
from .grids import ScanGrid


def rho_disk(z):
    """Hyperbolic density 2 / (1 - |z|^2) of the unit disk."""
    return 2.0 / (1.0 - np.abs(z) ** 2)


def rho_exterior(z):
    """Hyperbolic density 2 / (|z|^2 - 1) of the exterior disk."""
    return 2.0 / (np.abs(z) ** 2 - 1.0)


@dataclass(frozen=True)
class BeltramiField:
    evaluator: object = field(repr=False)
    sup_bound: float
    provenance: str
    params: dict = field(default_factory=dict)
    domain: str = "disk"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if self.domain == "exterior" and np.any(np.abs(z) <= 1):
            raise DomainError("reflected field lives on |z| > 1")
        return self.evaluator(z)

    def describe(self):
        return {"type": self.provenance, **self.params}


def _on_disk(fn):
    def evaluate(z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        inside = np.abs(z) < 1
        out[inside] = fn(z[inside])
        return out

    return evaluate


def _phase(z):
    """z / conj(z), set to 1 at the origin."""
    z = np.asarray(z, dtype=complex)
    # via the argument, so subnormal z do not overflow
    return np.where(z != 0, np.exp(2j * np.angle(z)), 1.0)


def zero_field():
    return BeltramiField(lambda z: np.zeros(np.shape(z), dtype=complex), 0.0, "zero")


def constant_field(k):
    """mu = k on the disk, 0 outside."""
    return BeltramiField(_on_disk(lambda z: np.full(z.shape, k, dtype=complex)), abs(k), "constant", {"k": k})


def power_field(ell, alpha):
    """mu(z) = ell (1 - |z|)^alpha, real and without the radial phase."""
    return BeltramiField(
        _on_disk(lambda z: ell * (1.0 - np.abs(z)) ** alpha + 0j), abs(ell), "power", {"ell": ell, "alpha": alpha}
    )


@dataclass(frozen=True)
class RadialProfile:
    """k(r) = ell (1 - r)^alpha, or k = ell when ``alpha`` is 0."""

    ell: float
    alpha: float = 0.0

    def __post_init__(self):
        if not abs(self.ell) < 1:
            raise ValueError(f"radial profile needs |ell| < 1, got {self.ell}")

    def k(self, r):
        r = np.asarray(r, dtype=float)
        if self.alpha == 0:
            return np.full(r.shape, self.ell)
        return self.ell * (1.0 - r) ** self.alpha

    @property
    def sup(self):
        return abs(self.ell)


def radial_field(profile):
    """Dilatation k(|z|) z / conj(z) of the radial stretch."""
    return BeltramiField(
        _on_disk(lambda z: profile.k(np.abs(z)) * _phase(z)),
        profile.sup,
        "radial",
        {"ell": profile.ell, "alpha": profile.alpha},
    )


@dataclass(frozen=True)
class NormReport:
    sup_norm_est: float
    weighted_norm_est: float
    kappa_table: tuple
    K_est: float
    alpha: float
    grid: ScanGrid = field(repr=False, default=None)

    def kappa(self):
        t, k = zip(*self.kappa_table)
        return np.array(t), np.array(k)


def norms(mu, alpha, grid=None):
    """Grid sup norm, weighted norm sup rho^alpha |mu| and collar sups kappa(t)."""
    grid = grid or ScanGrid()
    z = grid.polar_points()
    m = np.abs(mu(z))
    per_radius = m.max(axis=1)
    sup = float(per_radius.max())
    weighted = float((rho_disk(grid.radii) ** alpha * per_radius).max())
    table = []
    for t in sorted(grid.dyadic):
        sel = grid.radii >= 1.0 - t
        table.append((float(t), float(per_radius[sel].max()) if sel.any() else 0.0))
    return NormReport(
        sup_norm_est=sup,
        weighted_norm_est=weighted,
        kappa_table=tuple(table),
        K_est=(1.0 + sup) / (1.0 - sup),
        alpha=alpha,
        grid=grid,
    )


def loglog_slope(t, v):
    """Least-squares slope of log v against log t (zero entries dropped)."""
    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    ok = v > 0
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(np.log(t[ok]), np.log(v[ok]), 1)[0])


def reflect(mu):
    """mu*(z) = conj(mu(1/conj z)) (z z*)^2 on the exterior disk."""

    def evaluate(z):
        zs = 1.0 / np.conj(z)
        return np.conj(mu(zs)) * (z * zs) ** 2

    return BeltramiField(evaluate, mu.sup_bound, "reflected", {"of": mu.describe()}, domain="exterior")


class RadialMap:
    """Exact radial stretch f(r e^{it}) = R(r) e^{it} for a profile k.

    log R(r) = log r - int_r^1 2 k(s) / ((1 - k(s)) s) ds, evaluated by
    adaptive quadrature piecewise between the requested radii.
    """

    def __init__(self, profile, epsabs=1e-14, epsrel=1e-13):
        self.profile = profile
        self.epsabs = epsabs
        self.epsrel = epsrel
        self._cache = {}
        self._g0 = float(self._g(np.array(0.0)))
        r = 1.0 - np.geomspace(1.0, 1e-9, 400)
        self._table_r = np.concatenate([[0.0], np.unique(r[r > 0]), [1.0]])
        self._table_R = self.R(self._table_r)

    def _g(self, s):
        k = self.profile.k(s)
        return 2.0 * k / (1.0 - k)

    def _integrand(self, s):
        # the 1/s singularity at the origin is integrated in closed form
        return (self._g(s) - self._g0) / s

    def _piece(self, a, b):
        val, err = quad(self._integrand, a, b, epsabs=self.epsabs, epsrel=self.epsrel, limit=200)
        if not np.isfinite(val) or err > 1e-9 * max(1.0, abs(val)):
            raise QuadratureFailure(f"radial integral on [{a}, {b}] error {err:.3g}")
        return val + self._g0 * np.log(b / a)

    def R(self, r):
        r = np.asarray(r, dtype=float)
        flat = r.ravel()
        uniq = np.unique(flat)
        vals = {}
        acc = 0.0
        upper = 1.0
        for u in uniq[::-1]:
            if u >= 1.0:
                vals[u] = 1.0
                continue
            if u <= 0.0:
                vals[u] = 0.0
                continue
            key = (upper, u)
            if key not in self._cache:
                self._cache[key] = self._piece(u, upper)
            acc += self._cache[key]
            upper = u
            vals[u] = float(np.exp(np.log(u) - acc))
        return np.array([vals[v] for v in flat]).reshape(r.shape)

    def dR(self, r):
        r = np.asarray(r, dtype=float)
        k = self.profile.k(r)
        R = self.R(r)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(r > 0, R * (1.0 + k) / ((1.0 - k) * r), 0.0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        return self.R(r) * _phase_unit(z)

    def dz(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        R = self.R(r)
        return 0.5 * (self.dR(r) + np.where(r > 0, R / np.where(r > 0, r, 1.0), self.dR(r)))

    def dzbar(self, z):
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        R = self.R(r)
        return 0.5 * (self.dR(r) - np.where(r > 0, R / np.where(r > 0, r, 1.0), self.dR(r))) * _phase(z)

    def dilatation(self, z):
        # dR = R (1 + k) / ((1 - k) r) reduces dzbar / dz to k z / conj(z); avoids 0/0 when R underflows
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        return np.where(r < 1.0, self.profile.k(np.minimum(r, 1.0)), 0.0) * _phase(z)

    def inverse_radius(self, rho, tol=1e-13, max_iter=20):
        rho = np.asarray(rho, dtype=float)
        r = np.interp(rho, self._table_R, self._table_r)
        for _ in range(max_iter):
            inner = (r > 0) & (r < 1)
            if not inner.any():
                return r
            f = self.R(r[inner]) - rho[inner]
            step = f / self.dR(r[inner])
            r[inner] = np.clip(r[inner] - step, 0.0, 1.0)
            if np.all(np.abs(step) < tol):
                return r
        raise InversionFailure("radial inverse did not converge")

    def inverse(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return self.inverse_radius(np.abs(zeta)) * _phase_unit(zeta)


def _phase_unit(z):
    a = np.abs(z)
    return np.where(a > 0, z / np.where(a > 0, a, 1.0), 1.0)


def radial_map(profile):
    return RadialMap(profile)


def boundary_ratio_band(fmap, radii):
    """min and max of (1 - |f(r)|) / (1 - r) over the given radii."""
    radii = np.asarray(radii, dtype=float)
    ratio = (1.0 - fmap.R(radii)) / (1.0 - radii)
    return float(ratio.min()), float(ratio.max())


def distortion_constant(fmap, radii):
    """Empirical A: the larger of sup ratio and sup 1/ratio on the radii."""
    lo, hi = boundary_ratio_band(fmap, radii)
    return max(hi, 1.0 / lo)


def compose_dilatation(mu1, nu, f_nu):
    """Dilatation of f^{mu1} o (f^nu)^{-1} at zeta = f^nu(z).

    ``f_nu`` must expose ``inverse`` and ``dz`` and have dilatation ``nu``.
    """

    def evaluate(zeta):
        z = f_nu.inverse(zeta)
        a, b = mu1(z), nu(z)
        d = f_nu.dz(z)
        # d vanishes only at a fixed origin, where the phase is taken as 1
        safe = np.where(d != 0, d, 1.0)
        return (a - b) / (1.0 - np.conj(b) * a) * safe / np.conj(safe)

    k = (mu1.sup_bound + nu.sup_bound) / (1.0 + mu1.sup_bound * nu.sup_bound)
    return BeltramiField(evaluate, k, "composed", {"mu": mu1.describe(), "nu": nu.describe()})
