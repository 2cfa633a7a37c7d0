"""Beurling-Ahlfors extension of a lift to the upper half-plane.

For an increasing h the extension is

    F(x + iy) = (A + B)/2 + i (A - B),  A = int_0^1 h(x + sy) ds,  B = int_0^1 h(x - sy) ds,

and its partials follow from integration by parts, so the complex dilatation is
computed without numerical differentiation.  For lifts the linear part x is
split off first: it contributes exactly F = z, which keeps the small quantity
dbar F free of cancellation.
"""
from dataclasses import dataclass

import numpy as np

from .beltrami import BeltramiField
from .circle_maps import LiftFunction
from .errors import DomainError

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class BAExtension:
    source: object
    order: int = 32

    @property
    def _is_lift(self):
        return isinstance(self.source, LiftFunction)

    def _part(self, x):
        # the function whose averages are taken after removing the identity
        if self._is_lift:
            return self.source.periodic(x)
        return self.source(x)

    def _averages(self, x, y, order=None):
        """(A, B) of the part function; closed form for explicit lifts."""
        if self._is_lift and self.source.kind == "explicit":
            return self.source.periodic_mean_along(x, y), self.source.periodic_mean_along(x, -y)
        return _gauss_mean(self._part, x, y, order or self.order), _gauss_mean(self._part, x, -y, order or self.order)

    def quadrature_check(self, x, y):
        """Max change of the averages when the Gauss-Legendre order is doubled."""
        a1, b1 = self._averages(x, y, self.order)
        a2, b2 = self._averages(x, y, 2 * self.order)
        return float(max(np.abs(a1 - a2).max(), np.abs(b1 - b2).max()))


def _gauss_mean(fn, x, y, order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    s = 0.5 * (nodes + 1.0)
    w = 0.5 * weights
    x = np.asarray(x, dtype=float)[..., None]
    y = np.asarray(y, dtype=float)[..., None]
    return (fn(x + s * y) * w).sum(axis=-1)


def _split(z):
    z = np.asarray(z, dtype=complex)
    y = z.imag
    if np.any(y <= 0):
        raise DomainError("Beurling-Ahlfors extension needs Im z > 0")
    return z.real, y


def ba_value(E, z):
    x, y = _split(z)
    A, B = E._averages(x, y)
    F = 0.5 * (A + B) + 1j * (A - B)
    if E._is_lift:
        F = F + x + 1j * y
    return F


def _partials(E, x, y):
    """F_z and F_zbar from the exact identities for the averages' partials."""
    p = E._part
    A, B = E._averages(x, y)
    px, pxp, pxm = p(x), p(x + y), p(x - y)
    Ax = (pxp - px) / y
    Ay = (pxp - A) / y
    Bx = (px - pxm) / y
    By = (pxm - B) / y
    Fx = 0.5 * (Ax + Bx) + 1j * (Ax - Bx)
    Fy = 0.5 * (Ay + By) + 1j * (Ay - By)
    Fz = 0.5 * (Fx - 1j * Fy)
    Fzb = 0.5 * (Fx + 1j * Fy)
    if E._is_lift:
        Fz = Fz + 1.0
    return Fz, Fzb


def ba_dilatation(E, z):
    """Complex dilatation mu_F = dbar F / d F at points of the upper half-plane."""
    x, y = _split(z)
    Fz, Fzb = _partials(E, x, y)
    return Fzb / Fz


def project_to_disk(E):
    """Push mu_F down by u(z) = exp(2 pi i z) to a Beltrami field on the disk.

    mu_f(zeta) = mu_F(z) u'(z) / conj(u'(z)) = -mu_F(z) zeta / conj(zeta);
    the puncture at 0 is filled with 0.
    """

    def evaluate(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        out = np.zeros(zeta.shape, dtype=complex)
        r = np.abs(zeta)
        ok = (r > 0) & (r < 1)
        zz = zeta[ok]
        z = np.angle(zz) / TWO_PI - 1j * np.log(np.abs(zz)) / TWO_PI
        out[ok] = -ba_dilatation(E, z) * zz / np.conj(zz)
        return out

    bound = ba_sup_bound(E)
    return BeltramiField(evaluate, bound, "ba", {"family": _describe_source(E.source)})


def ba_sup_bound(E, n_x=512, n_y=256):
    """Grid estimate of sup |mu_F| (used as the field's declared bound)."""
    xs = np.arange(n_x) / n_x
    ys = np.geomspace(1e-6, 5.0, n_y)
    z = xs[:, None] + 1j * ys[None, :]
    m = float(np.abs(ba_dilatation(E, z)).max())
    return min(m, 1.0 - 1e-12)


def _describe_source(src):
    if hasattr(src, "describe"):
        return src.describe()
    return repr(src)


def carleson_scan(E, gauge_fn, n_points=1000, y_max=0.5, y_min=1e-3, seed=0):
    """Sample z = x + iy with y <= y_max; return (z, |mu_F|, 4 eps(y))."""
    rng = np.random.default_rng(seed)
    x = rng.random(n_points)
    y = np.exp(rng.uniform(np.log(y_min), np.log(y_max), n_points))
    z = x + 1j * y
    mu = np.abs(ba_dilatation(E, z))
    return z, mu, 4.0 * gauge_fn(y)
