"""Pre-Schwarzian and Schwarzian derivatives, hyperbolic norms and decay scans.

Closed-form maps carry hand-coded derivatives; maps produced by the solver
carry kernel-differentiated Cauchy sums.  Nothing here differentiates
numerically.
"""
from dataclasses import dataclass, field

import numpy as np

from .beltrami import BeltramiField, rho_disk, rho_exterior
from .errors import DegenerateDerivative, NotAdmissible, TooCloseToBoundary

DEGENERATE = 1e-14


@dataclass(frozen=True)
class HoloMap:
    f: object = field(repr=False)
    d1: object = field(repr=False)
    d2: object = field(repr=False)
    d3: object = field(repr=False)
    domain: str = "exterior"
    source: str = "closed-form"
    params: dict = field(default_factory=dict)
    all_derivs: object = field(default=None, repr=False)
    min_abs: float = 1.0

    def derivs(self, z):
        z = np.asarray(z, dtype=complex)
        if self.all_derivs is not None:
            return self.all_derivs(z)
        return self.f(z), self.d1(z), self.d2(z), self.d3(z)

    def __call__(self, z):
        return self.f(np.asarray(z, dtype=complex))

    def describe(self):
        return {"source": self.source, "domain": self.domain, **self.params}


def _const(v):
    return lambda z: np.full(np.shape(z), v, dtype=complex)


def identity_map(domain="exterior"):
    return HoloMap(lambda z: z + 0j, _const(1.0), _const(0.0), _const(0.0), domain, "closed-form", {"map": "identity"})


def joukowski(k):
    """z + k/z on the exterior disk: the conformal part of the constant-k solution."""
    return HoloMap(
        lambda z: z + k / z,
        lambda z: 1.0 - k / z ** 2,
        lambda z: 2.0 * k / z ** 3,
        lambda z: -6.0 * k / z ** 4,
        "exterior",
        "closed-form",
        {"map": "joukowski", "k": k},
    )


def mobius(a, b, c, d, domain="exterior"):
    """(a z + b)/(c z + d)."""
    det = a * d - b * c
    if det == 0:
        raise ValueError("Mobius coefficients must have ad - bc != 0")

    def w(z):
        return c * z + d

    return HoloMap(
        lambda z: (a * z + b) / w(z),
        lambda z: det / w(z) ** 2,
        lambda z: -2.0 * c * det / w(z) ** 3,
        lambda z: 6.0 * c * c * det / w(z) ** 4,
        domain,
        "closed-form",
        {"map": "mobius", "coeffs": [str(a), str(b), str(c), str(d)]},
    )


def koebe():
    """z / (1 - z)^2 on the disk."""
    return HoloMap(
        lambda z: z / (1.0 - z) ** 2,
        lambda z: (1.0 + z) / (1.0 - z) ** 3,
        lambda z: (4.0 + 2.0 * z) / (1.0 - z) ** 4,
        lambda z: (18.0 + 6.0 * z) / (1.0 - z) ** 5,
        "disk",
        "closed-form",
        {"map": "koebe"},
    )


def cot_map(c):
    """a cot(a/z) with a^2 = c/2 on the exterior disk; its Schwarzian is c/z^4."""
    a = np.sqrt(complex(c) / 2.0)

    def parts(z):
        C = np.cos(a / z) / np.sin(a / z)
        P = 1.0 + C * C
        return C, P

    def f(z):
        return a * parts(z)[0]

    def d1(z):
        _, P = parts(z)
        return a * a * P / z ** 2

    def d2(z):
        C, P = parts(z)
        return P * (-2.0 * a ** 2 / z ** 3 + 2.0 * a ** 3 * C / z ** 4)

    def d3(z):
        C, P = parts(z)
        dP = 2.0 * a * C * P / z ** 2
        return dP * (-2.0 * a ** 2 / z ** 3 + 2.0 * a ** 3 * C / z ** 4) + P * (
            6.0 * a ** 2 / z ** 4 + 2.0 * a ** 4 * P / z ** 6 - 8.0 * a ** 3 * C / z ** 5
        )

    return HoloMap(f, d1, d2, d3, "exterior", "closed-form", {"map": "cot", "c": c})


def _checked(f, z):
    z = np.asarray(z, dtype=complex)
    if f.source == "solver" and z.size and np.abs(z).min() < f.min_abs - 1e-12:
        raise TooCloseToBoundary(f"|z| = {np.abs(z).min():.6g} below {f.min_abs:.6g}")
    _, d1, d2, d3 = f.derivs(z)
    if np.any(np.abs(d1) < DEGENERATE):
        raise DegenerateDerivative("|f'| below 1e-14")
    return d1, d2, d3


def pre_schwarzian(f, z):
    """T_f = f''/f'."""
    d1, d2, _ = _checked(f, z)
    return d2 / d1


def pre_schwarzian_derivative(f, z):
    """T_f' = f'''/f' - (f''/f')^2."""
    d1, d2, d3 = _checked(f, z)
    return d3 / d1 - (d2 / d1) ** 2


def schwarzian(f, z):
    """S_f = f'''/f' - (3/2)(f''/f')^2."""
    d1, d2, d3 = _checked(f, z)
    return d3 / d1 - 1.5 * (d2 / d1) ** 2


def pre_and_schwarzian(f, z):
    d1, d2, d3 = _checked(f, z)
    T = d2 / d1
    return T, d3 / d1 - 1.5 * T * T


def hyperbolic_weights(z, alpha=0.0, domain="exterior"):
    """rho^{-2+alpha} at z for the disk or the exterior disk."""
    rho = rho_exterior(z) if domain == "exterior" else rho_disk(z)
    return rho ** (alpha - 2.0)


@dataclass(frozen=True)
class DecayReport:
    alpha: float
    table: tuple
    sup_norm: float
    weighted_norm: float
    clip: float
    n_radial: int
    n_angles: int

    def columns(self):
        t, b, s = zip(*self.table)
        return np.array(t), np.array(b), np.array(s)


def scan_radii(delta, r_max, n_radial, t_list=()):
    """Radii 1 + s with s geometric from delta to r_max - 1, plus the collar edges."""
    s = np.geomspace(delta, r_max - 1.0, n_radial)
    edges = [t for t in t_list if delta <= t <= r_max - 1.0]
    return 1.0 + np.unique(np.concatenate([s, edges]))


def decay_scan(f, alpha, t_list, delta=None, n_angles=256, n_radial=96, r_max=11.0):
    """beta(t), sigma(t) over the collars 1 + delta <= |z| <= 1 + t, and the norms of S_f.

    ``delta`` defaults to the map's exclusion band for solver maps and to
    min(t)/16 otherwise; the clip is recorded in the report.
    """
    t_list = np.sort(np.asarray(t_list, dtype=float))
    if delta is None:
        delta = f.min_abs - 1.0 if f.source == "solver" else float(t_list.min()) / 16.0
    radii = scan_radii(delta, r_max, n_radial, t_list)
    theta = 2.0 * np.pi * np.arange(n_angles) / n_angles
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    T, S = pre_and_schwarzian(f, z)
    s = (radii - 1.0)[:, None]
    bT = (s * np.abs(T)).max(axis=1)
    bS = (s * s * np.abs(S)).max(axis=1)
    table = []
    for t in t_list:
        sel = radii <= 1.0 + t * (1 + 1e-12)
        table.append((float(t), float(bT[sel].max()) if sel.any() else 0.0, float(bS[sel].max()) if sel.any() else 0.0))
    aS = np.abs(S)
    sup = float((hyperbolic_weights(z, 0.0) * aS).max())
    wsup = float((hyperbolic_weights(z, alpha) * aS).max())
    return DecayReport(alpha, tuple(table), sup, wsup, float(delta), len(radii), n_angles)


def hyperbolic_norms(phi, alpha, radii=None, n_angles=256):
    """sup rho^{-2}|phi| and sup rho^{-2+alpha}|phi| over a polar grid of the exterior disk."""
    if radii is None:
        radii = 1.0 + np.geomspace(1e-6, 1e3, 400)
    theta = 2.0 * np.pi * np.arange(n_angles) / n_angles
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    a = np.abs(phi(z))
    return float((hyperbolic_weights(z, 0.0) * a).max()), float((hyperbolic_weights(z, alpha) * a).max())


def power_differential(c, n=4):
    """phi(z) = c / z^n as a Schwarzian candidate on the exterior disk."""

    def phi(z):
        return c / np.asarray(z, dtype=complex) ** n

    phi.params = {"type": "aw", "c": c, "n": n}
    return phi


def _aw_values(phi, z):
    z = np.asarray(z, dtype=complex)
    # the origin is reached as a limit along the positive axis
    z = np.where(z == 0, 1e-8, z)
    zs = 1.0 / np.conj(z)
    w = (np.abs(zs) ** 2 - 1.0) ** 2 / 4.0
    return -2.0 * w * (z * zs) ** 2 * phi(zs)


def aw_section(phi, radii=None, n_angles=256):
    """Beltrami coefficient -2 rho_{D*}^{-2}(z*) (z z*)^2 phi(z*), z* = 1/conj(z), on the disk.

    Admissibility (sup |mu| < 1) is checked on a polar grid.
    """
    if radii is None:
        radii = np.concatenate([[0.0], 1.0 - np.geomspace(1.0, 1e-6, 200)[1:]])
    theta = 2.0 * np.pi * np.arange(n_angles) / n_angles
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    sup = float(np.abs(_aw_values(phi, z)).max())
    if not sup < 1.0:
        raise NotAdmissible(f"sup |mu| = {sup:.6g} >= 1")

    def evaluate(z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        inside = np.abs(z) < 1
        out[inside] = _aw_values(phi, z[inside])
        return out

    return BeltramiField(evaluate, sup, "aw", dict(getattr(phi, "params", {})))


def aw_bound_chain(phi, mu, alpha, radii=None, n_angles=256):
    """(lhs, rhs) of rho_D^alpha(z) |z|^{2 alpha} |mu(z)| <= 2 ||phi||_{inf,alpha}.

    lhs is the grid sup of the left side for mu = aw_section(phi); rhs uses
    the measured weighted norm of phi.
    """
    if radii is None:
        radii = 1.0 - np.geomspace(1.0, 1e-6, 200)[1:]
    theta = 2.0 * np.pi * np.arange(n_angles) / n_angles
    z = radii[:, None] * np.exp(1j * theta)[None, :]
    lhs = float((rho_disk(z) ** alpha * np.abs(z) ** (2 * alpha) * np.abs(mu(z))).max())
    # the left side at z equals 2 rho^{alpha-2}|phi| at 1/conj(z), so the
    # reflected radii are included in the norm grid
    outer = np.concatenate([1.0 + np.geomspace(1e-6, 1e3, 400), 1.0 / radii[radii > 0]])
    _, wn = hyperbolic_norms(phi, alpha, np.unique(outer), n_angles)
    return lhs, 2.0 * wn
