"""Explicit constants and certified inequalities as checkable predicates.

Every check produces CertBound records: a bound, a measured value and the
signed margin (positive when the inequality holds).
"""
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .beltrami import rho_exterior
from .errors import BadPartition, UnsupportedKind
from .schwarzian import schwarzian

CLOSED_FORM_TOL = 1e-9
SOLVER_TOL = 2e-2


@dataclass(frozen=True)
class CertBound:
    name: str
    inputs: dict
    bound: float
    measured: float
    sense: str = "upper"  # measured <= bound, or measured >= bound for "lower"
    tolerance: float = CLOSED_FORM_TOL

    @property
    def margin(self):
        if self.sense == "upper":
            return self.bound - self.measured
        return self.measured - self.bound

    @property
    def passed(self):
        return bool(self.margin >= -self.tolerance)

    def as_dict(self):
        return {
            "name": self.name,
            "inputs": self.inputs,
            "bound": self.bound,
            "measured": self.measured,
            "sense": self.sense,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


# -- recurrence ---------------------------------------------------------------


def lambda_threshold(alpha):
    """(1/2)^{(1-a)^2/(1+a+a^2)}: the recurrence diverges for lambda above it."""
    return 0.5 ** ((1.0 - alpha) ** 2 / (1.0 + alpha + alpha ** 2))


def choose_lambda(alpha):
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return 0.5 * (lambda_threshold(alpha) + 1.0)


@dataclass(frozen=True)
class RecurrenceTrace:
    alpha: float
    lam: float
    log_s: tuple = field(repr=False)
    increasing: bool
    diverged: bool
    max_relation_error: float
    relation_checked_upto: int
    N_threshold: object = None
    tau: object = None

    @property
    def passed(self):
        return self.increasing and self.diverged

    @property
    def s(self):
        """s_n as floats (inf once s_n leaves the double range)."""
        return tuple(float(mpmath.exp(v)) if v < 700 else float("inf") for v in self.log_s)


def _log1p_exp(L):
    """log(1 + e^L) without overflow."""
    if L > 60:
        return L
    if L < -60:
        return mpmath.exp(L)
    return mpmath.log1p(mpmath.exp(L))


def recurrence(alpha, lam, n_max=10_000, tau=None, big=1e6):
    """s_0 = 1, s_n = lambda^{n/alpha} (1 + s_{n-1})^{1/alpha}, carried as log s_n.

    log s_n grows doubly exponentially, so it is held as an mpmath number.
    The relation s_n^alpha / (1 + s_{n-1}) = lambda^n is re-checked in
    relative terms at 30 digits while s_n stays in the double range.  With
    ``tau`` given, N_threshold is the first n with tau s_{n+1} >= 1.
    """
    with mpmath.workdps(30):
        a = mpmath.mpf(alpha)
        log_lam = mpmath.log(lam)
        logs = [mpmath.mpf(0)]
        increasing = True
        worst = mpmath.mpf(0)
        checked = 0
        for n in range(1, n_max + 1):
            prev = logs[-1]
            L = (n * log_lam + _log1p_exp(prev)) / a
            if not L > prev:
                increasing = False
            if L < 700:
                s_prev, s_n = mpmath.exp(prev), mpmath.exp(L)
                rel = abs(s_n ** a / (1 + s_prev) / mpmath.power(lam, n) - 1)
                worst = max(worst, rel)
                checked = n
            logs.append(L)
        diverged = bool(logs[-1] > mpmath.log(big))
        N = None
        if tau is not None:
            target = -mpmath.log(tau)
            for n in range(len(logs) - 1):
                if logs[n + 1] >= target:
                    N = n
                    break
    return RecurrenceTrace(
        alpha=alpha,
        lam=lam,
        log_s=tuple(logs),
        increasing=increasing,
        diverged=diverged,
        max_relation_error=float(worst),
        relation_checked_upto=checked,
        N_threshold=N,
        tau=tau,
    )


def theorem_partition(tau, alpha, lam=None):
    """Radii r_{-1} = 1 > r_0 > ... > r_N > r_{N+1} = 0 with r_n = 1 - tau s_n."""
    if not 0 < tau < 1:
        raise BadPartition(f"partition needs 0 < |z| - 1 < 1, got {tau}")
    lam = choose_lambda(alpha) if lam is None else lam
    t = [tau]
    n = 0
    while True:
        n += 1
        nxt = lam ** (n / alpha) * (1.0 + t[-1] / tau) ** (1.0 / alpha) * tau
        if nxt >= 1.0:
            break
        t.append(nxt)
        if n > 10_000:
            raise BadPartition("recurrence does not reach 1")
    return np.array([1.0] + [1.0 - x for x in t] + [0.0])


def _validate_partition(radii, k_list):
    r = np.asarray(radii, dtype=float)
    k = np.asarray(k_list, dtype=float)
    if r.size < 2 or r[0] != 1.0 or r[-1] != 0.0:
        raise BadPartition("radii must run from r_{-1} = 1 down to r_{N+1} = 0")
    if np.any(np.diff(r) >= 0):
        raise BadPartition("radii must be strictly decreasing")
    if k.size != r.size - 1:
        raise BadPartition(f"need {r.size - 1} annulus values, got {k.size}")
    if np.any(k < 0) or np.any(k >= 1):
        raise BadPartition("annulus values must lie in [0, 1)")
    return r, k


def decomposition_bound(radii, k_list, z):
    """12 sum_{n=-1}^{N} k_n r_n / (|z|^2 - r_n^2), an upper bound for |T(z)|."""
    r, k = _validate_partition(radii, k_list)
    az2 = np.abs(np.asarray(z, dtype=complex)) ** 2
    if np.any(az2 <= 1):
        raise BadPartition("decomposition bound needs |z| > 1")
    rn = r[:-1]
    terms = k * rn / (np.multiply.outer(az2, np.ones_like(rn)) - rn ** 2)
    return 12.0 * terms.sum(axis=-1)


def annulus_sups(mu, radii, n_r=64, n_theta=256):
    """k_n = grid sup of |mu| on r_{n+1} <= |z| < r_n."""
    out = []
    theta = 2.0 * np.pi * np.arange(n_theta) / n_theta
    for hi, lo in zip(radii[:-1], radii[1:]):
        rr = lo + (hi - lo) * (np.arange(n_r) + 0.5) / n_r
        z = rr[:, None] * np.exp(1j * theta)[None, :]
        out.append(float(np.abs(mu(z)).max()))
    return np.array(out)


def decay_constant(alpha, lam=None):
    lam = choose_lambda(alpha) if lam is None else lam
    return 6.0 / (1.0 - lam)


def theorem_decay_bound(ell, alpha, t, lam=None):
    """C ell 2 t^alpha / (t + 2) with C = 6 / (1 - lambda(alpha))."""
    t = np.asarray(t, dtype=float)
    return decay_constant(alpha, lam) * ell * 2.0 * t ** alpha / (t + 2.0)


# -- distortion checks --------------------------------------------------------


def _koebe(f, points, tol):
    z = np.asarray(points, dtype=complex) if points is not None else _koebe_points()
    f0 = complex(f.f(np.array([0j]))[0])
    d0 = abs(complex(f.d1(np.array([0j]))[0]))
    r = np.abs(z)
    grow = np.abs(f.f(z) - f0)
    dist = np.abs(f.d1(z))
    out = []
    for zi, ri, g, d in zip(z, r, grow, dist):
        inp = {"z": [float(zi.real), float(zi.imag)]}
        out.append(CertBound("koebe_growth_lower", inp, d0 * ri / (1 + ri) ** 2, float(g), "lower", tol))
        out.append(CertBound("koebe_growth_upper", inp, d0 * ri / (1 - ri) ** 2, float(g), "upper", tol))
        out.append(CertBound("koebe_deriv_lower", inp, d0 * (1 - ri) / (1 + ri) ** 3, float(d), "lower", tol))
        out.append(CertBound("koebe_deriv_upper", inp, d0 * (1 + ri) / (1 - ri) ** 3, float(d), "upper", tol))
    return out


def _koebe_points():
    r = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
    th = np.array([0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi])
    return (r[:, None] * np.exp(1j * th)[None, :]).ravel()


def _mori(fmap, points, tol):
    r = np.asarray(points, dtype=float) if points is not None else np.linspace(0.0, 1.0, 1002)[1:-1]
    k = fmap.profile.sup
    K = (1 + k) / (1 - k)
    d = 1.0 - fmap.R(r)
    out = []
    for ri, di in zip(r, d):
        inp = {"r": float(ri), "K": K}
        out.append(CertBound("mori_lower", inp, (1 - ri) ** K / 16.0, float(di), "lower", tol))
        out.append(CertBound("mori_upper", inp, 16.0 * (1 - ri) ** (1 / K), float(di), "upper", tol))
    return out


def mori_band(fmap, floor=1e-6, n=400):
    """(1 - R(r))/(1 - r) band on radii with 1 - r geometric from 1 down to ``floor``."""
    s = np.geomspace(1.0, floor, n)
    r = 1.0 - s[1:]
    ratio = (1.0 - fmap.R(r)) / s[1:]
    return float(ratio.min()), float(ratio.max())


def _mori_alpha(fmap, points, tol, n=400, floor=1e-6, stability=0.05):
    lo1, hi1 = mori_band(fmap, floor, n)
    lo2, hi2 = mori_band(fmap, floor, 2 * n)
    A1 = max(hi1, 1.0 / lo1)
    A2 = max(hi2, 1.0 / lo2)
    inp = {"n": n, "floor": floor, "A_est": A2, "band": [lo2, hi2]}
    return [
        CertBound("mori_alpha_band_low_stability", inp, stability, abs(lo2 - lo1) / lo1, "upper", 0.0),
        CertBound("mori_alpha_band_high_stability", inp, stability, abs(hi2 - hi1) / hi1, "upper", 0.0),
        CertBound("mori_alpha_A_stability", inp, stability, abs(A2 - A1) / A1, "upper", 0.0),
    ]


# thrice-punctured sphere: tau = i K(1 - z)/K(z) maps it to a fundamental
# domain of the congruence group Gamma(2) acting on the upper half-plane.


def _tau(z):
    z = mpmath.mpc(z)
    return complex(1j * mpmath.ellipk(1 - z) / mpmath.ellipk(z))


def _gamma2_words(depth=4):
    gens = [
        np.array([[1, 2], [0, 1]]),
        np.array([[1, -2], [0, 1]]),
        np.array([[1, 0], [2, 1]]),
        np.array([[1, 0], [-2, 1]]),
    ]
    seen = {(1, 0, 0, 1): np.eye(2, dtype=int)}
    frontier = [np.eye(2, dtype=int)]
    for _ in range(depth):
        nxt = []
        for m in frontier:
            for g in gens:
                p = m @ g
                key = tuple(p.ravel())
                if key not in seen:
                    seen[key] = p
                    nxt.append(p)
        frontier = nxt
    return list(seen.values())


_WORDS = None


def punctured_sphere_distance(z, w):
    """Upper bound for the hyperbolic distance of C minus {0, 1} (curvature -1).

    Minimum over a finite set of Gamma(2) words, so it never underestimates.
    """
    global _WORDS
    if _WORDS is None:
        _WORDS = _gamma2_words()
    t1 = _tau(z)
    t2 = _tau(w)
    best = np.inf
    for m in _WORDS:
        a, b, c, d = m.ravel()
        g = (a * t2 + b) / (c * t2 + d)
        if g.imag <= 0:
            continue
        val = 1 + abs(t1 - g) ** 2 / (2 * t1.imag * g.imag)
        best = min(best, float(np.arccosh(val)))
    return best


def cross_ratio(z1, z2, z3, z4):
    """[z1, z2, z3, z4] = (z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3)), with z2 = inf allowed."""
    if z2 == np.inf:
        return (z1 - z3) / (z1 - z4)
    return (z1 - z3) * (z2 - z4) / ((z1 - z4) * (z2 - z3))


def _crossratio(fmap, points, tol, slack=0.1):
    k = fmap.profile.sup
    K = (1 + k) / (1 - k)
    pts = points if points is not None else [0.2, 0.5, 0.8, 0.5j, -0.3 + 0.3j, 0.6 * np.exp(2.0j)]
    out = []
    for z in pts:
        z = complex(z)
        fz = complex(fmap(np.array([z]))[0])
        a = cross_ratio(0.0, np.inf, 1.0, z)
        b = cross_ratio(0.0, np.inf, 1.0, fz)
        d = punctured_sphere_distance(a, b)
        out.append(CertBound("crossratio", {"z": [z.real, z.imag], "K": K}, np.log(K) + slack, d, "upper", tol))
    return out


def az_integral_rhs(mu, zeta, n_r=512, n_theta=512):
    """(6 rho(zeta)/sqrt(pi)) (int_D |mu|^2 / ((1 - |mu|^2)|w - zeta|^4) dA)^{1/2} by a polar midpoint rule."""
    r = (np.arange(n_r) + 0.5) / n_r
    th = 2.0 * np.pi * (np.arange(n_theta) + 0.5) / n_theta
    w = r[:, None] * np.exp(1j * th)[None, :]
    dA = (r[:, None] / n_r) * (2.0 * np.pi / n_theta)
    m2 = np.abs(mu(w)) ** 2
    dens = m2 / (1.0 - m2) * dA
    zeta = np.atleast_1d(np.asarray(zeta, dtype=complex))
    out = np.empty(zeta.shape, dtype=float)
    for i, zc in enumerate(zeta):
        I = float((dens / np.abs(w - zc) ** 4).sum())
        out[i] = 6.0 * rho_exterior(zc) / np.sqrt(np.pi) * np.sqrt(I)
    return out


def az_points():
    """20 exterior points: 7, 7 and 6 angles on |zeta| = 1.5, 2, 3."""
    pts = []
    for r, n in ((1.5, 7), (2.0, 7), (3.0, 6)):
        pts.extend(r * np.exp(2j * np.pi * (np.arange(n) + 0.25) / n))
    return np.array(pts)


def _az(f, points, tol, field=None):
    if field is None:
        raise ValueError("az_integral needs the Beltrami field via field=")
    zeta = np.asarray(points, dtype=complex) if points is not None else az_points()
    rhs = az_integral_rhs(field, zeta)
    S = np.abs(schwarzian(f, zeta))
    return [
        CertBound("az_integral", {"zeta": [float(z.real), float(z.imag)]}, float(b), float(s), "upper", tol)
        for z, b, s in zip(zeta, rhs, S)
    ]


def distortion_checks(obj, kind, points=None, tol=None, **opts):
    """CertBound records for one distortion inequality.

    kinds: koebe (conformal map of the disk), mori and crossratio (radial map
    with constant profile), mori_alpha (radial map), az_integral (exterior map
    plus ``field=``).
    """
    if tol is None:
        tol = SOLVER_TOL if getattr(obj, "source", "") == "solver" else CLOSED_FORM_TOL
    if kind == "koebe":
        return _koebe(obj, points, tol)
    if kind == "mori":
        return _mori(obj, points, tol)
    if kind == "mori_alpha":
        return _mori_alpha(obj, points, tol, **opts)
    if kind == "crossratio":
        return _crossratio(obj, points, tol, **opts)
    if kind == "az_integral":
        return _az(obj, points, tol, **opts)
    raise UnsupportedKind(f"unknown distortion check {kind!r}")


def partition_refines(radii, k_list, split_index):
    """Split annulus ``split_index`` at its midpoint radius, keeping its k."""
    r, k = _validate_partition(radii, k_list)
    i = split_index
    mid = 0.5 * (r[i] + r[i + 1])
    return np.insert(r, i + 1, mid), np.insert(k, i + 1, k[i])

