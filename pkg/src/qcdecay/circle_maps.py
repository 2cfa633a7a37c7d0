"""Lifts of circle diffeomorphisms and their one-dimensional constants.

A lift is an increasing h: R -> R with h(x + 1) = h(x) + 1.  Explicit lifts are
finite trigonometric series,

    h(x) = x + shift + sum_k (a_k sin 2 pi k x + b_k cos 2 pi k x) / (2 pi k),

so that h'(x) = 1 + sum_k (a_k cos 2 pi k x - b_k sin 2 pi k x): the stored
coefficients are the amplitudes of the derivative.  Compositions and inverses
are lazy wrappers carrying exact chain-rule derivatives.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConvergenceFailure, NotMonotone
from .grids import ScanGrid

TWO_PI = 2.0 * np.pi
VALIDATION_SAMPLES = 4096
INVERSION_TOL = 1e-12


@dataclass(frozen=True)
class LiftFunction:
    kind: str = "explicit"
    mean_shift: float = 0.0
    coeffs: tuple = ()
    parts: tuple = field(default=(), repr=False)

    # -- evaluation -------------------------------------------------------
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "explicit":
            return x + self.periodic(x)
        if self.kind == "composed":
            outer, inner = self.parts
            return outer(inner(x))
        (src,) = self.parts
        return _invert_values(src, x)

    def periodic(self, x):
        """h(x) - x, a 1-periodic function."""
        x = np.asarray(x, dtype=float)
        if self.kind != "explicit":
            return self(x) - x
        out = np.full_like(x, self.mean_shift)
        for k, a, b in self.coeffs:
            w = TWO_PI * k
            out = out + (a * np.sin(w * x) + b * np.cos(w * x)) / w
        return out

    def deriv(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "explicit":
            out = np.ones_like(x)
            for k, a, b in self.coeffs:
                w = TWO_PI * k
                out = out + a * np.cos(w * x) - b * np.sin(w * x)
            return out
        if self.kind == "composed":
            outer, inner = self.parts
            return outer.deriv(inner(x)) * inner.deriv(x)
        (src,) = self.parts
        return 1.0 / src.deriv(_invert_values(src, x))

    def deriv2(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "explicit":
            out = np.zeros_like(x)
            for k, a, b in self.coeffs:
                w = TWO_PI * k
                out = out - w * (a * np.sin(w * x) + b * np.cos(w * x))
            return out
        if self.kind == "composed":
            outer, inner = self.parts
            u = inner(x)
            d1 = inner.deriv(x)
            return outer.deriv2(u) * d1 ** 2 + outer.deriv(u) * inner.deriv2(x)
        (src,) = self.parts
        y = _invert_values(src, x)
        return -src.deriv2(y) / src.deriv(y) ** 3

    def mean_along(self, x, y):
        """Closed form of int_0^1 h(x + s y) ds for explicit lifts, else None.

        Uses product forms of the sine/cosine differences so small |y| does not
        cancel catastrophically.
        """
        if self.kind != "explicit":
            return None
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return x + 0.5 * y + self.periodic_mean_along(x, y)

    def periodic_mean_along(self, x, y):
        """Closed form of int_0^1 (h - id)(x + s y) ds for explicit lifts."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.full(np.broadcast(x, y).shape, self.mean_shift)
        for k, a, b in self.coeffs:
            w = TWO_PI * k
            half = 0.5 * w * y
            mid = w * x + half
            # sinc(half) = sin(half)/half, stable at half -> 0
            sinc = np.sinc(half / np.pi)
            out = out + (a * np.sin(mid) + b * np.cos(mid)) * sinc / w
        return out

    @property
    def deriv_lipschitz(self):
        """Upper bound for the Lipschitz constant of h' (explicit lifts)."""
        return float(sum(TWO_PI * k * (abs(a) + abs(b)) for k, a, b in self.coeffs))

    def describe(self):
        if self.kind == "explicit":
            return {"type": "trig", "coeffs": [list(c) for c in self.coeffs], "shift": self.mean_shift}
        if self.kind == "composed":
            return {"type": "compose", "outer": self.parts[0].describe(), "inner": self.parts[1].describe()}
        return {"type": "invert", "of": self.parts[0].describe()}


def _invert_values(h, y, tol=INVERSION_TOL, max_iter=100):
    """Solve h(x) = y elementwise: bisection to a small bracket, then secant."""
    y = np.asarray(y, dtype=float)
    h0 = float(h(np.array(0.0)))
    # h(x) - x is periodic and h(0) <= h(x) <= h(0) + 1 on [0, 1]
    lo = y - h0 - 1.0
    hi = y - h0 + 1.0
    for _ in range(30):
        mid = 0.5 * (lo + hi)
        above = h(mid) > y
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    x0, x1 = lo, hi
    f0, f1 = h(x0) - y, h(x1) - y
    for _ in range(max_iter):
        done = np.abs(f1) <= tol
        if np.all(done):
            return x1
        denom = f1 - f0
        safe = np.where(denom == 0, 1.0, denom)
        x2 = np.where(denom == 0, x1, x1 - f1 * (x1 - x0) / safe)
        # keep iterates inside the bisection bracket
        x2 = np.where((x2 < lo) | (x2 > hi), 0.5 * (lo + hi), x2)
        f2 = h(x2) - y
        lo = np.where(f2 < 0, np.maximum(lo, x2), lo)
        hi = np.where(f2 > 0, np.minimum(hi, x2), hi)
        x0, f0 = np.where(done, x0, x1), np.where(done, f0, f1)
        x1, f1 = np.where(done, x1, x2), np.where(done, f1, f2)
    raise ConvergenceFailure(f"lift inversion exceeded {max_iter} secant steps")


def make_trig_diffeo(coeffs=(), mean_shift=0.0):
    """Build an explicit trigonometric lift, validating monotonicity.

    ``coeffs`` is a sequence of (k, a_k, b_k) with integer k >= 1.
    """
    clean = []
    for c in coeffs:
        k, a, b = c
        if int(k) != k or k < 1:
            raise ValueError(f"frequency must be an integer >= 1, got {k}")
        clean.append((int(k), float(a), float(b)))
    h = LiftFunction("explicit", float(mean_shift), tuple(clean))
    xs = np.arange(VALIDATION_SAMPLES) / VALIDATION_SAMPLES
    slack = h.deriv_lipschitz / (2 * VALIDATION_SAMPLES)
    low = float(h.deriv(xs).min()) - slack
    if low <= 0:
        raise NotMonotone(f"min h' <= {low + slack:.6g} (slack {slack:.3g}); lift is not increasing")
    return h


def identity():
    return make_trig_diffeo()


def rotation(theta):
    return make_trig_diffeo((), theta)


def trig_family(a, k=1):
    """g_a: h'(x) = 1 + a cos(2 pi k x)."""
    return make_trig_diffeo([(k, a, 0.0)])


def compose(g, h):
    """The lift of g o h."""
    return LiftFunction("composed", 0.0, (), (g, h))


def invert(h):
    if h.kind == "inverted":
        return h.parts[0]
    return LiftFunction("inverted", 0.0, (), (h,))


def qsq(h, x, t):
    """Quasisymmetric quotient m_h(x, t) = (h(x+t) - h(x)) / (h(x) - h(x-t))."""
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    # h(x + t) - h(x) = t + p(x + t) - p(x) with p = h - id: exact for rotations
    px = h.periodic(x)
    return (t + (h.periodic(x + t) - px)) / (t + (px - h.periodic(x - t)))


def _qsq_matrix(h, xs, ts):
    X = xs[:, None]
    T = ts[None, :]
    return qsq(h, X, T)


@dataclass(frozen=True)
class QsConstants:
    M: float
    b_alpha: float
    alpha: float
    grid: ScanGrid


def qs_constants(h, alpha, grid=None):
    """Grid estimates of M(g) and b_alpha(g) over x in [0,1), t in (0, 1/2]."""
    grid = grid or ScanGrid()
    m = _qsq_matrix(h, grid.x, grid.t)
    dev = np.maximum(m - 1.0, 1.0 / m - 1.0)
    M = 1.0 + float(dev.max())
    b = float((dev / grid.t[None, :] ** alpha).max())
    return QsConstants(M=M, b_alpha=max(b, 0.0), alpha=alpha, grid=grid)


def gauge(h, ts, n_x=2048, grid_t=None):
    """Measured symmetry gauge at each t in ``ts``.

    Returns (raw, envelope): raw[i] = sup_x max(m - 1, 1/m - 1) at t = ts[i];
    envelope[i] is the running sup over all sampled t <= ts[i], which is the
    smallest increasing gauge consistent with the samples.
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    xs = np.arange(n_x) / n_x
    extra = np.geomspace(1e-6, 0.5, 256) if grid_t is None else np.asarray(grid_t)
    allt = np.unique(np.concatenate([ts, extra]))
    m = _qsq_matrix(h, xs, allt)
    dev = np.maximum(m - 1.0, 1.0 / m - 1.0).max(axis=0)
    env = np.maximum.accumulate(dev)
    idx = np.searchsorted(allt, ts)
    return dev[idx], env[idx]


@dataclass(frozen=True)
class HolderConstants:
    c_alpha: float
    p_one_plus_alpha: float
    alpha: float
    sup_deriv: float
    inf_deriv: float
    modulus_table: tuple
    grid: ScanGrid = field(repr=False, default=None)


def _refine_extremum(fn, x0, width, sign):
    res = minimize_scalar(
        lambda s: sign * float(fn(np.array(s))),
        bounds=(x0 - width, x0 + width),
        method="bounded",
        options={"xatol": 1e-13},
    )
    return sign * res.fun


def holder_constants(h, alpha, grid=None):
    grid = grid or ScanGrid()
    xs = grid.x
    n = xs.size
    d = h.deriv(xs)
    c = 0.0
    for s in range(1, n // 2 + 1):
        diff = np.abs(d - np.roll(d, -s)).max()
        c = max(c, diff / (s / n) ** alpha)

    imax, imin = int(np.argmax(d)), int(np.argmin(d))
    sup_d = max(float(d[imax]), _refine_extremum(h.deriv, xs[imax], 1.0 / n, -1.0))
    inf_d = min(float(d[imin]), _refine_extremum(h.deriv, xs[imin], 1.0 / n, 1.0))

    table = []
    running = 0.0
    for t in sorted(grid.dyadic):
        offsets = t * np.arange(1, 17) / 16
        vals = np.abs(h.deriv(xs[:, None] + offsets[None, :]) - d[:, None])
        running = max(running, float(vals.max()))
        table.append((float(t), running))

    disp = float(np.abs(h(xs) - h(np.array(0.0)) - xs).max())
    p = disp + max(sup_d - 1.0, 1.0 - inf_d, 0.0) + c
    return HolderConstants(
        c_alpha=float(c),
        p_one_plus_alpha=float(p),
        alpha=alpha,
        sup_deriv=float(sup_d),
        inf_deriv=float(inf_d),
        modulus_table=tuple(table),
        grid=grid,
    )


def derivative_bounds(c_alpha, alpha):
    """Bounds 1 -/+ c (1/2)^alpha that every C^{1+alpha} lift derivative obeys."""
    w = c_alpha * 0.5 ** alpha
    return 1.0 - w, 1.0 + w


def b_alpha_bound(c_alpha, alpha, inf_deriv):
    """Upper bound 2^a c / max(1 - c (1/2)^a, c0) for b_alpha with c0 = inf h'."""
    return 2.0 ** alpha * c_alpha / max(1.0 - c_alpha * 0.5 ** alpha, inf_deriv)
