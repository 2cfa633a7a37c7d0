"""Desk-scale measurable Riemann mapping for coefficients supported in the disk.

The normalized solution is f(z) = z + C h(z) with C the Cauchy transform and
h = dbar f solving the Beltrami equation h = mu (1 + B h), where B is the
Beurling transform.  On an N x N cell-centred grid over [-L, L]^2 the
transform is the Fourier multiplier conj(xi)/xi (zero at xi = 0) and h is
found by Neumann iteration.

Off the support, the midpoint-rule Cauchy sum

    f(z) = z - (1/pi) sum_j h_j dA / (w_j - z)

is evaluated through its exact Laurent expansion in 1/z, using the moments
c_n = sum_j h_j dA w_j^n.  The expansion converges for |z| > max |w_j|, so
the result equals the direct sum up to a truncation error that is controlled
per call.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy import fft

from .errors import NoConvergence, TooCloseToBoundary

SERIES_DECAY = 48.0  # e^-48 truncation, with room for the n^3 of f'''
MAX_TERMS = 16384


@dataclass
class SolvedMap:
    L: float
    N: int
    tol: float
    residual: float
    iterations: int
    history: list
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    field_desc: dict = field(default_factory=dict)
    _moments: np.ndarray = field(default=None, repr=False)

    @property
    def cell(self):
        return 2.0 * self.L / self.N

    @property
    def exclusion_radius(self):
        """Evaluation needs |z| >= 1 + four grid cells."""
        return 1.0 + 4.0 * self.cell

    @property
    def support_radius(self):
        return float(np.abs(self.nodes).max()) if self.nodes.size else 0.0

    def moments(self, n):
        """c_k = sum_j h_j dA w_j^k for k < n (cached, extended on demand)."""
        have = 0 if self._moments is None else self._moments.size
        if n > have:
            out = np.empty(n, dtype=complex)
            if have:
                out[:have] = self._moments
            acc = self.weights * self.nodes ** have
            for k in range(have, n):
                out[k] = acc.sum()
                acc = acc * self.nodes
            self._moments = out
        return self._moments[:n]

    def _terms_for(self, zabs_min):
        rs = self.support_radius
        if rs == 0.0:
            return 1
        n = int(np.ceil(SERIES_DECAY / np.log(zabs_min / rs))) + 8
        return min(max(n, 16), MAX_TERMS)

    def _check(self, z):
        z = np.asarray(z, dtype=complex)
        if z.size and np.abs(z).min() < self.exclusion_radius - 1e-12:
            raise TooCloseToBoundary(
                f"|z| = {np.abs(z).min():.6g} inside exclusion band (need >= {self.exclusion_radius:.6g})"
            )
        return z

    def derivatives(self, z):
        """(f, f', f'', f''') at points with |z| >= exclusion radius."""
        z = self._check(z)
        shape = z.shape
        z = z.ravel()
        if z.size == 0:
            e = np.empty(shape, dtype=complex)
            return e, e.copy(), e.copy(), e.copy()
        n = self._terms_for(float(np.abs(z).min()))
        c = self.moments(n) / np.pi
        u = 1.0 / z
        k = np.arange(n)
        # S_m(u) = sum_k c_k P_m(k) u^k by Horner, highest term first
        p1 = -(k + 1.0)
        p2 = (k + 1.0) * (k + 2.0)
        p3 = -(k + 1.0) * (k + 2.0) * (k + 3.0)
        s0 = np.zeros_like(z)
        s1 = np.zeros_like(z)
        s2 = np.zeros_like(z)
        s3 = np.zeros_like(z)
        for j in range(n - 1, -1, -1):
            cj = c[j]
            s0 = s0 * u + cj
            s1 = s1 * u + cj * p1[j]
            s2 = s2 * u + cj * p2[j]
            s3 = s3 * u + cj * p3[j]
        f = z + s0 * u
        f1 = 1.0 + s1 * u ** 2
        f2 = s2 * u ** 3
        f3 = s3 * u ** 4
        return f.reshape(shape), f1.reshape(shape), f2.reshape(shape), f3.reshape(shape)

    def __call__(self, z):
        return self.derivatives(z)[0]

    @property
    def b0(self):
        """Constant Laurent coefficient; the Cauchy-sum representation makes it 0."""
        return 0j

    @property
    def b1(self):
        return complex(self.moments(1)[0] / np.pi) if self.nodes.size else 0j

    def holomap(self):
        from .schwarzian import HoloMap

        return HoloMap(
            f=lambda z: self.derivatives(z)[0],
            d1=lambda z: self.derivatives(z)[1],
            d2=lambda z: self.derivatives(z)[2],
            d3=lambda z: self.derivatives(z)[3],
            domain="exterior",
            source="solver",
            params=self.describe(),
            all_derivs=self.derivatives,
            min_abs=self.exclusion_radius,
        )

    def describe(self):
        return {
            "L": self.L,
            "N": self.N,
            "tol": self.tol,
            "iterations": self.iterations,
            "residual": self.residual,
            "field": self.field_desc,
        }


def _grid(L, N):
    cell = 2.0 * L / N
    x = -L + (np.arange(N) + 0.5) * cell
    X, Y = np.meshgrid(x, x, indexing="xy")
    k = 2.0 * np.pi * fft.fftfreq(N, d=cell)
    K1, K2 = np.meshgrid(k, k, indexing="xy")
    xi = K1 + 1j * K2
    mult = np.zeros_like(xi)
    nz = xi != 0
    mult[nz] = np.conj(xi[nz]) / xi[nz]
    return X + 1j * Y, mult, cell


def beurling(h, mult):
    return fft.ifft2(mult * fft.fft2(h))


def solve(mu, L=2.0, N=1024, tol=1e-10, max_iter=400):
    """Solve h = mu (1 + B h) by Neumann iteration on the periodized box."""
    Z, mult, cell = _grid(L, N)
    inside = np.abs(Z) < 1.0
    m = np.zeros_like(Z)
    m[inside] = mu(Z[inside])
    sup = float(np.abs(m).max())
    if sup >= 1.0:
        raise NoConvergence(f"sup |mu| = {sup} >= 1 on the grid")

    desc = mu.describe() if hasattr(mu, "describe") else {}
    if sup == 0.0:
        return SolvedMap(L, N, tol, 0.0, 0, [], np.empty(0, complex), np.empty(0, complex), desc)

    h = m.copy()
    history = []
    converged = False
    for it in range(1, max_iter + 1):
        new = m + m * beurling(h, mult)
        change = np.linalg.norm(new - h) / np.linalg.norm(new)
        history.append(float(change))
        h = new
        if change < tol:
            converged = True
            break
    residual = float(np.linalg.norm(h - (m + m * beurling(h, mult))) / np.linalg.norm(h))
    if not converged:
        raise NoConvergence(f"relative change {history[-1]:.3g} after {max_iter} iterations")
    nodes = Z[inside]
    weights = h[inside] * cell ** 2
    return SolvedMap(L, N, tol, residual, it, history, nodes, weights, desc)


def bers_projection(mu, L=2.0, N=1024, tol=1e-10):
    """Schwarzian of the solved map restricted to the exterior disk."""
    return solve(mu, L, N, tol).holomap()
