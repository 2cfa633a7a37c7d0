"""Sampling grids shared by the sup-type scans.

Every sup reported by this package is a maximum over one of these grids and
therefore a lower bound for the true supremum.  Grids are immutable and can
describe themselves, so a report can always be re-run on the same points.
"""
from dataclasses import dataclass, field

import numpy as np


def dyadic_ts(jmin=1, jmax=10):
    """t = 2**-j for j = jmin..jmax, largest first."""
    return 2.0 ** -np.arange(jmin, jmax + 1, dtype=float)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ScanGrid:
    """Sample points for circle scans (x, t) and disk scans (radii, angles).

    ``n_x`` points on [0, 1) and ``n_t`` log-spaced t in [t_min, 1/2] are used
    by the quasisymmetric and Hoelder scans.  Radii in [0, 1) always contain
    r = 0 and every r = 1 - 2**-j, j <= ``depth``, so dyadic collars start at a
    grid circle.
    """

    n_x: int = 512
    n_t: int = 64
    t_min: float = 1e-4
    n_radial: int = 96
    n_angles: int = 256
    depth: int = 12
    jmax: int = 10
    x: np.ndarray = field(init=False, repr=False, compare=False)
    t: np.ndarray = field(init=False, repr=False, compare=False)
    radii: np.ndarray = field(init=False, repr=False, compare=False)
    angles: np.ndarray = field(init=False, repr=False, compare=False)
    dyadic: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        set_ = object.__setattr__
        set_(self, "x", _frozen(np.arange(self.n_x) / self.n_x))
        set_(self, "t", _frozen(np.geomspace(self.t_min, 0.5, self.n_t)))
        # log-spaced collar widths plus a uniform interior, merged and deduplicated
        collar = 1.0 - np.geomspace(1.0, 2.0 ** -self.depth, self.n_radial)
        dyad = 1.0 - 2.0 ** -np.arange(0, self.depth + 1, dtype=float)
        inner = np.linspace(0.0, 0.5, max(self.n_radial // 4, 2))
        r = np.unique(np.concatenate([collar, dyad, inner]))
        set_(self, "radii", _frozen(r[r < 1.0]))
        set_(self, "angles", _frozen(2 * np.pi * np.arange(self.n_angles) / self.n_angles))
        set_(self, "dyadic", _frozen(dyadic_ts(1, self.jmax)))

    def refined(self, factor=2):
        """Same grid family with every resolution multiplied by ``factor``."""
        return ScanGrid(
            n_x=self.n_x * factor,
            n_t=self.n_t * factor,
            t_min=self.t_min,
            n_radial=self.n_radial * factor,
            n_angles=self.n_angles * factor,
            depth=self.depth,
            jmax=self.jmax,
        )

    def polar_points(self):
        """Complex sample points r*exp(i theta), shape (len(radii), len(angles))."""
        return self.radii[:, None] * np.exp(1j * self.angles[None, :])

    def describe(self):
        return {
            "n_x": self.n_x,
            "n_t": self.n_t,
            "t_min": self.t_min,
            "n_radial": self.n_radial,
            "n_angles": self.n_angles,
            "depth": self.depth,
            "jmax": self.jmax,
        }
