import numpy as np
import pytest

from qcdecay import beltrami, solver
from qcdecay.errors import NoConvergence, TooCloseToBoundary
from qcdecay.schwarzian import schwarzian


def circle(r, n=64):
    return r * np.exp(2j * np.pi * np.arange(n) / n)


def test_beurling_maps_dbar_to_d_for_gaussian():
    Z, mult, _ = solver._grid(2.0, 256)
    s = 0.3
    g = np.exp(-np.abs(Z) ** 2 / s**2)
    out = solver.beurling(-Z / s**2 * g, mult)
    assert np.max(np.abs(out - (-np.conj(Z) / s**2 * g))) < 1e-12


def test_zero_field_gives_identity():
    sm = solver.solve(beltrami.zero_field(), N=128)
    z = circle(1.5)
    assert sm.residual == 0.0 and sm.iterations == 0
    assert np.array_equal(sm(z), z)
    f, d1, d2, d3 = sm.derivatives(z)
    assert np.all(d1 == 1) and np.all(d2 == 0) and np.all(d3 == 0)


def test_constant_field_matches_joukowski(constant_solution):
    sm = constant_solution
    z = circle(2.0)
    assert abs(complex(sm(np.array(2.0))) - 2.1) < 5e-3
    assert np.max(np.abs(sm(z) - (z + 0.2 / z) - sm.b0)) < 5e-3
    assert sm.residual < 1e-9


def test_constant_field_derivatives(constant_solution):
    z = circle(2.0, 16)
    f, d1, d2, d3 = constant_solution.derivatives(z)
    assert np.max(np.abs(d1 - (1 - 0.2 / z**2))) < 5e-3
    assert np.max(np.abs(d2 - 0.4 / z**3)) < 5e-3
    assert np.max(np.abs(d3 - (-1.2 / z**4))) < 5e-3


def test_series_matches_direct_cauchy_sum(constant_solution):
    sm = constant_solution
    z = np.array([1.5 + 0.2j, -0.3 + 2.5j, 4.0])
    direct = z + np.array([np.sum(sm.weights / (zi - sm.nodes)) for zi in z]) / np.pi
    assert np.max(np.abs(sm(z) - direct)) < 1e-12


def test_normalization_at_infinity(constant_solution):
    assert constant_solution.b0 == 0
    z = np.array([1e3, 1e3j])
    assert np.max(np.abs(constant_solution(z) - z)) < 1e-3


def test_radial_field_gives_identity_outside(radial_solution):
    sm = radial_solution
    z = np.concatenate([circle(r) for r in np.linspace(1.2, 3.0, 10)])
    assert abs(sm.b0) < 5e-3
    assert np.max(np.abs(sm(z) - z - sm.b0)) < 5e-3


def test_evaluation_inside_band_refused(constant_solution):
    r = constant_solution.exclusion_radius
    assert abs(r - (1 + 4 * 4.0 / 1024)) < 1e-15
    with pytest.raises(TooCloseToBoundary):
        constant_solution(np.array([0.5 * (1 + r)]))


def test_supercritical_field_refused():
    with pytest.raises(NoConvergence):
        solver.solve(beltrami.BeltramiField(lambda z: np.full(np.shape(z), 1.0 + 0j), 1.0, "bad"), N=64)


def test_iteration_budget_exhausted():
    with pytest.raises(NoConvergence):
        solver.solve(beltrami.constant_field(0.6), N=128, tol=1e-14, max_iter=3)


def test_bers_projection_of_zero_field():
    S = solver.bers_projection(beltrami.zero_field(), N=128)
    assert np.max(np.abs(schwarzian(S, circle(1.5)))) == 0.0


@pytest.mark.slow
def test_grid_refinement_reduces_error():
    mu = beltrami.constant_field(0.2)
    z = circle(2.0)
    errs = []
    for N in (256, 512, 1024):
        sm = solver.solve(mu, N=N)
        errs.append(np.max(np.abs(sm(z) - (z + 0.2 / z))))
    assert errs[0] > errs[1] > errs[2]
