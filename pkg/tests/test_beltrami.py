import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcdecay import beltrami as bt
from qcdecay.grids import ScanGrid


def polar(radii, n=64):
    th = 2 * np.pi * np.arange(n) / n
    return np.asarray(radii)[:, None] * np.exp(1j * th)[None, :]


def radial_dilatation_from_radius(G, dG, rho):
    # f = G(r) e^{it} has mu = (r G' - G) / (r G' + G) * z / conj(z)
    return (rho * dG - G) / (rho * dG + G)


def test_hyperbolic_densities():
    assert bt.rho_disk(0.0) == 2.0
    assert abs(bt.rho_disk(0.5) - 8 / 3) < 1e-15
    assert abs(bt.rho_exterior(2.0) - 2 / 3) < 1e-15


def test_zero_field_norms():
    rep = bt.norms(bt.zero_field(), 0.5)
    assert rep.sup_norm_est == 0.0 and rep.weighted_norm_est == 0.0
    assert rep.K_est == 1.0
    assert all(k == 0.0 for _, k in rep.kappa_table)


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_power_field_norms(alpha):
    rep = bt.norms(bt.power_field(0.5, alpha), alpha)
    assert abs(rep.weighted_norm_est - 0.5 * 2 ** alpha) < 1e-14
    t, k = rep.kappa()
    assert np.max(np.abs(k - 0.5 * t ** alpha)) < 1e-14
    assert abs(bt.loglog_slope(t, k) - alpha) < 1e-12


def test_reflection_on_real_axis():
    prof = bt.RadialProfile(0.3, 0.5)
    mu_star = bt.reflect(bt.radial_field(prof))
    assert abs(complex(mu_star(np.array(2.0))) - float(prof.k(0.5))) < 1e-15
    assert np.max(np.abs(bt.reflect(bt.zero_field())(polar([1.5, 3.0])))) == 0.0


def test_reflection_decay_bound():
    ell, alpha = 0.4, 0.5
    mu_star = bt.reflect(bt.power_field(ell, alpha))
    r = 1 + np.geomspace(1e-6, 10, 200)
    z = polar(r)
    assert np.all(np.abs(mu_star(z)) <= ell * (np.abs(z) - 1) ** alpha + 1e-15)


def test_radial_map_trivial_profile():
    m = bt.RadialMap(bt.RadialProfile(0.0))
    r = np.linspace(0.0, 1.0, 50)
    assert np.max(np.abs(m.R(r) - r)) < 1e-14


def test_radial_map_constant_profile_is_power():
    m = bt.RadialMap(bt.RadialProfile(0.2))
    r = np.linspace(1e-3, 1.0, 200)
    assert np.max(np.abs(m.R(r) - r ** 1.5)) < 1e-12
    assert np.max(np.abs(m.dR(r) - 1.5 * r ** 0.5)) < 1e-11


def test_radial_map_recovers_its_dilatation():
    prof = bt.RadialProfile(0.3, 0.5)
    m = bt.RadialMap(prof)
    z = polar(np.linspace(0.01, 0.99, 64))
    want = prof.k(np.abs(z)) * z / np.conj(z)
    assert np.max(np.abs(m.dilatation(z) - want)) < 1e-8


def test_radial_map_inverse():
    m = bt.RadialMap(bt.RadialProfile(0.3, 0.5))
    z = polar(np.linspace(0.05, 0.95, 10), 8)
    assert np.max(np.abs(m.inverse(m(z)) - z)) < 1e-12


def test_composition_with_itself_is_zero():
    prof = bt.RadialProfile(0.3, 0.5)
    mu = bt.radial_field(prof)
    out = bt.compose_dilatation(mu, mu, bt.RadialMap(prof))
    assert np.max(np.abs(out(polar(np.linspace(0, 0.99, 30))))) < 1e-15


def test_composition_of_two_radial_maps():
    p1, p2 = bt.RadialProfile(0.2), bt.RadialProfile(0.3, 0.5)
    m1, m2 = bt.RadialMap(p1), bt.RadialMap(p2)
    out = bt.compose_dilatation(bt.radial_field(p1), bt.radial_field(p2), m2)
    rho = np.linspace(0.05, 0.95, 40)
    r = m2.inverse_radius(rho)
    G = m1.R(r)
    dG = m1.dR(r) / m2.dR(r)
    zeta = polar(rho, 16)
    want = radial_dilatation_from_radius(G, dG, rho)[:, None] * zeta / np.conj(zeta)
    assert np.max(np.abs(out(zeta) - want)) < 1e-8


def test_inverse_dilatation_weighted_norm_bound():
    alpha = 0.5
    prof = bt.RadialProfile(0.3, alpha)
    m = bt.RadialMap(prof)
    nu = bt.radial_field(prof)
    inv = bt.compose_dilatation(bt.zero_field(), nu, m)
    grid = ScanGrid()
    A = bt.distortion_constant(m, grid.radii)
    lhs = bt.norms(inv, alpha, grid).weighted_norm_est
    rhs = (2 * A) ** alpha * bt.norms(nu, alpha, grid).weighted_norm_est
    assert lhs <= rhs


def test_boundary_ratio_band_of_power_map():
    # (1 - r^1.5)/(1 - r) runs from 1 at r = 0 to 1.5 at r -> 1
    lo, hi = bt.boundary_ratio_band(bt.RadialMap(bt.RadialProfile(0.2)), np.linspace(0, 1 - 1e-6, 500))
    assert abs(lo - 1.0) < 1e-12
    assert abs(hi - 1.5) < 1e-5


def test_profile_rejects_ell_of_one():
    with pytest.raises(ValueError):
        bt.RadialProfile(1.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.9, 0.9), st.floats(0.05, 1.0), st.floats(0.0, 0.999))
def test_radial_map_dilatation_property(ell, alpha, r):
    prof = bt.RadialProfile(ell, alpha)
    m = bt.RadialMap(prof)
    z = np.array([r * np.exp(0.7j)]) if r > 0 else np.array([1e-3 + 0j])
    want = prof.k(np.abs(z)) * np.exp(2j * np.angle(z))
    assert np.max(np.abs(m.dilatation(z) - want)) < 1e-12
    if m.R(np.abs(z))[0] > 1e-200:
        # quotient of the Wirtinger derivatives, where R does not underflow
        assert np.max(np.abs(m.dzbar(z) / m.dz(z) - want)) < 1e-7


def test_radial_map_dilatation_near_origin():
    m = bt.RadialMap(bt.RadialProfile(0.5, 1.0))
    z = np.array([1.6e-257 * np.exp(0.7j), 5e-324 + 5e-324j, 0j])
    mu = m.dilatation(z)
    assert np.all(np.isfinite(mu)) and np.all(np.abs(np.abs(mu[:2]) - 0.5) < 1e-15)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
def test_kappa_bounded_by_sup_and_monotone(ell, alpha):
    rep = bt.norms(bt.radial_field(bt.RadialProfile(ell, alpha)), alpha, ScanGrid(n_angles=16, n_radial=48))
    t, k = rep.kappa()
    assert np.all(np.diff(k) >= 0)
    assert np.all(k <= rep.sup_norm_est)
