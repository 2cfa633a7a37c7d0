import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcdecay import beltrami as bt
from qcdecay import certify as cf
from qcdecay import schwarzian as sz
from qcdecay.errors import BadPartition, UnsupportedKind


# -- recurrence ----------------------------------------------------------------

def test_lambda_threshold_values():
    assert abs(cf.lambda_threshold(0.5) - 0.5 ** (0.25 / 1.75)) < 1e-15
    assert abs(cf.lambda_threshold(0.5) - 0.9057) < 1e-4
    assert abs(cf.choose_lambda(0.5) - 0.9529) < 1e-4
    assert abs(cf.lambda_threshold(0.3) - 0.5 ** (0.49 / 1.39)) < 1e-15
    assert abs(cf.lambda_threshold(1 - 1e-9) - 1) < 1e-12


def test_choose_lambda_rejects_endpoints():
    for a in (0.0, 1.0):
        with pytest.raises(ValueError):
            cf.choose_lambda(a)


def test_recurrence_first_steps():
    tr = cf.recurrence(0.5, 0.9529, n_max=5)
    assert tr.s[0] == 1.0
    assert abs(tr.s[1] - (2 * 0.9529) ** 2) < 1e-12
    assert abs(tr.s[1] - 3.632) < 1e-3


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.7])
def test_recurrence_diverges(alpha):
    t0 = time.perf_counter()
    tr = cf.recurrence(alpha, cf.choose_lambda(alpha))
    assert time.perf_counter() - t0 < 1.0
    assert tr.increasing and tr.diverged and tr.passed
    assert len(tr.log_s) == 10_001
    assert tr.max_relation_error < 1e-20


def test_recurrence_negative_control():
    tr = cf.recurrence(0.5, 0.5)
    assert tr.s[:3] == (1.0, 1.0, 0.25)
    assert not tr.passed


def test_recurrence_threshold_index():
    tr = cf.recurrence(0.5, cf.choose_lambda(0.5), n_max=50, tau=1e-3)
    n = tr.N_threshold
    assert tr.s[n + 1] * 1e-3 >= 1 > tr.s[n] * 1e-3


# -- partitions ----------------------------------------------------------------

def test_zero_annuli_give_zero_bound():
    assert cf.decomposition_bound([1.0, 0.5, 0.0], [0.0, 0.0], 2.0) == 0.0


def test_single_annulus_written_out():
    r0, k, z = 0.6, 0.3, 1.7 + 0.4j
    az2 = abs(z) ** 2
    want = 12 * (k / (az2 - 1) + k * r0 / (az2 - r0**2))
    assert abs(cf.decomposition_bound([1.0, r0, 0.0], [k, k], z) - want) < 1e-14


def test_decomposition_dominates_joukowski_at_two():
    mu = bt.constant_field(0.2)
    radii = np.array([1.0, 0.0])
    bound = cf.decomposition_bound(radii, cf.annulus_sups(mu, radii), 2.0)
    T = abs(complex(sz.pre_schwarzian(sz.joukowski(0.2), np.array(2.0))))
    assert abs(T - 0.052632) < 1e-6
    assert bound - T >= 0


def test_decomposition_dominates_at_exterior_points():
    mu = bt.constant_field(0.2)
    f = sz.joukowski(0.2)
    for z in cf.az_points():
        tau = abs(z) - 1
        radii = cf.theorem_partition(tau, 0.5) if tau < 1 else np.array([1.0, 0.0])
        bound = cf.decomposition_bound(radii, cf.annulus_sups(mu, radii), z)
        assert bound - abs(complex(sz.pre_schwarzian(f, np.array(z)))) >= -1e-9


def test_theorem_partition_shape():
    r = cf.theorem_partition(0.1, 0.5)
    assert r[0] == 1.0 and r[-1] == 0.0
    assert abs(r[1] - 0.9) < 1e-15
    assert np.all(np.diff(r) < 0)


@pytest.mark.parametrize("tau", [0.0, 1.0, -0.5])
def test_theorem_partition_rejects_tau(tau):
    with pytest.raises(BadPartition):
        cf.theorem_partition(tau, 0.5)


@pytest.mark.parametrize(
    "radii, k",
    [([0.9, 0.0], [0.1]), ([1.0, 0.5, 0.6, 0.0], [0.1, 0.1, 0.1]), ([1.0, 0.0], [1.0]), ([1.0, 0.5, 0.0], [0.1])],
)
def test_bad_partitions_rejected(radii, k):
    with pytest.raises(BadPartition):
        cf.decomposition_bound(radii, k, 2.0)


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.floats(0.01, 0.99), min_size=1, max_size=6, unique=True),
    st.floats(0.0, 0.9),
    st.floats(1.01, 5.0),
    st.data(),
)
def test_refinement_never_lowers_bound(inner, kmax, zr, data):
    radii = np.concatenate([[1.0], np.sort(inner)[::-1], [0.0]])
    k = np.array(data.draw(st.lists(st.floats(0.0, kmax), min_size=radii.size - 1, max_size=radii.size - 1)))
    i = data.draw(st.integers(0, radii.size - 2))
    r2, k2 = cf.partition_refines(radii, k, i)
    before = cf.decomposition_bound(radii, k, zr)
    # splitting a zero annulus leaves the bound equal up to summation order
    assert cf.decomposition_bound(r2, k2, zr) >= before * (1 - 1e-14)


# -- explicit decay constant ---------------------------------------------------

def test_decay_bound_values():
    assert cf.theorem_decay_bound(0.0, 0.5, 0.3) == 0.0
    C = cf.decay_constant(0.5, 0.9529)
    assert abs(C - 6 / 0.0471) < 1e-9
    assert abs(cf.theorem_decay_bound(1.0, 0.5, 1.0, 0.9529) - 84.93) < 1e-2


def test_decay_bound_dominates_closed_form_beta():
    # z + 0.2/z: the exterior field is constant on D, so ell is its grid weighted norm
    alpha = 0.5
    ell = bt.norms(bt.constant_field(0.2), alpha).weighted_norm_est
    ts = 2.0 ** -np.arange(1, 11.0)
    rep = sz.decay_scan(sz.joukowski(0.2), alpha, ts)
    for t, beta, _ in rep.table:
        assert cf.theorem_decay_bound(ell, alpha, t) >= beta


# -- distortion ----------------------------------------------------------------

def test_koebe_extremal_is_attained():
    recs = cf.distortion_checks(sz.koebe(), "koebe")
    assert all(r.passed for r in recs)
    on_axis = [r for r in recs if r.name == "koebe_growth_upper" and r.inputs["z"][1] == 0 and r.inputs["z"][0] > 0]
    assert max(abs(r.margin) for r in on_axis) < 1e-9


def test_mori_arithmetic_at_point_nine():
    m = bt.RadialMap(bt.RadialProfile(0.2))
    recs = cf.distortion_checks(m, "mori", points=[0.9])
    d = 1 - 0.9**1.5
    assert abs(d - 0.1462) < 1e-4
    lo, hi = (r.bound for r in recs)
    assert abs(lo - 0.1**1.5 / 16) < 1e-15 and abs(hi - 16 * 0.1 ** (1 / 1.5)) < 1e-14
    assert all(abs(r.measured - d) < 1e-12 and r.passed for r in recs)


def test_mori_default_grid_has_no_violations():
    recs = cf.distortion_checks(bt.RadialMap(bt.RadialProfile(0.2)), "mori")
    assert len(recs) == 2000 and all(r.passed for r in recs)


def test_mori_alpha_band_is_stable():
    recs = cf.distortion_checks(bt.RadialMap(bt.RadialProfile(0.3, 0.5)), "mori_alpha")
    assert all(r.passed for r in recs)


def test_az_integral_closed_form():
    # int_D |w - zeta|^-4 dA = pi / (|zeta|^2 - 1)^2
    k = 0.2
    zeta = np.array([2.0, 1.5j, -3 + 0.1j])
    want = 6 * k / np.sqrt(1 - k * k) * 2 / (np.abs(zeta) ** 2 - 1) ** 2
    got = cf.az_integral_rhs(bt.constant_field(k), zeta)
    assert np.max(np.abs(got - want) / want) < 1e-5


def test_az_integral_dominates_at_two():
    recs = cf.distortion_checks(sz.joukowski(0.2), "az_integral", points=[2.0], field=bt.constant_field(0.2))
    assert abs(recs[0].measured - 0.08310) < 1e-5
    assert recs[0].margin >= 0


def test_cross_ratio_distance_bound():
    recs = cf.distortion_checks(bt.RadialMap(bt.RadialProfile(0.2)), "crossratio")
    assert all(r.passed for r in recs)


def test_cross_ratio_with_infinity():
    assert cf.cross_ratio(0.0, np.inf, 1.0, 0.5) == (0 - 1.0) / (0 - 0.5)


@pytest.mark.parametrize("z, w", [(0.3 + 0.2j, 0.5 + 0.1j), (2 + 1j, -1 + 0.5j), (0.5, 0.5 + 0.3j)])
def test_punctured_sphere_distance_symmetries(z, w):
    d = cf.punctured_sphere_distance(z, w)
    assert cf.punctured_sphere_distance(z, z) < 1e-7
    for other in (cf.punctured_sphere_distance(w, z), cf.punctured_sphere_distance(1 - z, 1 - w), cf.punctured_sphere_distance(1 / z, 1 / w)):
        assert abs(other - d) < 1e-9


def test_unknown_kind():
    with pytest.raises(UnsupportedKind):
        cf.distortion_checks(sz.koebe(), "bieberbach")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False), min_size=4, max_size=4, unique=True),
       st.complex_numbers(min_magnitude=0.1, max_magnitude=3, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_cross_ratio_affine_invariance(zs, a, b):
    z1, z2, z3, z4 = zs
    if min(abs(z1 - z4), abs(z2 - z3)) < 1e-3:
        return
    c1 = cf.cross_ratio(z1, z2, z3, z4)
    c2 = cf.cross_ratio(*(a * z + b for z in zs))
    assert abs(c1 - c2) <= 1e-9 * max(1.0, abs(c1))
