import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.measures import EmpiricalMeasure
from artifact.models import lyons, mp as mpm, staircase as sc
from artifact.models.lorenz import LorenzSystem, lorenz_report


# -- conductance system ------------------------------------------------------

def test_fixed_points_half():
    x0, x1, x10 = lyons.lyons_fixed_points(0.5)
    assert x0 == pytest.approx(0.5, abs=1e-15)
    assert x1 == pytest.approx((-0.5 + math.sqrt(1.25)) / 2, abs=1e-15)
    assert lyons.psi(0, 0.5, x0) == pytest.approx(x0, abs=1e-12)
    assert lyons.psi10(0.5, x10) == pytest.approx(x10, abs=1e-12)


def test_fixed_points_parabolic_limit():
    assert max(lyons.lyons_fixed_points(1e-10)) < 1e-4


@given(st.floats(0.01, 0.99))
@settings(max_examples=40, deadline=None)
def test_Q_routes_agree(t):
    assert lyons.lyons_Q(t) == pytest.approx(lyons.lyons_Q_fixed_point_route(t), abs=1e-10)


def test_Q_nonzero_and_limit():
    assert min(abs(lyons.lyons_Q(k / 100)) for k in range(1, 100)) > 0
    assert abs(lyons.lyons_Q(1e-12)) < 1e-5


def test_psi10_is_psi1_after_psi0():
    xs = np.linspace(0, 1, 11)
    assert np.allclose(lyons.psi10(0.3, xs), lyons.psi(1, 0.3, lyons.psi(0, 0.3, xs)), atol=1e-14)


def test_branch_maps_into_unit_interval():
    for n in range(10):
        v = lyons.psi(n, 0.5, np.array([0.0, 1.0]))
        assert 0 < v.min() and v.max() < 1


def test_lyons_weights_sum():
    m = lyons.lyons_model(0.5, 10)
    assert m.potential.weights.sum() == pytest.approx(1 - 2.0 ** -10)
    assert m.alphabet.tail_mass_bound == pytest.approx(2.0 ** -10)


def test_light_tail_exact_and_ratio():
    for g in (0.5, 2.0):
        for t in (0.1, 0.9):
            assert lyons.S_direct(g, t) == pytest.approx(lyons.S_polylog(g, t), rel=1e-12)
            assert lyons.ratio_limit(g, t) == pytest.approx(0.5, abs=1e-6)
    assert [lyons.fubini(k) for k in range(5)] == [1, 1, 3, 13, 75]


def test_bad_t_rejected():
    with pytest.raises(ValueError):
        lyons.lyons_fixed_points(1.5)


# -- intermittent map ----------------------------------------------------------

def test_mp_right_branch_and_g0():
    xs = np.linspace(0.5, 1, 11)
    assert np.allclose(mpm.T(xs, 0.4), 2 * xs - 1, atol=0)
    s = mpm.mp_build(0.4)
    assert np.allclose(s.branches[0].value(xs), (xs + 1) / 2, atol=0)


def test_mp_partition_telescopes():
    a = 0.6
    s = mpm.mp_build(a, 20)
    assert s.points[1] == 0.5
    assert mpm.T(s.points[2], a) == pytest.approx(0.5, abs=1e-12)
    for n in range(2, 20):
        assert mpm.T(s.points[n + 1], a) == pytest.approx(s.points[n], abs=1e-12)


def test_mp_induced_branches_invert_first_return():
    a = 0.5
    s = mpm.mp_build(a, 8)
    # open interval: the endpoint x=1 lands on the discontinuity at 1/2
    xs = np.linspace(0.5, 1, 9)[1:-1]
    for k in range(1, 6):
        y = s.branches[k].value(xs)
        z = y
        for _ in range(k + 1):
            z = mpm.T(z, a)
        assert np.allclose(z, xs, atol=1e-10)
        assert np.all(mpm.return_time(y, a) == k + 1)


def test_mp_project_examples():
    s = mpm.mp_build(0.5)
    x_a0 = np.array([0.8, 0.9])
    assert np.array_equal(mpm.mp_project(x_a0, s).samples, np.sort(x_a0))
    x = float(s.branches[2].value(np.array(0.75)))
    out = mpm.mp_project(np.array([x]), s).samples
    assert out.size == 3
    assert np.allclose(np.sort(out), np.sort([x, mpm.T(x, 0.5), mpm.T(mpm.T(x, 0.5), 0.5)]))
    rng = np.random.default_rng(0)
    proj = mpm.mp_project(EmpiricalMeasure(rng.uniform(0.5, 1, 5000)), s)
    assert proj.interval_mass(0.0, 0.4999) > 0


def test_mp_normalized_induced_operator():
    from artifact.thermo import transfer_apply
    s = mpm.mp_build(0.5, 30)
    delta, nm = mpm.normalized_induced(s)
    assert 0 < delta <= 1
    tail = mpm._tail_mass(s, delta)
    assert transfer_apply(lambda y: np.ones_like(y), 0.7, 1, nm) == pytest.approx(1.0, abs=max(1e-8, 2 * tail))


def test_mp_bad_parameters():
    with pytest.raises(ValueError):
        mpm.mp_build(1.2)
    with pytest.raises(ValueError):
        mpm.mp_build(0.5, 1)


# -- Lorenz two-branch model -----------------------------------------------------

def test_lorenz_table():
    r = lorenz_report(1.1, 0.25, -0.5, 0.5)
    assert r["x0"] == pytest.approx(-0.07429, abs=1e-4)
    assert r["g0_prime_x0"] == pytest.approx(0.51748, abs=1e-4)
    assert r["product"] == pytest.approx(0.26779, abs=1e-4)
    assert r["x10"] == pytest.approx(0.03259, abs=1e-4)
    assert r["g10_prime_x10"] == pytest.approx(0.077825, abs=1e-5)
    assert r["abs_defect"] == pytest.approx(1.23572, abs=1e-4)


def test_lorenz_branches_contract():
    s = LorenzSystem(1.1, 0.25, -0.5, 0.5)
    xs = np.linspace(-0.2, 0.2, 101)
    assert np.max(np.abs(s.g0.deriv(xs))) < 1 and np.max(np.abs(s.g1.deriv(xs))) < 1


# -- staircase -----------------------------------------------------------------

def test_staircase_degenerate_cdf_gives_affine():
    M = 256
    masses = np.zeros(M)
    masses[-1] = 1.0
    s = sc.staircase_build(sc.FrostmanMeasure(masses))
    xs = np.linspace(-1, 1 - 2 / M, 50)
    assert np.allclose(s.g1.value(xs), 0.09 * xs + 0.7, atol=1e-14)


def test_staircase_uniform_derivative():
    s = sc.staircase_build(sc.FrostmanMeasure.uniform(1024))
    xs = np.linspace(-1, 1, 33)
    d = s.g1.deriv(xs)
    assert np.allclose(d, 0.09 * np.exp((xs + 1) / 2), rtol=1e-12)
    assert np.all(np.diff(d) > 0)
    assert d.min() >= 0.09 - 1e-15 and d.max() <= 0.09 * math.e + 1e-15
    # value is the integral of the derivative
    h = 1e-6
    assert np.allclose((s.g1.value(xs[1:-1] + h) - s.g1.value(xs[1:-1] - h)) / (2 * h), d[1:-1], rtol=1e-6)


def test_staircase_zeta_and_delta():
    s = sc.staircase_build(sc.FrostmanMeasure.uniform(512))
    assert sc.zeta(s, 0.0) == pytest.approx(2.0, abs=1e-12)
    assert sc.zeta(s, 1.0) <= 0.6
    d = sc.delta_root(s)
    assert abs(sc.zeta(s, d) - 1) <= 1e-10


def test_staircase_delta_affine_case():
    M = 64
    masses = np.zeros(M)
    masses[-1] = 1.0
    s = sc.staircase_build(sc.FrostmanMeasure(masses), 0.09, 0.09)
    # the last cell carries all mass, so zeta still depends on it; use the exact cell formula
    d = sc.delta_root(s)
    assert abs(sc.zeta(s, d) - 1) <= 1e-10


def test_staircase_delta_continuity():
    rng = np.random.default_rng(0)
    mu = sc.FrostmanMeasure(rng.random(512) + 1)
    d0 = sc.delta_root(sc.staircase_build(mu))
    pert = mu.masses + 1e-6 / 512 * rng.choice([-1, 1], 512)
    d1 = sc.delta_root(sc.staircase_build(sc.FrostmanMeasure(pert)))
    assert abs(d1 - d0) <= 1e-4


def test_staircase_separation_error():
    with pytest.raises(ValueError):
        sc.staircase_build(sc.FrostmanMeasure.uniform(64), b0=0.0, b1=0.0)
    with pytest.raises(ValueError):
        sc.staircase_build(sc.FrostmanMeasure.uniform(64), kappa=0.2)


def test_psi_iteration_properties():
    r = sc.psi_iterate(sc.FrostmanMeasure.uniform(1024), 50)
    assert sc.ks_cells(r.mu, r.mu) == 0.0
    assert max(r.mass_drift) <= 1e-8
    assert r.frostman_violations == []
    assert all(3 * r.mu.epsilon <= d < 1 for d in r.deltas)


def test_frostman_check_flags_atoms():
    masses = np.zeros(1024)
    masses[10] = 1.0
    ok, worst, _ = sc.FrostmanMeasure(masses).frostman_check()
    assert not ok and worst > 1
    assert sc.FrostmanMeasure.uniform(1024).frostman_check()[0]
