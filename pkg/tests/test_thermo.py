import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.measures import sample
from artifact.models import lyons
from artifact.models.affine import cantor_ifs, cantor_model, equal_slope_model, uniform_model
from artifact.thermo import (DegenerateMeasure, GibbsModel, TransferMatrix, bernoulli, bowen_model,
                             gibbs_weight, light_tail_constant, lyapunov, moment_check, moment_constants,
                             normalize, pressure, pressure_limit, regularity_probe, transfer_apply)


@given(st.floats(0.05, 0.95))
@settings(max_examples=20, deadline=None)
def test_bernoulli_pressure_is_log_total_weight(p):
    m = GibbsModel(cantor_ifs(), bernoulli([p, 1 - p]))
    assert abs(pressure(m).value) < 1e-12
    assert abs(pressure_limit(m)) < 1e-10


def test_cantor_bowen_root():
    delta, norm = bowen_model(cantor_ifs())
    assert delta == pytest.approx(math.log(2) / math.log(3), abs=1e-9)
    # normalized operator fixes constants
    assert transfer_apply(lambda y: np.ones_like(y), 0.3, 3, norm) == pytest.approx(1.0, abs=1e-9)


def test_normalize_lyons():
    m = lyons.lyons_model(0.5, 8)
    nm = normalize(m)
    for x in (0.0, 0.4, 1.0):
        assert transfer_apply(lambda y: np.ones_like(y), x, 2, nm) == pytest.approx(1.0, abs=1e-8)


def test_cantor_lyapunov():
    assert lyapunov(cantor_model(), "cylinder").value == pytest.approx(math.log(3), abs=1e-12)
    assert lyapunov(cantor_model(), "spectral").value == pytest.approx(math.log(3), abs=1e-9)


def test_lyons_lyapunov_methods_agree():
    m = lyons.lyons_model(0.5, 20)
    a = lyapunov(m, "spectral").value
    b = lyapunov(m, "cylinder", depth=3).value
    assert a == pytest.approx(b, rel=2e-3)


def test_gibbs_weight_is_product_for_bernoulli():
    m = GibbsModel(cantor_ifs(), bernoulli([0.3, 0.7]))
    assert gibbs_weight((0, 1, 1), 0.5, m) == pytest.approx(0.3 * 0.7 * 0.7)


def test_transfer_matrix_bernoulli_radius():
    tm = TransferMatrix(GibbsModel(cantor_ifs(), bernoulli([0.25, 0.25])), 0.0, 16)
    assert tm.leading()[0] == pytest.approx(0.5, abs=1e-12)


def test_light_tail_finite_for_lyons():
    r = light_tail_constant(lyons.lyons_model(0.5, 20), 1.0)
    assert np.isfinite(r.value) and not r.divergent and r.ratio < 1


def test_light_tail_rejects_bad_gamma():
    with pytest.raises(ValueError):
        light_tail_constant(cantor_model(), 0.0)


def test_moment_bound_small_instance():
    m = lyons.lyons_model(0.5, 20)
    lam = lyapunov(m, "spectral").value
    mc = moment_constants(m, 1.0, lam)
    assert 0 < mc.t_gamma0 <= 1 and mc.eps_gamma0 > 0
    row = moment_check(m, 6, 0.05, mc)
    assert row.passed
    with pytest.raises(ValueError):
        moment_check(m, 6, mc.t_gamma0 * 2, mc)


def test_moment_t_zero_is_total_mass():
    m = cantor_model()
    mc = moment_constants(m, 1.0, math.log(3))
    assert moment_check(m, 5, 0.0, mc).lhs == pytest.approx(1.0)


def test_regularity_probe_uniform_exponent():
    m = sample(uniform_model(), 50_000, seed=3)
    r = regularity_probe(m.samples, [1e-3, 2e-3, 5e-3, 1e-2])
    assert r.s_est == pytest.approx(1.0, abs=0.15)


def test_regularity_probe_rejects_atoms():
    with pytest.raises(DegenerateMeasure):
        regularity_probe(np.zeros(20_000), [1e-3, 1e-2])
    with pytest.raises(ValueError):
        regularity_probe(np.random.default_rng(0).random(10), [1e-3])


def test_pressure_needs_depth():
    with pytest.raises(ValueError):
        pressure(cantor_model(), n_max=2)
