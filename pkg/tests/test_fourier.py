import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.fourier import (Quadrature, QuadratureRefused, cantor_riesz, cylinder_quadrature, decay_profile,
                              fit_beta, oscillatory_integral, sinc_half, xi_grid)
from artifact.measures import sample
from artifact.models import lyons
from artifact.models.affine import cantor_model, uniform_model

CANTOR_Q = cylinder_quadrature(cantor_model(), 16)


def test_zero_frequency_gives_total_mass():
    m = sample(uniform_model(), 10_000, seed=0)
    v, se = oscillatory_integral(m, None, None, 0.0)
    assert v == pytest.approx(1.0) and se == 0.0


@pytest.mark.parametrize("xi", [1.0, 7.0, 30.0])
def test_uniform_monte_carlo_sinc(xi):
    m = sample(uniform_model(), 200_000, seed=1)
    v, se = oscillatory_integral(m, None, None, xi)
    assert abs(abs(v) - sinc_half(xi)) <= 4 * se


@given(st.floats(0.5, 200.0))
@settings(max_examples=30, deadline=None)
def test_quadrature_bounded_and_symmetric(xi):
    v, _ = oscillatory_integral(CANTOR_Q, None, None, xi)
    w, _ = oscillatory_integral(CANTOR_Q, None, None, -xi)
    assert abs(v) <= 1 + 1e-12
    assert abs(v) == pytest.approx(abs(w), abs=1e-12)


def test_cantor_self_similarity_exact():
    q = cylinder_quadrature(cantor_model(), 20)
    vals = [abs(oscillatory_integral(q, None, None, 2 * math.pi * 3 ** m)[0]) for m in range(6)]
    assert max(vals) - min(vals) < 1e-10
    assert vals[0] == pytest.approx(cantor_riesz(2 * math.pi), abs=1e-10)


def test_quadrature_refused_at_high_frequency():
    with pytest.raises(QuadratureRefused):
        oscillatory_integral(cylinder_quadrature(cantor_model(), 4), None, None, 1e4)


def test_monte_carlo_and_quadrature_cross_validate():
    m = sample(cantor_model(), 200_000, seed=2)
    for xi in (3.0, 20.0, 90.0):
        a, se = oscillatory_integral(m, None, None, xi)
        b, eb = oscillatory_integral(CANTOR_Q, None, None, xi)
        assert abs(a - b) <= 3 * (se + eb)


def test_amplitude_and_phase_functions():
    q = Quadrature.uniform(4096)
    v, _ = oscillatory_integral(q, lambda x: 2 * np.ones_like(x), lambda x: 2 * x, 0.0)
    assert v == pytest.approx(2.0)
    v, _ = oscillatory_integral(q, None, lambda x: 2 * x, 5.0)
    assert abs(v) == pytest.approx(sinc_half(10.0), abs=1e-5)


def test_grid_and_fit_helpers():
    g = xi_grid(4, 4 * 2 ** 8, 8)
    assert len(g) == 65 and g[0] == 4 and g[-1] == pytest.approx(1024)
    beta, band, res, _ = fit_beta([2, 3, 4, 5], [2.0 ** -w for w in (2, 3, 4, 5)])
    assert beta == pytest.approx(1.0) and res < 1e-12
    with pytest.raises(ValueError):
        fit_beta([1, 2], [1, 1])


def test_profile_requires_range():
    with pytest.raises(ValueError):
        decay_profile(Quadrature.uniform(64), xi_min=4, xi_max=64)


def test_uniform_profile_beta():
    r = decay_profile(Quadrature.uniform(2 ** 18), xi_min=4, xi_max=4096)
    assert r.beta_fit == pytest.approx(1.0, abs=0.1)
    assert not r.decay_failure


def test_profile_csv(tmp_path):
    r = decay_profile(Quadrature.uniform(2 ** 12), xi_min=1, xi_max=256)
    p = tmp_path / "p.csv"
    r.to_csv(p)
    lines = p.read_text().splitlines()
    assert lines[0] == "xi,magnitude,stderr,window,window_sup" and len(lines) == len(r.xi_grid) + 1
