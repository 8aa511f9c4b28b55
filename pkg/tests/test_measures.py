import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.measures import (EmpiricalMeasure, cylinder_measure, dkw_bound, kolmogorov_distance,
                               make_rngs, pushforward, refresh, sample, split_count)
from artifact.models import lyons
from artifact.models.affine import cantor_model, uniform_model


def test_split_count_sums():
    assert sum(split_count(10, 3)) == 10 and max(split_count(10, 3)) - min(split_count(10, 3)) <= 1


def test_sampling_is_deterministic_per_seed_and_workers():
    a = sample(cantor_model(), 1000, seed=5, workers=2)
    b = sample(cantor_model(), 1000, seed=5, workers=2)
    c = sample(cantor_model(), 1000, seed=6, workers=2)
    assert np.array_equal(a.samples, b.samples)
    assert not np.array_equal(a.samples, c.samples)


def test_uniform_sampler_close_to_lebesgue():
    m = sample(uniform_model(), 20_000, seed=1)
    assert kolmogorov_distance(m, lambda x: np.clip(x, 0, 1)) <= 3 * dkw_bound(m.size)


def test_lyons_invariance_under_refresh():
    m = lyons.sample_nu(0.5, 100_000, seed=2)
    r = refresh(m, lyons.lyons_model(0.5, 20), seed=9, letter_sampler=lyons.geometric_letters)
    assert kolmogorov_distance(m, r) <= 3 * dkw_bound(m.size)


def test_chaos_game_matches_exact_lyons_sampler():
    nu = lyons.sample_nu(0.5, 50_000, seed=4)
    gm = sample(lyons.lyons_model(0.5, 30), 50_000, seed=4)
    assert kolmogorov_distance(nu, gm) <= 3 * dkw_bound(nu.size) * np.sqrt(2)


@given(st.floats(-1, 1), st.floats(0.1, 3))
@settings(max_examples=20, deadline=None)
def test_pushforward_affine_shifts_cdf(b, a):
    m = EmpiricalMeasure(make_rngs(0)[0].random(500))
    p = pushforward(m, lambda x: a * x + b)
    xs = np.linspace(-1, 1, 9)
    assert np.allclose(p.cdf(a * xs + b), m.cdf(xs))


def test_interval_mass_and_binary_roundtrip(tmp_path):
    m = EmpiricalMeasure(np.array([0.1, 0.2, 0.2, 0.9]))
    assert m.interval_mass(0.15, 0.25) == 0.5
    f = tmp_path / "s.bin"
    m.to_binary(f)
    assert np.array_equal(EmpiricalMeasure.from_binary(f).samples, m.samples)


def test_cylinder_measure_mass():
    cm = cylinder_measure(cantor_model(), 6)
    assert cm.total() == pytest.approx(1.0)
    assert len(cm.words) == 64


def test_empty_measure_rejected():
    with pytest.raises(ValueError):
        EmpiricalMeasure(np.array([]))
