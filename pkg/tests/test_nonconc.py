import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.measures import make_rngs
from artifact.models import lyons, mp as mpm
from artifact.models.affine import equal_slope_model
from artifact.nonconc import (X, cohomology_defect, delta_n, holder_bound, holder_quotient, lambert_constant,
                              mnl_statistic, qnl_fit, qnl_statistic, tree_loss_bruteforce, tree_loss_exact,
                              uni_margin)
from artifact.symbolic import words_array

LY = lyons.lyons_ifs(0.5, 4)
word = st.lists(st.integers(0, 3), min_size=1, max_size=6)
pt = st.floats(0.0, 1.0)


@given(word, word, pt, pt)
@settings(max_examples=60, deadline=None)
def test_cocycle_identity(a_outer, a_inner, x, y):
    lhs = X(LY, a_outer + a_inner, x, y)
    gx = LY.compose_arrays(np.asarray([a_inner]), x)[0][0]
    gy = LY.compose_arrays(np.asarray([a_inner]), y)[0][0]
    assert lhs == pytest.approx(X(LY, a_outer, gx, gy) + X(LY, a_inner, x, y), abs=1e-12)


@given(st.integers(1, 5), st.data(), pt, pt)
@settings(max_examples=60, deadline=None)
def test_delta_antisymmetry(n, data, x, y):
    a = data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    b = data.draw(st.lists(st.integers(0, 3), min_size=n, max_size=n))
    d = delta_n(a, b, x, y, LY)
    assert delta_n(b, a, x, y, LY) == -d
    assert delta_n(a, b, y, x, LY) == -d


def test_holder_bound_holds_for_enumerated_words():
    xs = np.linspace(0, 1, 9)
    for n in range(1, 8):
        bound = holder_bound(LY, n)
        W = words_array(n, 4)
        for i in range(len(xs)):
            for j in range(i + 1, len(xs)):
                L = (LY.compose_arrays(W, xs[i])[1] - LY.compose_arrays(W, xs[j])[1]) / abs(xs[i] - xs[j])
                assert np.max(np.abs(L)) <= bound * (1 + 1e-12)


def test_qnl_monotone_in_interval():
    m = lyons.sub_model(0.5)
    cache = {}
    vals = [qnl_statistic(m, 5, (-s, s), cache=cache).value for s in (0.5, 0.2, 0.05, 0.01)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    inner = qnl_statistic(m, 5, (0.01, 0.05), cache=cache).value
    assert inner <= qnl_statistic(m, 5, (0.0, 0.1), cache=cache).value


def test_qnl_monte_carlo_agrees_with_exact():
    m = lyons.sub_model(0.5)
    ex = qnl_statistic(m, 4, (-0.1, 0.1)).value
    mc = qnl_statistic(m, 4, (-0.1, 0.1), mode="monte_carlo", samples=100_000, seed=1)
    assert abs(mc.value - ex) <= 4 * mc.stderr


def test_affine_qnl_pinned():
    m = equal_slope_model(0.3, 2)
    for n in range(1, 7):
        assert qnl_statistic(m, n, (-1e-9, 1e-9)).value == pytest.approx(1.0, abs=1e-12)
    f = qnl_fit(m, [2, 3, 4], [0.5, 0.1, 0.01])
    assert not f.passed and "violation" in f.verdict


def test_uni_affine_zero_and_lyons_positive():
    assert uni_margin(equal_slope_model(), 2).c0 == 0.0
    u = uni_margin(lyons.sub_model(0.5), 2)
    assert u.c0 > 0


def test_uni_pair_tiebreak_stable():
    a = uni_margin(lyons.sub_model(0.5), 2)
    b = uni_margin(lyons.sub_model(0.5), 2)
    assert a.pair == b.pair and a.c0 == b.c0


@pytest.mark.parametrize("alpha", [0.2, 0.6])
def test_mp_uni_matches_closed_form(alpha):
    s = mpm.mp_build(alpha)
    u = uni_margin(s.ifs(), 3, "suggested")
    assert u.c0 == pytest.approx(mpm.uni_closed_form(alpha), abs=1e-8)


def test_holder_quotient_requires_distinct_points():
    with pytest.raises(ValueError):
        holder_quotient(LY, (0, 1), 0.3, 0.3)


def test_mnl_affine_is_atom():
    m = equal_slope_model()
    xs = make_rngs(0)[0].random(10_000)
    r = mnl_statistic(m.ifs, (0, 0, 1), (0, 1), 0.5, xs)
    assert r.atom and math.isinf(r.C_mnl) and r.ks_to_uniform == 1.0


def test_cohomology_defect_affine_zero():
    m = equal_slope_model(0.3, 2)
    assert abs(cohomology_defect(m.ifs.branches[0], m.ifs.branches[1])) < 1e-12


def test_lambert_constant_domain():
    assert lambert_constant(1.0, 0.25) > 1
    with pytest.raises(ValueError):
        lambert_constant(1.0, 0.5)


def _rescaled(model, x, y, z, t, sigma, alpha, n, k):
    """Autosimilarity: split off k inner letters and recurse on depth n - k."""
    ifs = model.ifs
    d = abs(y - z) ** alpha
    tot = 0.0
    for b in words_array(k, model.alphabet):
        W = b[None, :]
        gx = ifs.compose_arrays(W, x)[0][0]
        gy, ly = ifs.compose_arrays(W, y)
        gz, lz = ifs.compose_arrays(W, z)
        dd = abs(gy[0] - gz[0]) ** alpha
        lam_b = (ly[0] - lz[0]) / d
        w = math.exp(model.evaluate(W, x)[2][0])
        tot += w * tree_loss_bruteforce(model, gx, gy[0], gz[0], (t - lam_b) * d / dd, sigma * d / dd,
                                        alpha, n - k)
    return tot


@pytest.mark.parametrize("k", [1, 2])
def test_tree_loss_autosimilarity(k):
    m = lyons.lyons_model(0.5, 3, renormalize=True)
    rng = make_rngs(11)[0]
    for _ in range(3):
        x, y, z = rng.random(3)
        w = rng.integers(0, 3, 8)
        ly = m.ifs.compose_arrays(w[None, :], y)[1][0]
        lz = m.ifs.compose_arrays(w[None, :], z)[1][0]
        t = (ly - lz) / abs(y - z)
        for n in range(k + 1, 9):
            direct = tree_loss_bruteforce(m, x, y, z, t, 0.05, 1.0, n)
            assert _rescaled(m, x, y, z, t, 0.05, 1.0, n, k) == pytest.approx(direct, abs=1e-12)


def test_tree_loss_pruned_matches_bruteforce():
    m = lyons.lyons_model(0.5, 4, renormalize=True)
    rng = make_rngs(3)[0]
    for _ in range(4):
        x, y, z = rng.random(3)
        t = rng.uniform(-1, 1)
        for n in (3, 5, 7):
            L, _ = tree_loss_exact(m, x, y, z, t, 0.1, 1.0, n)
            assert L == pytest.approx(tree_loss_bruteforce(m, x, y, z, t, 0.1, 1.0, n), abs=1e-12)
