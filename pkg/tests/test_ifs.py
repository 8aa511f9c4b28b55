import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact.ifs import (AffineBranch, Branch, MarkovIFS, MoebiusBranch, compose, cylinder, nested_eval,
                          verify_distortion)
from artifact.models import lyons
from artifact.models.affine import cantor_ifs

words = st.lists(st.integers(0, 4), min_size=1, max_size=8)


@given(words, st.floats(0, 1))
@settings(max_examples=60, deadline=None)
def test_vectorized_composition_matches_nesting(w, x):
    ifs = lyons.lyons_ifs(0.5, 5)
    y, L = ifs.compose_arrays(np.asarray([w]), x)
    y2, L2 = nested_eval(w, ifs, x)
    assert y[0] == pytest.approx(y2, abs=1e-14)
    assert L[0] == pytest.approx(L2, abs=1e-12)


def test_last_letter_is_innermost():
    ifs = cantor_ifs()
    y, _ = ifs.compose_arrays(np.asarray([[1, 0]]), 0.0)
    # g_1(g_0(0)) = 2/3
    assert y[0] == pytest.approx(2 / 3)


def test_lyons_branch_is_f0_power_after_ft():
    t = 0.37
    xs = np.linspace(0, 1, 101)
    for n in range(6):
        y = lyons.ft(t, xs)
        for _ in range(n):
            y = lyons.f0(y)
        assert np.max(np.abs(y - lyons.psi(n, t, xs))) < 1e-12


def test_cylinders_nest():
    ifs = cantor_ifs()
    a = cylinder((0, 1), ifs)
    b = cylinder((0,), ifs)
    assert b[0] <= a[0] < a[1] <= b[1]
    assert a[1] - a[0] == pytest.approx(1 / 9)


def test_distortion_estimate():
    C, alpha, ok = verify_distortion(lyons.lyons_ifs(0.5, 6))
    assert ok and C > 0 and alpha == 1.0


def test_serialization_roundtrip():
    ifs = lyons.lyons_ifs(0.5, 4)
    back = MarkovIFS.from_dict(ifs.to_dict())
    xs = np.linspace(0, 1, 7)
    W = np.asarray([[0, 3, 1]] * 7)
    assert np.allclose(ifs.compose_arrays(W, xs)[0], back.compose_arrays(W, xs)[0], atol=0, rtol=0)


def test_kappa_must_contract():
    with pytest.raises(ValueError):
        MarkovIFS([AffineBranch(1.5, 0.0)], ambient=(0, 1))


def test_moebius_derivative():
    b = MoebiusBranch(1, 0.3, 2, 1.6)
    x = np.linspace(0, 1, 11)
    h = 1e-6
    num = (b.value(x + h) - b.value(x - h)) / (2 * h)
    assert np.allclose(num, b.deriv(x), rtol=1e-7)


def test_compose_rejects_inadmissible():
    from artifact.symbolic import TransitionRule
    ifs = MarkovIFS([AffineBranch(0.3, 0), AffineBranch(0.3, 0.6)], transition=TransitionRule.from_forbidden(2, [(1, 1)]))
    with pytest.raises(ValueError):
        compose((1, 1), ifs)
