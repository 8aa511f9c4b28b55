"""Affine test systems: middle-thirds Cantor, two-halves uniform, generic affine IFS."""

from __future__ import annotations

import numpy as np

from ..ifs import AffineBranch, MarkovIFS
from ..thermo import GibbsModel, bernoulli, geometric


def affine_ifs(slopes, offsets, ambient=(0.0, 1.0), name="affine") -> MarkovIFS:
    br = [AffineBranch(s, o, domain=ambient) for s, o in zip(slopes, offsets)]
    return MarkovIFS(br, ambient=ambient, kappa_plus=float(max(abs(s) for s in slopes)),
                     distortion_C=0.0, distortion_alpha=1.0, name=name)


def cantor_ifs() -> MarkovIFS:
    return affine_ifs([1 / 3, 1 / 3], [0.0, 2 / 3], name="middle_thirds")


def cantor_model() -> GibbsModel:
    return GibbsModel(cantor_ifs(), bernoulli([0.5, 0.5]), name="middle_thirds")


def cantor_geometric(delta: float = np.log(2) / np.log(3)) -> GibbsModel:
    return GibbsModel(cantor_ifs(), geometric(delta), name="middle_thirds_geometric")


def uniform_model() -> GibbsModel:
    """Lebesgue measure on [0,1] as the Bernoulli(1/2,1/2) measure of x/2, x/2+1/2."""
    return GibbsModel(affine_ifs([0.5, 0.5], [0.0, 0.5], name="halves"), bernoulli([0.5, 0.5]),
                      name="uniform")


def equal_slope_model(slope: float = 0.3, k: int = 3) -> GibbsModel:
    offs = np.linspace(0.0, 1.0 - slope, k)
    return GibbsModel(affine_ifs([slope] * k, offs, name="equal_slope"), bernoulli([1.0 / k] * k),
                      name="equal_slope")
