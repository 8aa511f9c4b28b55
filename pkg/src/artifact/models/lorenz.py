"""Two-branch induced Lorenz-like model g_0, g_1 and its fixed-point table."""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np
from scipy.optimize import brentq

from ..ifs import ChainBranch, LorenzInverseBranch, MarkovIFS


@dataclass
class LorenzSystem:
    a: float
    alpha: float
    b0: float
    b1: float
    domain: tuple = (-0.2, 0.2)

    def __post_init__(self):
        if not (0 < self.alpha < 1):
            raise ValueError("alpha must lie in (0, 1)")
        if not (0 < self.a <= 2 ** self.alpha + 1e-15):
            raise ValueError("need 0 < a <= 2^alpha")

    @property
    def g0(self) -> LorenzInverseBranch:
        return LorenzInverseBranch(self.a, self.alpha, self.b0, -1, domain=self.domain, label=0)

    @property
    def g1(self) -> LorenzInverseBranch:
        return LorenzInverseBranch(self.a, self.alpha, self.b1, +1, domain=self.domain, label=1)

    def ifs(self) -> MarkovIFS:
        return MarkovIFS([self.g0, self.g1], ambient=self.domain, name="lorenz_induced",
                         distortion_alpha=1.0,
                         meta={"a": self.a, "alpha": self.alpha, "b0": self.b0, "b1": self.b1})


def fixed_point(branch, lo: float, hi: float, tol: float = 1e-15) -> float:
    """Attracting fixed point: damped iteration for a bracket, then bisection polish."""
    f = lambda x: float(branch.value(np.array(x))) - x
    x = 0.5 * (lo + hi)
    for _ in range(200):
        x = 0.5 * (x + float(branch.value(np.array(x))))
    # polish on a small bracket around the iterate
    h = 1e-6
    a, b = max(lo, x - h), min(hi, x + h)
    if f(a) * f(b) > 0:
        a, b = lo, hi
    return brentq(f, a, b, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)


def lorenz_report(a: float = 1.1, alpha: float = 0.25, b0: float = -0.5, b1: float = 0.5) -> dict:
    sys = LorenzSystem(a, alpha, b0, b1)
    g0, g1 = sys.g0, sys.g1
    lo, hi = sys.domain
    x0 = fixed_point(g0, lo, hi)
    x1 = fixed_point(g1, lo, hi)
    g10 = ChainBranch([g1, g0])
    x10 = fixed_point(g10, lo, hi)
    d0 = float(g0.deriv(np.array(x0)))
    d1 = float(g1.deriv(np.array(x1)))
    d10 = float(g10.deriv(np.array(x10)))
    defect = float(np.log(d10) - np.log(d0) - np.log(d1))
    p = 1.0 / alpha
    return {
        "params": asdict(sys),
        "g0": f"-{a ** -p:.6f} * ({-b0:g} - x)^{p:g}",
        "g1": f"{a ** -p:.6f} * ({b1:g} + x)^{p:g}",
        "x0": x0, "x1": x1, "x10": x10,
        "g0_prime_x0": d0, "g1_prime_x1": d1,
        "product": d0 * d1,
        "g10_prime_x10": d10,
        "defect": defect,
        "abs_defect": abs(defect),
    }
