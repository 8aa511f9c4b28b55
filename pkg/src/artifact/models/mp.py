"""Manneville-Pomeau map in the LSV form, its Markov partition and the induced IFS."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..ifs import AffineBranch, ChainBranch, LSVInverseBranch, MarkovIFS, lsv_left_inverse
from ..measures import EmpiricalMeasure
from ..symbolic import Alphabet
from ..thermo import GibbsModel, Potential, bowen_root, normalize, pressure_limit


def T(x, alpha):
    """T(x) = x(1 + 2^a x^a) for x < 1/2, 2x - 1 otherwise."""
    x = np.asarray(x, dtype=float)
    return np.where(x < 0.5, x * (1.0 + (2.0 * x) ** alpha), 2.0 * x - 1.0)


def f0(x):
    return (np.asarray(x, dtype=float) + 1.0) / 2.0


def f1(x, alpha):
    return lsv_left_inverse(x, alpha)


@dataclass
class MPSystem:
    alpha: float
    max_return: int
    points: np.ndarray                    # x_0 = 1, x_1 = 1/2, x_{n+1} = f_1(x_n)
    branches: list = field(repr=False)    # g_a = f_0 o f_1^a on I = [1/2, 1]
    return_times: np.ndarray = None

    @property
    def I(self):
        return (0.5, 1.0)

    def cell(self, a: int):
        """A_a = g_a(I) as (lo, hi)."""
        v = self.branches[a].value(np.array([0.5, 1.0]))
        return float(min(v)), float(max(v))

    def ifs(self) -> MarkovIFS:
        return MarkovIFS(list(self.branches), ambient=self.I, kappa_plus=0.5,
                         distortion_alpha=1.0, name=f"mp_induced_a{self.alpha:g}",
                         meta={"alpha": self.alpha, "max_return": self.max_return})


def mp_build(alpha: float, max_return: int = 30) -> MPSystem:
    if not (0 < alpha < 1):
        raise ValueError("alpha must lie in (0, 1)")
    if max_return < 2:
        raise ValueError("max_return must be >= 2")
    pts = [1.0, 0.5]
    for _ in range(max_return):
        pts.append(float(f1(pts[-1], alpha)))
    f0b = AffineBranch(0.5, 0.5, domain=(0.0, 1.0))
    f1b = LSVInverseBranch(alpha, domain=(0.0, 1.0))
    branches = []
    for a in range(max_return + 1):
        if a == 0:
            branches.append(AffineBranch(0.5, 0.5, domain=(0.5, 1.0), label=0))
        else:
            branches.append(ChainBranch([f0b] + [f1b] * a, domain=(0.5, 1.0), label=a))
    return MPSystem(alpha, max_return, np.array(pts), branches, np.arange(max_return + 1) + 1)


def return_time(x, alpha, cap: int = 10_000):
    """First return time R(x) to I = [1/2, 1] for x in I."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = T(x, alpha)
    R = np.ones(x.shape, dtype=int)
    active = y < 0.5
    for _ in range(cap):
        if not active.any():
            break
        y = np.where(active, T(y, alpha), y)
        R = R + active
        active = active & (y < 0.5)
    return R


def induced_model(mp: MPSystem, delta: float) -> GibbsModel:
    """phi = S_R(-delta log T') so that w_a(x) = |g_a'(x)|^delta."""
    tail_bound = _tail_mass(mp, delta)
    return GibbsModel(mp.ifs(), Potential("induced", delta=float(delta)),
                      Alphabet(mp.max_return + 1, tail_truncated=True, tail_mass_bound=tail_bound),
                      name=f"mp_induced_a{mp.alpha:g}_d{delta:.6g}",
                      meta={"alpha": mp.alpha, "delta": delta})


def _tail_mass(mp: MPSystem, delta: float) -> float:
    # |g_a'| ~ C a^{-(1+1/alpha)}; bound the discarded sum by an integral of the last term
    b = mp.branches[-1]
    last = float(np.max(np.abs(b.deriv(np.linspace(0.5, 1.0, 9))))) ** delta
    s = delta * (1.0 + 1.0 / mp.alpha)
    K = mp.max_return
    return float(last * K / (s - 1.0)) if s > 1 else float("inf")


def bowen_delta(mp: MPSystem, degree: int = 48, tol: float = 1e-10) -> float:
    ifs = mp.ifs()

    def P(delta):
        m = GibbsModel(ifs, Potential("induced", delta=float(delta)), Alphabet(mp.max_return + 1))
        return pressure_limit(m, 0.0, 0.0, degree)

    return bowen_root(P, lo=1e-3, hi=1.0, tol=tol)


def normalized_induced(mp: MPSystem, delta: float | None = None, degree: int = 48):
    if delta is None:
        delta = bowen_delta(mp, degree)
    base = induced_model(mp, delta)
    return delta, normalize(base, degree)


def mp_project(induced: EmpiricalMeasure | np.ndarray, mp: MPSystem) -> EmpiricalMeasure:
    """Each x in A_a emits x, T(x), ..., T^a(x); all emitted points weighted equally."""
    xs = induced.samples if isinstance(induced, EmpiricalMeasure) else np.asarray(induced, dtype=float)
    if np.any((xs < 0.5 - 1e-12) | (xs > 1.0 + 1e-12)):
        raise ValueError("induced samples must lie in [1/2, 1]")
    R = return_time(xs, mp.alpha)
    out = [xs]
    y = xs.copy()
    alive = R - 1  # a = R - 1 further points
    k = 0
    while np.any(alive > k):
        m = alive > k
        y = np.where(m, T(y, mp.alpha), y)
        out.append(y[m])
        k += 1
    seed = induced.seed if isinstance(induced, EmpiricalMeasure) else None
    return EmpiricalMeasure(np.concatenate(out), seed, 0)


def uni_closed_form(alpha: float) -> float:
    """inf over x in [1/2,1] of a(a+1)2^a u^(a-1)/(1+(a+1)2^a u^a)^2, u = f_1(x).

    The expression decreases in u and u = f_1(x) increases in x, so the
    infimum sits at x = 1, u = 1/2.
    """
    return 2.0 * alpha * (alpha + 1.0) / (alpha + 2.0) ** 2


def uni_integrand(x, alpha):
    u = f1(x, alpha)
    k = (alpha + 1.0) * 2.0 ** alpha
    return alpha * k * u ** (alpha - 1.0) / (1.0 + k * u ** alpha) ** 2
