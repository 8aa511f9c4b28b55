"""Cantor-staircase IFS built from a Frostman measure, and the Psi fixed-point iteration.

The discretized measure keeps M cells of equal width on [-1, 1]; each cell's
mass is spread uniformly over the cell, so the CDF is piecewise linear and the
measure has no atoms.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from ..ifs import AffineBranch, Branch, MarkovIFS, register_branch
from ..thermo import GibbsModel, geometric

log = logging.getLogger(__name__)

LO, HI = -1.0, 1.0


@dataclass
class FrostmanMeasure:
    masses: np.ndarray
    C: float = 1.0
    epsilon: float = 0.02

    def __post_init__(self):
        m = np.asarray(self.masses, dtype=float)
        if np.any(m < 0):
            raise ValueError("negative cell mass")
        s = m.sum()
        if not s > 0:
            raise ValueError("zero total mass")
        self.masses = m / s

    @classmethod
    def uniform(cls, M: int = 4096, C: float = 1.0, epsilon: float = 0.02):
        return cls(np.full(M, 1.0 / M), C, epsilon)

    @property
    def M(self) -> int:
        return self.masses.size

    @property
    def h(self) -> float:
        return (HI - LO) / self.M

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(LO, HI, self.M + 1)

    @property
    def centers(self) -> np.ndarray:
        return LO + (np.arange(self.M) + 0.5) * self.h

    @property
    def cum(self) -> np.ndarray:
        """CDF values at cell edges (M+1 entries)."""
        c = np.concatenate([[0.0], np.cumsum(self.masses)])
        c[-1] = 1.0
        return c

    def cdf(self, x):
        x = np.clip(np.asarray(x, dtype=float), LO, HI)
        pos = (x - LO) / self.h
        i = np.minimum(np.floor(pos).astype(int), self.M - 1)
        frac = pos - i
        return self.cum[i] + self.masses[i] * frac

    def interval_mass(self, a: float, b: float) -> float:
        return float(self.cdf(b) - self.cdf(a))

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        i = rng.choice(self.M, size=count, p=self.masses)
        return LO + (i + rng.random(count)) * self.h

    def frostman_check(self, max_len: float = 0.01, min_level: int | None = None):
        """Worst ratio mu(I) / (C |I|^eps) over dyadic-length sliding intervals.

        Interval lengths are 2^-k * 2 for the dyadic lengths up to ``max_len``
        down to one cell; windows slide by half a length.
        """
        worst = 0.0
        where = None
        L = 2.0
        while L > max_len:
            L /= 2.0
        while L >= self.h * 0.999:
            starts = np.arange(LO, HI - L + 1e-15, L / 2.0)
            mass = self.cdf(starts + L) - self.cdf(starts)
            r = mass / (self.C * L ** self.epsilon)
            i = int(np.argmax(r))
            if r[i] > worst:
                worst, where = float(r[i]), (float(starts[i]), float(L))
            L /= 2.0
        return worst <= 1.0, worst, where

    def to_csv(self, path) -> None:
        lines = ["center,mass"] + [f"{c!r},{m!r}" for c, m in zip(self.centers, self.masses)]
        from pathlib import Path
        Path(path).write_text("\n".join(lines) + "\n")


def _exp_integral(F0, dF, width):
    """int_0^width exp(F0 + dF * s / width) ds, stable for small dF."""
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(np.abs(dF) > 1e-8, np.expm1(dF) / dF, 1.0 + dF / 2 + dF * dF / 6)
    return np.exp(F0) * width * q


@register_branch
class StaircaseBranch(Branch):
    """g(x) = kappa * int_0^x exp(F_mu(s)) ds + b1 with F_mu piecewise linear."""

    kind = "staircase"

    def __init__(self, kappa: float, b1: float, masses, domain=(LO, HI), label: int = 1):
        super().__init__(domain, label)
        self.kappa = float(kappa)
        self.b1 = float(b1)
        self.mu = masses if isinstance(masses, FrostmanMeasure) else FrostmanMeasure(np.asarray(masses))
        cum = self.mu.cum
        h = self.mu.h
        G = np.concatenate([[0.0], np.cumsum(_exp_integral(cum[:-1], self.mu.masses, h))])
        self._G = G                       # int_{-1}^{edge_i} exp(F)
        self._G0 = float(self._Gx(np.array(0.0)))

    def _Gx(self, x):
        x = np.clip(np.asarray(x, dtype=float), LO, HI)
        pos = (x - LO) / self.mu.h
        i = np.minimum(np.floor(pos).astype(int), self.mu.M - 1)
        w = (pos - i) * self.mu.h
        part = _exp_integral(self.mu.cum[i], self.mu.masses[i] * (w / self.mu.h), w)
        return self._G[i] + part

    def value(self, x):
        return self.kappa * (self._Gx(x) - self._G0) + self.b1

    def deriv(self, x):
        return self.kappa * np.exp(self.mu.cdf(x))

    def logderiv(self, x):
        return math.log(self.kappa) + self.mu.cdf(x)

    def dlogderiv(self, x):
        # density of mu: piecewise constant
        x = np.clip(np.asarray(x, dtype=float), LO, HI)
        i = np.minimum(np.floor((x - LO) / self.mu.h).astype(int), self.mu.M - 1)
        return self.mu.masses[i] / self.mu.h

    def params(self):
        return {"kappa": self.kappa, "b1": self.b1, "masses": [float(v) for v in self.mu.masses]}


@dataclass
class StaircaseIFS:
    mu: FrostmanMeasure
    kappa: float
    kappa0: float
    b0: float
    b1: float
    g0: AffineBranch = field(repr=False, default=None)
    g1: StaircaseBranch = field(repr=False, default=None)
    delta: float | None = None

    def ifs(self) -> MarkovIFS:
        return MarkovIFS([self.g0, self.g1], ambient=(LO, HI), kappa_plus=self.kappa * math.e,
                         distortion_C=None, distortion_alpha=self.mu.epsilon, name="staircase",
                         meta={"kappa": self.kappa, "kappa0": self.kappa0, "b0": self.b0, "b1": self.b1})

    def model(self) -> GibbsModel:
        d = self.delta if self.delta is not None else delta_root(self)
        return GibbsModel(self.ifs(), geometric(d), name="staircase", meta={"delta": d})

    def zeta(self, s: float) -> float:
        return zeta(self, s)


def staircase_build(mu: FrostmanMeasure, kappa: float = 0.09, kappa0: float = 0.09,
                    b0: float = 0.0, b1: float = 0.7) -> StaircaseIFS:
    if not (0 < kappa0 <= kappa < 0.1):
        raise ValueError("need 0 < kappa0 <= kappa < 1/10")
    g0 = AffineBranch(kappa0, b0, domain=(LO, HI), label=0)
    g1 = StaircaseBranch(kappa, b1, mu, label=1)
    i0 = sorted(g0.value(np.array([LO, HI])))
    i1 = sorted(g1.value(np.array([LO, HI])))
    if not (i0[1] < i1[0] or i1[1] < i0[0]):
        raise ValueError(f"branch images {i0} and {i1} overlap; choose other offsets")
    if min(i0[0], i1[0]) < LO or max(i0[1], i1[1]) > HI:
        raise ValueError("branch images leave [-1, 1]")
    s = StaircaseIFS(mu, kappa, kappa0, b0, b1, g0, g1)
    return s


def zeta(sys: StaircaseIFS, s: float) -> float:
    """sum_a int |g_a'|^s dmu, integrated exactly cell by cell."""
    mu = sys.mu
    cum = mu.cum
    if s == 0.0:
        part1 = 1.0
    else:
        # int_cell exp(s F) dmu = (exp(s F_{i+1}) - exp(s F_i)) / s
        part1 = float(np.sum(np.exp(s * cum[:-1]) * _q(s * mu.masses) * mu.masses))
    return sys.kappa0 ** s * 1.0 + sys.kappa ** s * part1


def _q(d):
    d = np.asarray(d, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(np.abs(d) > 1e-8, np.expm1(d) / d, 1.0 + d / 2 + d * d / 6)


def delta_root(sys: StaircaseIFS, tol: float = 1e-10, max_iter: int = 200) -> float:
    lo, hi = 0.0, 1.0
    if not (zeta(sys, lo) > 1 > zeta(sys, hi)):
        raise ArithmeticError("zeta does not bracket 1 on [0, 1]")
    mid = 0.5
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        z = zeta(sys, mid)
        if abs(z - 1.0) <= tol:
            break
        if z > 1.0:
            lo = mid
        else:
            hi = mid
    sys.delta = mid
    return mid


def _cic(M: int, y: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Cloud-in-cell deposit of weights w at positions y onto M cell centres."""
    h = (HI - LO) / M
    pos = (y - LO) / h - 0.5
    i = np.floor(pos).astype(int)
    f = pos - i
    out = np.zeros(M)
    left = np.clip(i, 0, M - 1)
    right = np.clip(i + 1, 0, M - 1)
    np.add.at(out, left, w * (1.0 - f))
    np.add.at(out, right, w * f)
    return out


def psi_step(mu: FrostmanMeasure, kappa: float, kappa0: float, b0: float = 0.0, b1: float = 0.7):
    """One application of Psi: rebuild the IFS, solve delta, push cell masses, re-bin."""
    sys = staircase_build(mu, kappa, kappa0, b0, b1)
    d = delta_root(sys)
    c = mu.centers
    cum = mu.cum
    w0 = kappa0 ** d * mu.masses
    w1 = kappa ** d * np.exp(d * cum[:-1]) * _q(d * mu.masses) * mu.masses
    pushed_total = float(w0.sum() + w1.sum())
    new = _cic(mu.M, sys.g0.value(c), w0) + _cic(mu.M, sys.g1.value(c), w1)
    drift = abs(new.sum() - pushed_total)
    return FrostmanMeasure(new, mu.C, mu.epsilon), d, sys, pushed_total, drift


def ks_cells(a: FrostmanMeasure, b: FrostmanMeasure) -> float:
    """Kolmogorov distance of two cell measures on the same grid (CDFs are linear in cells)."""
    return float(np.max(np.abs(a.cum - b.cum)))


@dataclass
class PsiResult:
    mu: FrostmanMeasure
    residual_trace: list
    deltas: list
    zeta0: list
    zeta1: list
    frostman_violations: list
    mass_drift: list
    iterations: int
    system: StaircaseIFS

    @property
    def converged(self) -> bool:
        return bool(self.residual_trace) and self.residual_trace[-1] <= 1e-3


def psi_iterate(mu0: FrostmanMeasure, iterations: int = 200, kappa: float = 0.09, kappa0: float = 0.09,
                b0: float = 0.0, b1: float = 0.7, tol: float = 1e-3, min_iterations: int = 1) -> PsiResult:
    mu = mu0
    trace, deltas, z0, z1, viol, drift = [], [], [], [], [], []
    sys = None
    for k in range(iterations):
        new, d, sys, total, dr = psi_step(mu, kappa, kappa0, b0, b1)
        z0.append(zeta(sys, 0.0))
        z1.append(zeta(sys, 1.0))
        deltas.append(d)
        drift.append(dr)
        ok, worst, where = new.frostman_check()
        if not ok:
            viol.append({"iteration": k + 1, "ratio": worst, "interval": where})
            log.warning("Frostman bound exceeded at iteration %d: ratio %.4g at %s", k + 1, worst, where)
        trace.append(ks_cells(mu, new))
        mu = new
        if k + 1 >= min_iterations and trace[-1] <= tol:
            break
    sys = staircase_build(mu, kappa, kappa0, b0, b1)
    delta_root(sys)
    return PsiResult(mu, trace, deltas, z0, z1, viol, drift, len(trace), sys)
