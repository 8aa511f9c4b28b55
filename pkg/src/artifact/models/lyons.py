"""Accelerated conductance IFS psi_n^t(x) = (x+t)/((n+1)(x+t)+1) with weights 2^-(n+1)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..ifs import MarkovIFS, MoebiusBranch
from ..measures import EmpiricalMeasure, make_rngs, map_chunks
from ..symbolic import Alphabet
from ..thermo import GibbsModel, bernoulli


def _check_t(t):
    if not (0.0 < t < 1.0):
        raise ValueError("t must lie in (0, 1)")


def psi_branch(n: int, t: float) -> MoebiusBranch:
    return MoebiusBranch(1.0, t, n + 1.0, (n + 1.0) * t + 1.0, domain=(0.0, 1.0), label=n)


def psi(n, t, x):
    x = np.asarray(x, dtype=float)
    return (x + t) / ((np.asarray(n) + 1.0) * (x + t) + 1.0)


def f0(x):
    return np.asarray(x, dtype=float) / (1.0 + np.asarray(x, dtype=float))


def ft(t, x):
    x = np.asarray(x, dtype=float)
    return (x + t) / (1.0 + x + t)


def lyons_ifs(t: float, n_letters: int = 20, letters=None) -> MarkovIFS:
    _check_t(t)
    letters = list(range(n_letters)) if letters is None else list(letters)
    br = [psi_branch(n, t) for n in letters]
    kap = max(1.0 / ((n + 1) * t + 1) ** 2 for n in letters)
    C = max(2.0 * (n + 1) / ((n + 1) * t + 1) for n in letters)
    return MarkovIFS(br, ambient=(0.0, 1.0), kappa_plus=kap, distortion_C=C, distortion_alpha=1.0,
                     name=f"lyons_t{t:g}", meta={"t": t, "letters": letters})


@dataclass
class LyonsSystem:
    t: float
    n_letters: int
    model: GibbsModel
    renormalized: bool

    @property
    def ifs(self):
        return self.model.ifs


def lyons_model(t: float, n_letters: int = 20, renormalize: bool = False) -> GibbsModel:
    """Truncated accelerated model on letters 0..n_letters-1.

    With ``renormalize`` the weights are rescaled to sum to 1 and the model is
    treated as a finite IFS in its own right.
    """
    ifs = lyons_ifs(t, n_letters)
    w = 2.0 ** -(np.arange(n_letters) + 1.0)
    tail = 2.0 ** -n_letters
    if renormalize:
        w = w / w.sum()
        alph = Alphabet(n_letters)
    else:
        alph = Alphabet(n_letters, tail_truncated=True, tail_mass_bound=tail)
    m = GibbsModel(ifs, bernoulli(w), alph, gibbs_constant=1.0, name=f"lyons_t{t:g}_N{n_letters}",
                   meta={"t": t, "n_letters": n_letters, "renormalized": renormalize})
    return m


def lyons_system(t: float, n_letters: int = 20, renormalize: bool = False) -> LyonsSystem:
    return LyonsSystem(t, n_letters, lyons_model(t, n_letters, renormalize), renormalize)


def sub_model(t: float) -> GibbsModel:
    """Two-branch sub-IFS {psi_0, psi_1} with equal weights."""
    ifs = lyons_ifs(t, 2)
    return GibbsModel(ifs, bernoulli([0.5, 0.5]), gibbs_constant=1.0, name=f"lyons_sub_t{t:g}",
                      meta={"t": t, "letters": [0, 1]})


def geometric_letters(rng: np.random.Generator, size: int) -> np.ndarray:
    """P(n) = 2^-(n+1), n >= 0, untruncated."""
    return rng.geometric(0.5, size=size) - 1


def sample_nu(t: float, count: int, seed: int = 0, depth: int | None = None,
              workers: int = 1) -> EmpiricalMeasure:
    """Exact-law samples of nu_t via random compositions of psi_n^t (untruncated letters)."""
    _check_t(t)
    if depth is None:
        depth = int(math.ceil(math.log(1e-12) / math.log(1.0 / (1.0 + t) ** 2)))

    def one(rng, m):
        y = np.zeros(m)
        for _ in range(depth):
            y = psi(geometric_letters(rng, m), t, y)
        return y

    parts = map_chunks(one, seed, count, workers)
    return EmpiricalMeasure(np.concatenate(parts), seed, depth)


# ---------------------------------------------------------------------------
# fixed points and Q(t)


def psi10_coeffs(t: float):
    """Moebius coefficients of psi_1 o psi_0."""
    return (1.0 + t, t * t + 2.0 * t, 3.0 + 2.0 * t, 2.0 * t * t + 5.0 * t + 1.0)


def psi10(t, x):
    a, b, c, d = psi10_coeffs(t)
    x = np.asarray(x, dtype=float)
    return (a * x + b) / (c * x + d)


def lyons_fixed_points(t: float):
    """Positive fixed points of psi_0, psi_1 and psi_1 o psi_0."""
    _check_t(t)
    x0 = (-t + math.sqrt(t * t + 4 * t)) / 2
    x1 = (-t + math.sqrt(t * t + 2 * t)) / 2
    x10 = (-t * (t + 2) + math.sqrt(t * (t + 1) * (t + 2) * (t + 3))) / (3 + 2 * t)
    for f, x in ((lambda v: psi(0, t, v), x0), (lambda v: psi(1, t, v), x1), (lambda v: psi10(t, v), x10)):
        if abs(float(f(x)) - x) > 1e-12:
            raise ArithmeticError(f"fixed point check failed at t={t}")
    return x0, x1, x10


def lyons_Q(t: float) -> float:
    r1 = math.sqrt(t * t + 2 * t)
    r0 = math.sqrt(t * t + 4 * t)
    r10 = math.sqrt(t * (1 + t) * (t + 2) * (t + 3))
    return 2.0 * math.log((t + 1 + r1) * (t + 2 + r0) / (2.0 * (t * t + 3 * t + 1 + r10)))


def lyons_Q_fixed_point_route(t: float) -> float:
    from ..nonconc import cohomology_defect
    return cohomology_defect(psi_branch(0, t), psi_branch(1, t))


# ---------------------------------------------------------------------------
# light tail sums


def S_direct(gamma: float, t: float, terms: int = 1000) -> float:
    n = np.arange(terms, dtype=float)
    vals = np.exp(-(n + 1) * math.log(2.0) + 2 * gamma * np.log1p((n + 1) * t))
    return math.fsum(vals.tolist())


def fubini(k: int) -> int:
    a = [1]
    for m in range(1, k + 1):
        a.append(sum(math.comb(m, j) * a[m - j] for j in range(1, m + 1)))
    return a[k]


def neg_polylog_half(k: int) -> Fraction:
    """Li_{-k}(1/2) = sum_{m>=1} m^k 2^-m, exactly: 1 for k=0, 2*Fubini(k) otherwise."""
    return Fraction(1) if k == 0 else Fraction(2 * fubini(k))


def S_polylog(gamma: float, t) -> float:
    """Closed form for integer 2*gamma: sum_k C(2g,k) t^k Li_{-k}(1/2), in exact arithmetic."""
    p = 2 * gamma
    if abs(p - round(p)) > 1e-12 or p < 0:
        raise ValueError("closed form needs 2*gamma a nonnegative integer")
    p = int(round(p))
    tf = Fraction(str(t))
    return float(sum(math.comb(p, k) * tf ** k * neg_polylog_half(k) for k in range(p + 1)))


def S_sup(gamma: float, t: float, terms: int = 1000) -> float:
    """True sup over x in [0,1] of sum_n p_n |psi_n'(x)|^-gamma (attained at x = 1)."""
    n = np.arange(terms, dtype=float)
    vals = np.exp(-(n + 1) * math.log(2.0) + 2 * gamma * np.log1p((n + 1) * (1 + t)))
    return math.fsum(vals.tolist())


def ratio(gamma: float, t: float, n):
    n = np.asarray(n, dtype=float)
    return 0.5 * (((n + 2) * t + 1) / ((n + 1) * t + 1)) ** (2 * gamma)


def ratio_limit(gamma: float, t: float) -> float:
    """Limit of the ratio-test sequence by a linear fit in 1/n at large n."""
    n = np.geomspace(1e4, 1e6, 12)
    A = np.stack([np.ones_like(n), 1.0 / n], axis=1)
    coef, *_ = np.linalg.lstsq(A, ratio(gamma, t, n), rcond=None)
    return float(coef[0])


def S_extrapolated(gamma: float, t: float, K: int = 100) -> float:
    """Partial sum to K terms plus a geometric tail with the observed last ratio."""
    part = S_direct(gamma, t, K)
    last = math.exp(-K * math.log(2.0) + 2 * gamma * math.log1p(K * t))
    r = float(ratio(gamma, t, K))
    r = max(r, float(ratio(gamma, t, K - 1)))
    return part + last * r / (1 - r)
