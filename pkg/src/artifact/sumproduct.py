"""Block decompositions, renormalized phases zeta, multiplicative exponential sums, census."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

import numpy as np

from .nonconc import _pair_mass
from .symbolic import BudgetExceeded, DEFAULT_BUDGET, count_words, star, words_array
from .thermo import GibbsModel


@dataclass(frozen=True)
class BlockDecomposition:
    n: int
    A_words: tuple
    B_words: tuple = ()

    def __post_init__(self):
        A = tuple(tuple(int(v) for v in a) for a in self.A_words)
        B = tuple(tuple(int(v) for v in b) for b in self.B_words)
        object.__setattr__(self, "A_words", A)
        object.__setattr__(self, "B_words", B)
        if any(len(w) != self.n for w in A + B):
            raise ValueError("all block words must have length n")
        if B and len(A) != len(B) + 1:
            raise ValueError("need k+1 A-words for k B-words")

    @property
    def k(self) -> int:
        return len(self.A_words) - 1

    def word(self, rule=None):
        if len(self.B_words) != self.k:
            raise ValueError("B-words not set")
        return star(self.A_words, self.B_words, rule)

    def with_B(self, B) -> "BlockDecomposition":
        return BlockDecomposition(self.n, self.A_words, tuple(B))


@dataclass
class PhaseParameters:
    xi: float
    lam: float
    epsilon0: float
    epsilon1: float = 0.1
    gamma2: float = 0.1
    k: int = 2
    n: int | None = None

    def __post_init__(self):
        if self.n is None:
            rate = (2 * self.k + 1) * self.lam + self.epsilon0
            self.n = max(1, int(math.floor(math.log(abs(self.xi)) / rate))) if abs(self.xi) > 1 else 1

    @classmethod
    def from_qnl(cls, xi, lam, alpha, kappa_plus, rho, theta, epsilon1=0.1, k=2, n=None):
        eps0 = alpha * abs(math.log(kappa_plus)) * abs(math.log(rho)) / 10.0
        return cls(xi, lam, eps0, epsilon1, theta / 4.0, k, n)

    @property
    def alpha_reg(self) -> float:
        return self.epsilon0 * self.epsilon1 * self.gamma2

    def ladder(self, n: int | None = None) -> list:
        """Integers l with eps0 eps1 n / 2 <= l <= 4 eps0 n (sigma = e^-l)."""
        n = self.n if n is None else n
        lo = self.epsilon0 * self.epsilon1 * n / 2.0
        hi = 4.0 * self.epsilon0 * n
        return list(range(int(math.ceil(lo)), int(math.floor(hi)) + 1))


def _ref_point(model: GibbsModel, word) -> float:
    return float(model.ref_points(np.asarray([tuple(word)]))[0])


def zeta_values(A: BlockDecomposition, j: int, Bs: np.ndarray, model: GibbsModel, lam: float) -> np.ndarray:
    """zeta_{j,A}(b) = e^{2 lam n} |g'_{a_j' b}(x_{a_{j+1}})| for every row b of Bs."""
    if not 1 <= j <= A.k:
        raise ValueError("slot j must satisfy 1 <= j <= k")
    aj = A.A_words[j - 1][:-1]
    x = _ref_point(model, A.A_words[j])
    Bs = np.atleast_2d(Bs)
    W = np.concatenate([np.repeat(np.asarray([aj], dtype=np.int64), Bs.shape[0], 0), Bs], axis=1) if aj else Bs
    L = model.ifs.compose_arrays(W, x)[1]
    return np.exp(2 * lam * A.n + L)


def zeta(A: BlockDecomposition, j: int, b, model: GibbsModel, lam: float) -> float:
    return float(zeta_values(A, j, np.asarray([tuple(b)]), model, lam)[0])


def eta(A: BlockDecomposition, x: float, y: float, xi: float, lam: float, model: GibbsModel,
        dpsi: Callable | None = None) -> float:
    """e^{-2 lam n k} xi |g_{a_{k+1}}(x) - g_{a_{k+1}}(y)| |psi'(x_{a_1})| (psi(x) = x by default)."""
    W = np.asarray([A.A_words[-1]] * 2)
    gx = model.ifs.compose_arrays(W[:1], x)[0][0]
    gy = model.ifs.compose_arrays(W[1:], y)[0][0]
    d = 1.0 if dpsi is None else abs(float(dpsi(_ref_point(model, A.A_words[0]))))
    return float(math.exp(-2 * lam * A.n * A.k) * xi * abs(gx - gy) * d)


def exp_sum_values(eta_val: float, zetas: Sequence[np.ndarray], weights: Sequence[np.ndarray],
                   budget: int | None = None) -> float:
    """|sum_B prod_j w_j(b_j) exp(i eta prod_j zeta_j(b_j))| by exhaustive outer products."""
    total = int(np.prod([len(z) for z in zetas]))
    cap = DEFAULT_BUDGET if budget is None else budget
    if total > cap:
        raise BudgetExceeded(total, cap, "B-tuples")
    if len(zetas) == 0:
        return 1.0
    # accumulate over the last slot in chunks to bound memory
    prod_z = np.asarray(zetas[0], dtype=float)
    prod_w = np.asarray(weights[0], dtype=float)
    for z, w in zip(zetas[1:-1], weights[1:-1]):
        prod_z = np.outer(prod_z, z).ravel()
        prod_w = np.outer(prod_w, w).ravel()
    if len(zetas) == 1:
        return float(abs(np.sum(prod_w * np.exp(1j * eta_val * prod_z))))
    zl, wl = np.asarray(zetas[-1]), np.asarray(weights[-1])
    acc = 0j
    step = max(1, (1 << 22) // max(1, zl.size))
    for s in range(0, prod_z.size, step):
        ph = np.exp(1j * eta_val * np.outer(prod_z[s:s + step], zl))
        acc += np.sum((prod_w[s:s + step, None] * wl[None, :]) * ph)
    return float(abs(acc))


def slot_words(model: GibbsModel, n: int, budget: int | None = None):
    W = words_array(n, model.alphabet, model.rule, budget)
    return W, model.p_weights(W)


def exp_sum(A: BlockDecomposition, eta_val: float, model: GibbsModel, lam: float,
            budget: int | None = None, mode: str = "exact", samples: int = 100_000,
            seed: int = 0):
    """X_{x,y}(A) for a given effective frequency.

    exact: returns a float.  monte_carlo: draws B-tuples from the product of slot
    weights and returns (estimate, stderr) for the normalized sum times B-mass.
    """
    W, p = slot_words(model, A.n, budget)
    zs = [zeta_values(A, j, W, model, lam) for j in range(1, A.k + 1)]
    if mode == "exact":
        return exp_sum_values(eta_val, zs, [p] * A.k, budget)
    if mode != "monte_carlo":
        raise ValueError(f"unknown mode {mode!r}")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    mass = float(p.sum())
    prod = np.ones(samples)
    for z in zs:
        prod *= z[rng.choice(p.size, size=samples, p=p / mass)]
    ph = np.exp(1j * eta_val * prod)
    mean = ph.mean()
    se = float(np.sqrt(np.mean(np.abs(ph - mean) ** 2) / samples))
    return float(abs(mean)) * mass ** A.k, se * mass ** A.k


def exp_sum_profile(A: BlockDecomposition, etas: Sequence[float], model: GibbsModel, lam: float,
                    budget: int | None = None):
    W, p = slot_words(model, A.n, budget)
    zs = [zeta_values(A, j, W, model, lam) for j in range(1, A.k + 1)]
    return [(float(e), exp_sum_values(float(e), zs, [p] * A.k, budget)) for e in etas]


def block_moment(A: BlockDecomposition, j: int, t: float, model: GibbsModel, lam: float,
                 budget: int | None = None):
    """(sum_b mu(I_b) e^{t |ln zeta_j(b)|}, tail bound for the discarded letters)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    W, p = slot_words(model, A.n, budget)
    lz = np.log(zeta_values(A, j, W, model, lam))
    val = float(np.sum(p * np.exp(t * np.abs(lz))))
    tail = model.tail_mass() * A.n * float(np.exp(t * np.abs(lz).max()))
    return val, tail


# ---------------------------------------------------------------------------
# census


def pair_concentration(lz: np.ndarray, w: np.ndarray, sigma: float) -> float:
    """sum_{b,c} w_b w_c 1[|ln zeta(b) - ln zeta(c)| <= sigma]."""
    return _pair_mass(lz, w, -sigma, sigma)


@dataclass
class CensusResult:
    n: int
    k: int
    bad_mass: float
    bad_mass_mu: float
    threshold: float
    passed: bool
    ladder: list
    good_pairs: float
    vacuous: bool

    def to_dict(self):
        return asdict(self)


def well_distributed_census(model: GibbsModel, n: int, params: PhaseParameters, C: float = 1.0,
                            budget: int | None = None, x_grid: int = 3) -> CensusResult:
    """Mass of blocks A in Sigma^{(k+1)n} failing the well-distributed test.

    The slot statistic only depends on consecutive pairs (a_j, a_{j+1}), so a
    pair table is built once and blocks are chained through it.
    """
    if model.size < 2:
        raise ValueError("alphabet of size 1: attractor is a point")
    k = params.k
    ladder = params.ladder(n)
    m = count_words(n, model.rule)
    cap = DEFAULT_BUDGET if budget is None else budget
    if m * m * m > cap:
        raise BudgetExceeded(m ** 3, cap, "census pair evaluations")
    W, p = slot_words(model, n, budget)
    thr = C * math.exp(-params.alpha_reg * n)
    if not ladder:
        return CensusResult(n, k, 0.0, 0.0, thr, True, [], 1.0, True)
    xs = np.linspace(*model.ifs.ambient, x_grid)
    wx = [np.exp(model.evaluate(W, x)[2]) for x in xs] if not model.potential.locally_constant else [p]
    refs = model.ref_points(W)
    good = np.zeros((m, m), dtype=bool)
    # ln zeta_j(b) = 2 lam n + log|g'_{a' b}(x_d)|, a' = a minus its last letter
    lam = params.lam
    for ia in range(m):
        aj = W[ia, :-1]
        Wab = np.concatenate([np.repeat(aj[None, :], m, 0), W], axis=1) if aj.size else W
        for idd in range(m):
            lz = 2 * lam * n + model.ifs.compose_arrays(Wab, refs[idd])[1]
            ok = True
            for wts in wx:
                for l in ladder:
                    s = math.exp(-l)
                    if pair_concentration(lz, wts, s) > s ** params.gamma2:
                        ok = False
                        break
                if not ok:
                    break
            good[ia, idd] = ok
    # chain blocks a_1 ... a_{k+1}: good iff every consecutive pair is good
    v = p.copy()
    for _ in range(k):
        v = (v @ good) * p
    total = float(p.sum()) ** (k + 1)
    bad = max(0.0, total - float(v.sum()))
    # mu(I_b) weighting uses cylinder lengths raised to the Bowen-type exponent when
    # the potential is geometric; for Bernoulli models p_b is already mu(I_b)
    bad_mu = bad
    return CensusResult(n, k, bad, bad_mu, thr, bool(bad <= thr), ladder, float(good.mean()), False)


def census_table(model: GibbsModel, ns: Sequence[int], params: PhaseParameters,
                 budget: int | None = None) -> list[CensusResult]:
    """Census over several depths with C fitted on the smallest n (C >= 1)."""
    ns = sorted(int(n) for n in ns)
    first = well_distributed_census(model, ns[0], params, 1.0, budget)
    C = max(1.0, first.bad_mass * math.exp(params.alpha_reg * ns[0]))
    return [well_distributed_census(model, n, params, C, budget) for n in ns]
