"""Non-concentration statistics: Delta_n, Hoelder quotients, QNL, UNI, MNL and the tree loss."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq, least_squares
from scipy.special import lambertw

from .ifs import Branch, ChainBranch, MarkovIFS
from .measures import EmpiricalMeasure, kolmogorov_distance, make_rngs
from .symbolic import BudgetExceeded, DEFAULT_BUDGET, count_words, iter_word_blocks, words_array
from .thermo import GibbsModel, max_interval_mass

MNL_DIVERGENCE = 1e6


# ---------------------------------------------------------------------------
# log-derivatives with an optional Birkhoff horizon


def log_derivative(ifs: MarkovIFS, words: np.ndarray, x, horizon: int | None = None) -> np.ndarray:
    """log|g_a'(x)|, or with ``horizon`` N the Birkhoff sum S_N tau(g_a x).

    S_N tau(g_a x) = log|(g_{a_1..a_N})'(g_{a_{N+1}..a_n} x)|: only the N
    outermost letters contribute.
    """
    words = np.atleast_2d(np.asarray(words))
    n = words.shape[1]
    if horizon is None or horizon >= n:
        return ifs.compose_arrays(words, x)[1]
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    inner, _ = ifs.compose_arrays(words[:, horizon:], x)
    return ifs.compose_arrays(words[:, :horizon], inner)[1]


def X(ifs: MarkovIFS, word: Sequence[int], x, y, horizon: int | None = None):
    """X_a(x, y) = tau(g_a x) - tau(g_a y)."""
    w = np.asarray([tuple(word)])
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    ys = np.broadcast_to(np.asarray(y, dtype=float), xs.shape)
    W = np.repeat(w, xs.size, axis=0)
    v = log_derivative(ifs, W, xs, horizon) - log_derivative(ifs, W, ys, horizon)
    return v if np.ndim(x) else float(v[0])


def holder_quotient(ifs: MarkovIFS, word, x: float, y: float, alpha: float = 1.0) -> float:
    if x == y:
        raise ValueError("x and y must differ")
    return X(ifs, word, x, y) / abs(x - y) ** alpha


def delta_n(a, b, x: float, y: float, ifs: MarkovIFS) -> float:
    """(log g_a'(x) - log g_b'(x)) - (log g_a'(y) - log g_b'(y))."""
    if len(tuple(a)) != len(tuple(b)):
        raise ValueError("words must have equal length")
    W = np.asarray([tuple(a), tuple(b)])
    lx = ifs.compose_arrays(W, x)[1]
    ly = ifs.compose_arrays(W, y)[1]
    return float((lx[0] - lx[1]) - (ly[0] - ly[1]))


def holder_bound(ifs: MarkovIFS, N: int | None = None, alpha: float | None = None) -> float:
    """HA (1 - kappa^(alpha N)) / (1 - kappa^alpha); N=None gives the N -> infinity value."""
    a = ifs.distortion_alpha if alpha is None else alpha
    k = ifs.kappa_plus ** a
    HA = ifs.distortion_C
    return HA * (1.0 if N is None else 1.0 - k ** N) / (1.0 - k)


# ---------------------------------------------------------------------------
# QNL quadruple statistic


@dataclass
class QNLValue:
    n: int
    interval: tuple
    value: float
    stderr: float = 0.0
    mode: str = "exact"


def _words_weights_points(model: GibbsModel, n: int, budget: int | None):
    W = words_array(n, model.alphabet, model.rule, budget)
    return W, model.p_weights(W), model.ref_points(W)


def logderiv_matrix(model: GibbsModel, W: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """L[a, c] = log|g_a'(pts[c])|."""
    m = W.shape[0]
    L = np.empty((m, pts.size))
    for j, x in enumerate(pts):
        L[:, j] = model.ifs.compose_arrays(W, x)[1]
    return L


def _pair_mass(u: np.ndarray, p: np.ndarray, lo: float, hi: float) -> float:
    """sum_{a,b} p_a p_b 1[lo <= u_a - u_b <= hi]."""
    order = np.argsort(u, kind="stable")
    us, ps = u[order], p[order]
    cs = np.concatenate([[0.0], np.cumsum(ps)])
    # for each a: b with u_b in [u_a - hi, u_a - lo]
    j0 = np.searchsorted(us, u - hi, side="left")
    j1 = np.searchsorted(us, u - lo, side="right")
    return float(np.sum(p * (cs[j1] - cs[j0])))


def qnl_statistic(model: GibbsModel, n: int, interval: tuple, budget: int | None = None,
                  mode: str = "exact", samples: int = 200_000, seed: int = 0,
                  cache: dict | None = None) -> QNLValue:
    """Weighted fraction of quadruples (a,b,c,d) with Delta_n((a,x_c),(b,x_d)) in I."""
    lo, hi = float(interval[0]), float(interval[1])
    m = count_words(n, model.rule)
    cap = DEFAULT_BUDGET if budget is None else budget
    if mode == "exact" and m ** 3 > cap:
        raise BudgetExceeded(m ** 3, cap, "pair-sorted quadruple operations (use mode='monte_carlo')")
    key = (n,)
    if cache is not None and key in cache:
        W, p, L = cache[key]
    else:
        W, p, xr = _words_weights_points(model, n, budget)
        L = logderiv_matrix(model, W, xr) if mode == "exact" else (W, p, xr)
        if cache is not None:
            cache[key] = (W, p, L)
    if mode == "exact":
        tot = 0.0
        for c in range(m):
            U = L[:, c][:, None] - L          # U[a, d] = u_a for the pair (c, d)
            for d in range(m):
                if p[c] * p[d] == 0:
                    continue
                tot += p[c] * p[d] * _pair_mass(U[:, d], p, lo, hi)
        return QNLValue(n, (lo, hi), float(min(max(tot, 0.0), 1.0)), 0.0, "exact")
    if mode == "monte_carlo":
        W, p, xr = L
        mass = p.sum()
        q = p / mass
        rng = make_rngs(seed, 1)[0]
        idx = rng.choice(m, size=(samples, 4), p=q)
        a, b, c, d = idx.T
        lx = np.empty(samples)
        vals = np.empty(samples)
        la_c = model.ifs.compose_arrays(W[a], xr[c])[1]
        lb_c = model.ifs.compose_arrays(W[b], xr[c])[1]
        la_d = model.ifs.compose_arrays(W[a], xr[d])[1]
        lb_d = model.ifs.compose_arrays(W[b], xr[d])[1]
        dn = (la_c - lb_c) - (la_d - lb_d)
        hit = ((dn >= lo) & (dn <= hi)).astype(float) * mass ** 4
        return QNLValue(n, (lo, hi), float(hit.mean()), float(hit.std(ddof=1) / math.sqrt(samples)),
                        "monte_carlo")
    raise ValueError(f"unknown mode {mode}")


@dataclass
class QNLFit:
    theta: float
    rho: float
    C: float
    residual: float
    holdout_residual: float | None
    passed: bool
    verdict: str
    table: list = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def _qnl_model(params, n, s):
    logC, th, rho = params
    return logC + np.log(s ** th + rho ** n)


def qnl_fit(model: GibbsModel, ns: Sequence[int], sigmas: Sequence[float],
            holdout: tuple | None = None, budget: int | None = None, max_residual: float = 0.25) -> QNLFit:
    """Least-squares fit of log stat(n, sigma) by log C + log(sigma^Theta + rho^n), I = [-sigma, sigma]."""
    ns = list(ns)
    sigmas = list(sigmas)
    if len(ns) < 3 or len(sigmas) < 3:
        raise ValueError("need at least 3 values of n and of sigma")
    cache: dict = {}
    rows = []
    for n in ns:
        for s in sigmas:
            v = qnl_statistic(model, n, (-s, s), budget, cache=cache).value
            rows.append((n, s, v))
    arr = np.array(rows)
    n_, s_, v_ = arr[:, 0], arr[:, 1], arr[:, 2]
    table = [{"n": int(a), "sigma": float(b), "value": float(c)} for a, b, c in rows]
    if np.all(v_ >= 1 - 1e-12):
        return QNLFit(0.0, 1.0, 1.0, 0.0, None, False,
                      "QNL violation: statistic pinned at 1 (Delta_n identically zero)", table)
    if np.any(v_ <= 0):
        return QNLFit(float("nan"), float("nan"), float("nan"), float("inf"), None, False,
                      "statistic vanished at some (n, sigma); fit undefined", table)
    y = np.log(v_)

    def resid(p):
        return _qnl_model(p, n_, s_) - y

    best = None
    for th0 in (0.1, 0.3, 0.6):
        for r0 in (0.3, 0.6, 0.9):
            r = least_squares(resid, x0=[0.0, th0, r0], bounds=([-20, 1e-6, 1e-6], [20, 3.0, 0.999999]))
            if best is None or r.cost < best.cost:
                best = r
    logC, th, rho = best.x
    res = float(np.sqrt(np.mean(best.fun ** 2)))
    hres = None
    if holdout is not None:
        hn, hs = holdout
        hv = qnl_statistic(model, int(hn), (-hs, hs), budget, cache=cache).value
        pred = float(np.exp(_qnl_model(best.x, hn, hs)))
        hres = abs(pred - hv) / hv if hv > 0 else float("inf")
        table.append({"n": int(hn), "sigma": float(hs), "value": hv, "holdout": True, "predicted": pred})
    ok = (0 < th < 1) and (0 < rho < 1) and (hres is None or hres <= max_residual)
    verdict = "QNL fit consistent" if ok else "QNL fit failed residual or range checks"
    return QNLFit(float(th), float(rho), float(math.exp(logC)), res, hres, bool(ok), verdict, table)


# ---------------------------------------------------------------------------
# UNI


@dataclass
class UNIResult:
    c0: float
    pair: tuple
    alpha: float
    N: int
    grid_min: float
    mode: str

    def to_dict(self):
        d = asdict(self)
        d["pair"] = [list(self.pair[0]), list(self.pair[1])]
        return d


def _dlog_words(ifs: MarkovIFS, W: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """D[a, i] = d/dx log|g_a'(x_i)|."""
    out = np.empty((W.shape[0], xs.size))
    for i, x in enumerate(xs):
        out[:, i] = ifs.compose_arrays(W, x, want_dlog=True)[2]
    return out


def certified_abs_inf(f, lo: float, hi: float, tol: float = 1e-12, grid: int = 1025,
                      max_rounds: int = 80):
    """Lower bound on inf |f| over [lo, hi] for a Lipschitz f, by interval refinement.

    The Lipschitz constant is estimated from a grid and inflated by 2. Returns
    (lower_bound, best_value_seen). A sign change returns 0.
    """
    xs = np.linspace(lo, hi, grid)
    fv = np.asarray(f(xs), dtype=float)
    if np.any(np.sign(fv[:-1]) * np.sign(fv[1:]) <= 0):
        return 0.0, float(np.min(np.abs(fv)))
    L = 2.0 * float(np.max(np.abs(np.diff(fv)) / np.diff(xs))) + 1e-300
    a, b = xs[:-1], xs[1:]
    fa, fb = np.abs(fv[:-1]), np.abs(fv[1:])
    best = float(np.min(np.abs(fv)))
    for _ in range(max_rounds):
        lb = np.minimum(fa, fb) - L * (b - a) / 2
        keep = lb < best - tol
        if not keep.any():
            break
        a, b, fa, fb = a[keep], b[keep], fa[keep], fb[keep]
        m = 0.5 * (a + b)
        fm = np.asarray(f(m), dtype=float)
        if np.any(fm == 0):
            return 0.0, 0.0
        fm = np.abs(fm)
        best = min(best, float(fm.min()))
        a, b, fa, fb = np.concatenate([a, m]), np.concatenate([m, b]), np.concatenate([fa, fm]), np.concatenate([fm, fb])
    lb = np.minimum(fa, fb) - L * (b - a) / 2
    return float(max(0.0, min(best, float(lb.min()) if lb.size else best))), best


def _pair_margin_derivative(ifs: MarkovIFS, a, b, tol: float):
    wa, wb = np.asarray([a]), np.asarray([b])
    lo, hi = ifs.domain(a[-1])

    def f(xs):
        xs = np.atleast_1d(xs)
        Da = ifs.compose_arrays(np.repeat(wa, xs.size, 0), xs, want_dlog=True)[2]
        Db = ifs.compose_arrays(np.repeat(wb, xs.size, 0), xs, want_dlog=True)[2]
        return Da - Db

    return certified_abs_inf(f, lo, hi, tol)


def _pair_margin_holder(ifs: MarkovIFS, a, b, alpha: float, grid: int = 129):
    lo, hi = ifs.domain(a[-1])
    xs = np.linspace(lo, hi, grid)
    W = np.asarray([a, b])
    La = ifs.compose_arrays(np.repeat(W[:1], grid, 0), xs)[1]
    Lb = ifs.compose_arrays(np.repeat(W[1:], grid, 0), xs)[1]
    Lam = La - Lb
    dx = np.abs(xs[:, None] - xs[None, :])
    dL = np.abs(Lam[:, None] - Lam[None, :])
    np.fill_diagonal(dx, np.inf)
    q = dL / dx ** alpha
    gmin = float(q.min())
    # modulus of continuity: moving each point by h/2 changes Lambda by <= 2 A (h/2)^alpha
    A = holder_bound(ifs, None, alpha) if ifs.distortion_C else 0.0
    h = (hi - lo) / (grid - 1)
    corr = 2 * 2 * A * (h / 2) ** alpha / h ** alpha
    return max(0.0, gmin - corr), gmin


_SUGGESTED = ("suggested", "paper_suggested")  # second spelling kept for the public API


def uni_margin(model, N: int, pair_strategy: str = "exhaustive", alpha: float | None = None,
               pair: tuple | None = None, budget: int | None = None, screen_grid: int = 17,
               top_k: int = 24, tol: float = 1e-12) -> UNIResult:
    """Best certified UNI margin among pairs of length-N words sharing a domain.

    pair_strategy: exhaustive (all pairs, screened on a grid then certified),
    screened (extreme words by mean derivative only), suggested
    (``pair`` given, or the (0^(N-1) 1, 0^N) pattern).
    """
    ifs = model.ifs if isinstance(model, GibbsModel) else model
    alpha = ifs.distortion_alpha if alpha is None else float(alpha)
    deriv_mode = alpha == 1.0 and all(b.has_dlog for b in ifs.branches)
    if pair_strategy in _SUGGESTED:
        cand = [pair if pair is not None else (tuple([0] * (N - 1) + [1]), tuple([0] * N))]
    else:
        alph = model.alphabet if isinstance(model, GibbsModel) else ifs.size
        rule = ifs.transition
        W = words_array(N, alph, rule, budget)
        doms = np.array([ifs.domain(int(c)) for c in W[:, -1]])
        if deriv_mode:
            lo, hi = ifs.ambient
            xs = np.linspace(lo, hi, screen_grid)
            S = _dlog_words(ifs, W, xs)
        else:
            xs = np.linspace(*ifs.ambient, screen_grid)
            L = np.stack([ifs.compose_arrays(W, x)[1] for x in xs], axis=1)
            S = np.diff(L, axis=1) / np.diff(xs) ** alpha
        if pair_strategy == "screened" or W.shape[0] > 2048:
            order = np.argsort(S.mean(axis=1), kind="stable")
            idx = np.unique(np.concatenate([order[:top_k], order[-top_k:]]))
        elif pair_strategy == "exhaustive":
            idx = np.arange(W.shape[0])
        else:
            raise ValueError(f"unknown pair strategy {pair_strategy}")
        Ssub = S[idx]
        scores = []
        for i in range(len(idx)):
            diff = np.abs(Ssub[i][None, :] - Ssub[i + 1:])
            sc = diff.min(axis=1)
            same = np.all(doms[idx[i + 1:]] == doms[idx[i]], axis=1)
            sc[~same] = -1.0
            for j in np.flatnonzero(sc > 0):
                scores.append((-float(sc[j]), tuple(W[idx[i]]), tuple(W[idx[i + 1 + j]])))
        scores.sort()
        cand = [(a, b) for _, a, b in scores[:8]] or [(tuple(W[0]), tuple(W[1]))]
    best = None
    for a, b in cand:
        a, b = tuple(int(v) for v in a), tuple(int(v) for v in b)
        if deriv_mode:
            c0, gmin = _pair_margin_derivative(ifs, a, b, tol)
        else:
            c0, gmin = _pair_margin_holder(ifs, a, b, alpha)
        key = (c0, tuple(-np.array(min(a, b))))
        if best is None or c0 > best[0] + 1e-15 or (abs(c0 - best[0]) <= 1e-15 and (min(a, b), max(a, b)) < best[1]):
            best = (c0, (min(a, b), max(a, b)) if pair_strategy not in _SUGGESTED else (a, b), gmin)
    c0, pr, gmin = best
    return UNIResult(float(c0), pr, alpha, N, float(gmin), "derivative" if deriv_mode else "holder_grid")


# ---------------------------------------------------------------------------
# cohomology defect at periodic points


def fixed_point(branch: Branch, lo: float, hi: float, tol: float = 1e-13) -> float:
    """Attracting fixed point: damped iteration, then bisection polish on a bracket."""
    f = lambda x: float(np.asarray(branch.value(np.array(x)))) - x
    x = 0.5 * (lo + hi)
    for _ in range(400):
        x = 0.5 * (x + float(np.asarray(branch.value(np.array(x)))))
    for h in (1e-8, 1e-6, 1e-3):
        a, b = max(lo, x - h), min(hi, x + h)
        if f(a) * f(b) <= 0:
            break
    else:
        a, b = lo, hi
    if f(a) == 0:
        return a
    if f(b) == 0:
        return b
    return float(brentq(f, a, b, xtol=tol * 1e-2, rtol=4 * np.finfo(float).eps, maxiter=500))


def cohomology_defect(g0: Branch, g1: Branch) -> float:
    """log (g1 o g0)'(x10) - log g0'(x0) - log g1'(x1)."""
    lo, hi = g0.domain
    x0 = fixed_point(g0, *g0.domain)
    x1 = fixed_point(g1, *g1.domain)
    g10 = ChainBranch([g1, g0])
    x10 = fixed_point(g10, lo, hi)
    return float(g10.logderiv(np.array(x10)) - g0.logderiv(np.array(x0)) - g1.logderiv(np.array(x1)))


# ---------------------------------------------------------------------------
# MNL


@dataclass
class MNLResult:
    C_mnl: float
    ks_to_uniform: float
    atom: bool
    divergent: bool
    horizon: int
    scales: list
    ratios: list

    def to_dict(self):
        # grid-probed, so never a proof of the all-x0, all-I statement
        return {**asdict(self), "verdict": "empirical"}


def mnl_statistic(ifs: MarkovIFS, a, b, x0: float, samples: EmpiricalMeasure | np.ndarray,
                  horizon: int | None = None) -> MNLResult:
    """Push the sampled measure through x -> X_a(x, x0) - X_b(x, x0).

    Words of different lengths are compared through horizon-N Birkhoff sums,
    N defaulting to the shorter length.
    """
    a, b = tuple(a), tuple(b)
    N = min(len(a), len(b)) if horizon is None else int(horizon)
    xs = samples.samples if isinstance(samples, EmpiricalMeasure) else np.sort(np.asarray(samples, float))
    v = X(ifs, a, xs, x0, N if len(a) > N else None) - X(ifs, b, xs, x0, N if len(b) > N else None)
    rng = float(v.max() - v.min())
    if rng == 0.0 or rng < 1e-14 * max(1.0, float(np.abs(v).max())):
        return MNLResult(float("inf"), 1.0, True, True, N, [], [])
    u = np.sort((v - v.min()) / rng)
    ks = kolmogorov_distance(EmpiricalMeasure(u), lambda z: z)
    scales, ratios = [], []
    for k in range(4, 17):
        r = 2.0 ** -k
        mass = max_interval_mass(u, r)
        scales.append(r * rng)
        ratios.append(mass / (r * rng))
    C = float(max(ratios))
    return MNLResult(C, float(ks), False, C > MNL_DIVERGENCE, N, scales, ratios)


# ---------------------------------------------------------------------------
# tree lemma


@dataclass
class TreeConstants:
    alpha: float
    N: int
    c0: float
    pair: tuple
    A: float
    HA: float
    kappa: float
    gamma0: float
    gamma_prime: float
    C_lambert: float
    lam: float
    eps_gamma0: float
    t_gamma0: float
    C_dist: float
    C_phi: float
    eps_uni: float
    gamma: float
    gamma_terms: list
    alpha_N: float
    uni_trace: list

    def to_dict(self):
        d = asdict(self)
        d["pair"] = [list(self.pair[0]), list(self.pair[1])]
        return d


def lambert_constant(alpha: float, gamma_p: float) -> float:
    """C = -W(-alpha gamma') / (alpha gamma'), principal branch."""
    z = -alpha * gamma_p
    if z < -1 / math.e:
        raise ValueError("alpha * gamma' exceeds 1/e; Lambert constant undefined")
    return float(-lambertw(z, 0).real / (alpha * gamma_p))


def tree_constants(model: GibbsModel, gamma0: float, lam: float, eps_gamma0: float, t_gamma0: float,
                   N_max: int = 6, alpha: float = 1.0, pair_strategy: str = "exhaustive",
                   budget: int | None = None) -> TreeConstants:
    ifs = model.ifs
    HA = ifs.distortion_C
    k = ifs.kappa_plus
    A = HA / (1 - k ** alpha)
    trace = []
    chosen = None
    for N in range(1, N_max + 1):
        u = uni_margin(model, N, pair_strategy, alpha, budget=budget)
        trace.append({"N": N, "c0": u.c0, "pair": [list(u.pair[0]), list(u.pair[1])]})
        if u.c0 > 0 and A * k ** (alpha * N) <= u.c0 / 4:
            chosen = u
            break
    if chosen is None:
        raise ArithmeticError(f"UNI failure: no N <= {N_max} with a certified pair and A kappa^(alpha N) <= c0/4")
    N, c0, pair = chosen.N, chosen.c0, chosen.pair
    C = ifs.distortion_C
    C_phi = model.gibbs_constant or 1.0
    # eps_UNI: inf over x of the two pair weights
    lo, hi = ifs.domain(pair[0][-1])
    xs = np.linspace(lo, hi, 65)
    W = np.asarray(pair)
    eps_uni = float(min(np.min([np.exp(model.evaluate(W, x)[2]) for x in xs], axis=0)))
    gp = min(gamma0 / (2 * alpha), t_gamma0 / alpha)
    CL = lambert_constant(alpha, gp)
    terms = [gamma0, gamma0 / (2 * alpha), 1 / (alpha * lam * N),
             alpha * lam * N / (eps_gamma0 * N * alpha ** 2) if eps_gamma0 > 0 else float("inf"),
             1 / (2 * (lam * N + C)),
             eps_uni / (4 * alpha * CL * math.exp(2 * alpha * gamma0 * C) * C_phi)]
    gamma = float(min(terms))
    # alpha_N: inf over x of -(1/N) log sum_{a != c} w_a(x)
    WN = words_array(N, model.alphabet, model.rule, budget)
    aN = float("inf")
    for c in pair:
        mask = ~np.all(WN == np.asarray(c), axis=1)
        vals = []
        for x in np.linspace(*ifs.ambient, 33):
            vals.append(-math.log(float(np.sum(np.exp(model.evaluate(WN[mask], x)[2])))) / N)
        aN = min(aN, min(vals))
    return TreeConstants(alpha, N, c0, pair, A, HA, k, gamma0, gp, CL, lam, eps_gamma0, t_gamma0, C,
                         C_phi, eps_uni, gamma, terms, aN, trace)


@dataclass
class TreeRow:
    n: int
    sigma: float
    t: float
    L: float
    bound: float
    passed: bool
    case: str
    nodes: int


def tree_bound(consts: TreeConstants, sigma: float, n: int) -> float:
    return (4 * sigma / consts.c0) ** consts.gamma + math.exp(-consts.alpha_N * (n - consts.N))


def tree_loss_bruteforce(model: GibbsModel, x: float, y: float, z: float, t: float, sigma: float,
                         alpha: float, n: int, budget: int | None = None) -> float:
    tot = 0.0
    d = abs(y - z) ** alpha
    for blk in iter_word_blocks(n, model.alphabet, model.rule, budget):
        _, _, lw = model.evaluate(blk, x)
        lam = (model.ifs.compose_arrays(blk, y)[1] - model.ifs.compose_arrays(blk, z)[1]) / d
        tot += float(np.sum(np.exp(lw) * ((lam >= t - sigma) & (lam <= t + sigma))))
    return tot


def tree_loss_exact(model: GibbsModel, x: float, y: float, z: float, t: float, sigma: float,
                    alpha: float, n: int, max_nodes: int = 50_000_000):
    """L^(n) by growing words through outer letters with interval pruning.

    Valid for locally constant potentials: a word's remaining descendants have
    total weight w_a * (sum of letter weights)^(n-k).
    """
    pot = model.potential
    if not pot.locally_constant:
        return tree_loss_bruteforce(model, x, y, z, t, sigma, alpha, n), -1
    ifs = model.ifs
    HA = ifs.distortion_C
    kap = ifs.kappa_plus
    Rfac = HA / (1 - kap ** alpha)
    lw = pot._logw
    S = float(np.exp(lw).sum())
    d = abs(y - z) ** alpha
    lo_w, hi_w = t - sigma, t + sigma
    # state arrays
    gx = np.array([x]); gy = np.array([y]); gz = np.array([z])
    lam = np.array([0.0]); logw = np.array([0.0])
    total = 0.0
    nodes = 0
    K = model.size
    for k in range(n):
        m = gx.size
        letters = np.repeat(np.arange(K), m)
        ny, ly = ifs.apply(letters, np.tile(gy, K))
        nz, lz = ifs.apply(letters, np.tile(gz, K))
        nx, _ = ifs.apply(letters, np.tile(gx, K))
        nlam = np.tile(lam, K) + (ly - lz) / d
        nlw = np.tile(logw, K) + lw[letters]
        nodes += nlam.size
        if nodes > max_nodes:
            raise BudgetExceeded(nodes, max_nodes, "tree nodes")
        rem = n - (k + 1)
        if rem == 0:
            hit = (nlam >= lo_w) & (nlam <= hi_w)
            total += float(np.sum(np.exp(nlw[hit])))
            break
        R = Rfac * np.abs(ny - nz) ** alpha / d
        inside = (nlam - R >= lo_w) & (nlam + R <= hi_w)
        outside = (nlam + R < lo_w) | (nlam - R > hi_w)
        total += float(np.sum(np.exp(nlw[inside]))) * S ** rem
        keep = ~(inside | outside)
        gx, gy, gz, lam, logw = nx[keep], ny[keep], nz[keep], nlam[keep], nlw[keep]
        if gx.size == 0:
            break
    return total, nodes


def tree_loss(model: GibbsModel, x: float, y: float, z: float, t: float, sigma: float, alpha: float,
              n: int, consts: TreeConstants) -> TreeRow:
    if y == z:
        raise ValueError("y and z must differ")
    bound = tree_bound(consts, sigma, n)
    if n <= consts.N:
        case = "n<=N"
    elif sigma >= consts.c0 / 4:
        case = "sigma>=c0/4"
    else:
        case = "recursion"
    L, nodes = tree_loss_exact(model, x, y, z, t, sigma, alpha, n)
    return TreeRow(n, sigma, t, float(L), float(bound), bool(L <= bound * (1 + 1e-12)), case, int(nodes))
