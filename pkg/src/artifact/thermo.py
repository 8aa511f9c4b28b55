"""Potentials, Gibbs weights, transfer operators, pressure and moment bounds.

Sign conventions: tau(g_c y) = log|g_c'(y)| (negative), lambda = -int tau dmu > 0,
and the centred twist used for moments is tau + lambda, so that
sum_a w_a(x) (e^{lambda n}|g_a'(x)|)^t grows like exp(n P(phi + t(tau + lambda))).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _cheb
from .ifs import MarkovIFS
from .symbolic import Alphabet, BudgetExceeded, count_words, iter_word_blocks, DEFAULT_BUDGET

# ---------------------------------------------------------------------------
# potentials


@dataclass
class Potential:
    """Per-letter log-weight log w_c(y) applied before branch c acts on y.

    kind: locally_constant | geometric | induced | normalized | callable
    """

    kind: str
    weights: np.ndarray | None = None      # locally_constant
    delta: float | None = None             # geometric / induced multiplier
    shift: float = 0.0                     # subtracted constant (pressure)
    fn: Callable | None = None             # callable: fn(letters, y, ifs) -> log w
    base: "Potential | None" = None        # normalized: wrapped potential
    h: _cheb.Interpolant | None = None     # normalized: eigenfunction
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind == "locally_constant":
            w = np.asarray(self.weights, dtype=float)
            if np.any(w <= 0):
                raise ValueError("locally constant weights must be positive")
            if w.sum() > 1 + 1e-12:
                raise ValueError("locally constant weights must sum to <= 1")
            self.weights = w
            self._logw = np.log(w)
        elif self.kind in ("geometric", "induced"):
            if self.delta is None or not (0 < self.delta <= 1 + 1e-12) and self.kind == "geometric":
                raise ValueError("geometric potential needs delta in (0, 1]")
        elif self.kind == "normalized":
            if self.base is None or self.h is None:
                raise ValueError("normalized potential needs base and h")
        elif self.kind == "callable":
            if self.fn is None:
                raise ValueError("callable potential needs fn")
        else:
            raise ValueError(f"unknown potential kind {self.kind}")

    @property
    def locally_constant(self) -> bool:
        return self.kind == "locally_constant"

    def logweight(self, letters: np.ndarray, y: np.ndarray, ifs: MarkovIFS,
                  logderiv: np.ndarray | None = None, images: np.ndarray | None = None):
        letters = np.asarray(letters)
        if self.kind == "locally_constant":
            return self._logw[letters]
        if self.kind in ("geometric", "induced"):
            if logderiv is None:
                _, logderiv = ifs.apply(letters, y)
            return self.delta * logderiv - self.shift
        if self.kind == "callable":
            return self.fn(letters, y, ifs) - self.shift
        # normalized: log w + log h(g y) - log h(y) - P
        if images is None or logderiv is None:
            images, logderiv = ifs.apply(letters, y)
        lw = self.base.logweight(letters, y, ifs, logderiv=logderiv, images=images)
        return lw + np.log(self.h(images)) - np.log(self.h(y)) - self.shift

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "shift": self.shift}
        if self.weights is not None:
            d["weights"] = [float(v) for v in self.weights]
        if self.delta is not None:
            d["delta"] = float(self.delta)
        if self.base is not None:
            d["base"] = self.base.to_dict()
        d.update(self.meta)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Potential":
        kind = d["kind"]
        if kind == "locally_constant":
            return cls(kind, weights=np.asarray(d["weights"]), shift=d.get("shift", 0.0))
        if kind in ("geometric", "induced"):
            return cls(kind, delta=float(d["delta"]), shift=d.get("shift", 0.0))
        raise ValueError(f"potential kind {kind} is not serializable")


def bernoulli(weights: Sequence[float]) -> Potential:
    return Potential("locally_constant", weights=np.asarray(weights, dtype=float))


def geometric(delta: float, shift: float = 0.0) -> Potential:
    return Potential("geometric", delta=float(delta), shift=float(shift))


# ---------------------------------------------------------------------------
# Gibbs model


@dataclass
class GibbsModel:
    ifs: MarkovIFS
    potential: Potential
    alphabet: Alphabet | None = None
    gibbs_constant: float | None = None
    name: str = "model"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.alphabet is None:
            self.alphabet = Alphabet(max(2, self.ifs.size))
        if self.potential.locally_constant and len(self.potential.weights) != self.ifs.size:
            raise ValueError("weights length must match number of branches")

    @property
    def size(self) -> int:
        return self.ifs.size

    @property
    def rule(self):
        return self.ifs.transition

    def tail_mass(self) -> float:
        return self.alphabet.tail_mass_bound

    def ref_base_point(self, letter: int) -> float:
        lo, hi = self.ifs.domain(letter)
        return 0.5 * (lo + hi)

    def evaluate(self, words: np.ndarray, x, want_dlog: bool = False):
        """Return (g_a(x), log|g_a'(x)|, log w_a(x)) [, d/dx log g_a'] for rows of words."""
        words = np.atleast_2d(np.asarray(words))
        logw = np.zeros(words.shape[0])
        pot = self.potential

        if pot.locally_constant:
            out = self.ifs.compose_arrays(words, x, want_dlog=want_dlog)
            logw = pot._logw[words].sum(axis=1)
        else:
            def hook(k, letters, y):
                nonlocal logw
                logw = logw + pot.logweight(letters, y, self.ifs)
            out = self.ifs.compose_arrays(words, x, want_dlog=want_dlog, step_hook=hook)
        return (*out, logw) if not want_dlog else (out[0], out[1], logw, out[2])

    def ref_points(self, words: np.ndarray) -> np.ndarray:
        words = np.atleast_2d(words)
        base = np.array([self.ref_base_point(int(a)) for a in words[:, -1]])
        return self.ifs.compose_arrays(words, base)[0]

    def p_weights(self, words: np.ndarray) -> np.ndarray:
        """p_a := w_a(x_{b(a)}) with the midpoint of the last-letter domain."""
        words = np.atleast_2d(words)
        base = np.array([self.ref_base_point(int(a)) for a in words[:, -1]])
        return np.exp(self.evaluate(words, base)[2])

    def to_dict(self) -> dict:
        return {"name": self.name, "ifs": self.ifs.to_dict(), "potential": self.potential.to_dict(),
                "alphabet": asdict(self.alphabet), "gibbs_constant": self.gibbs_constant,
                **({"meta": self.meta} if self.meta else {})}

    @classmethod
    def from_dict(cls, d: dict) -> "GibbsModel":
        ifs = MarkovIFS.from_dict(d["ifs"])
        al = d.get("alphabet")
        return cls(ifs, Potential.from_dict(d["potential"]), Alphabet(**al) if al else None,
                   d.get("gibbs_constant"), d.get("name", "model"), d.get("meta", {}))


def gibbs_weight(word: Sequence[int], x: float, model: GibbsModel) -> float:
    """w_a(x) = exp(S_n phi) along the partial images of x."""
    w = np.asarray([tuple(word)])
    return float(np.exp(model.evaluate(w, float(x))[2][0]))


def transfer_apply(f: Callable, x: float, depth: int, model: GibbsModel,
                   budget: int | None = None) -> float:
    """Finite sum over words of length ``depth`` of w_a(x) f(g_a(x))."""
    total = 0.0
    for blk in iter_word_blocks(depth, model.alphabet, model.rule, budget):
        y, _, lw = model.evaluate(blk, x)
        total += float(np.sum(np.exp(lw) * f(y)))
    return total


# ---------------------------------------------------------------------------
# collocation transfer operator


class TransferMatrix:
    """Collocation matrix of f -> sum_c w_c(x) |g_c'(x)|^t f(g_c x) on Chebyshev nodes.

    Requires every branch to map the ambient interval into itself.
    """

    def __init__(self, model: GibbsModel, t: float = 0.0, degree: int = 64,
                 extra_log: Callable | None = None):
        lo, hi = model.ifs.ambient
        self.model = model
        self.t = float(t)
        self.xn = _cheb.nodes(lo, hi, degree)
        d = len(self.xn)
        M = np.zeros((d, d))
        pot = model.potential
        for c in range(model.size):
            letters = np.full(d, c)
            y, ld = model.ifs.apply(letters, self.xn)
            lw = pot.logweight(letters, self.xn, model.ifs, logderiv=ld, images=y) + self.t * ld
            if extra_log is not None:
                lw = lw + extra_log(c, self.xn, y, ld)
            E = _cheb.interp_matrix(self.xn, np.clip(y, lo, hi))
            M += np.exp(lw)[:, None] * E
        self.M = M

    def apply(self, fvals: np.ndarray, n: int = 1) -> np.ndarray:
        v = np.asarray(fvals, dtype=float)
        for _ in range(n):
            v = self.M @ v
        return v

    def leading(self):
        """(rho, right eigenvector h at nodes normalised to mean 1, left eigenvector)."""
        vals, vecs = np.linalg.eig(self.M)
        i = int(np.argmax(vals.real))
        rho = float(vals[i].real)
        h = np.real(vecs[:, i])
        h = h / np.mean(h)
        lvals, lvecs = np.linalg.eig(self.M.T)
        j = int(np.argmin(np.abs(lvals - vals[i])))
        v = np.real(lvecs[:, j])
        v = v / np.sum(v * h)
        return rho, h, v

    def log_spectral_radius(self) -> float:
        return float(np.log(self.leading()[0]))


def normalize(model: GibbsModel, degree: int = 64) -> GibbsModel:
    """Cohomologous normalized potential: w~_c(y) = w_c(y) h(g_c y) / (rho h(y))."""
    tm = TransferMatrix(model, 0.0, degree)
    rho, h, _ = tm.leading()
    if np.any(h <= 0):
        raise ArithmeticError("leading eigenfunction is not positive; increase degree")
    pot = Potential("normalized", base=model.potential, h=_cheb.Interpolant(tm.xn, h),
                    shift=float(np.log(rho)), meta={"pressure_before": float(np.log(rho))})
    return GibbsModel(model.ifs, pot, model.alphabet, None, model.name + "+normalized", dict(model.meta))


def invariant_functional(model: GibbsModel, degree: int = 64):
    """Return (nodes, weights) with int f dmu ~ sum weights * f(nodes) for a normalized model."""
    tm = TransferMatrix(model, 0.0, degree)
    rho, h, v = tm.leading()
    # for a normalized operator h is constant; v represents mu on interpolants
    v = v * h.mean()
    return tm.xn, v / v.sum(), rho


# ---------------------------------------------------------------------------
# pressure


@dataclass
class PressureResult:
    value: float
    cauchy_gap: float
    sequence: list
    divergent: bool = False


def pressure(model: GibbsModel, t: float = 0.0, n_max: int = 6, lam: float = 0.0,
             grid: int = 33, budget: int | None = None) -> PressureResult:
    """(1/n) log sum_a sup_x exp(S_n psi) for psi = phi + t(tau + lam), n = 1..n_max.

    The sup is a grid maximum inflated by the distortion modulus on half a grid step.
    """
    if n_max < 4:
        raise ValueError("n_max must be >= 4")
    # divergence check on the truncated alphabet: per-letter sup terms must decay
    div = _tail_ratio_diverges(model, t)
    seq = []
    C = model.ifs.distortion_C or 0.0
    a = model.ifs.distortion_alpha
    kap = model.ifs.kappa_plus
    for n in range(1, n_max + 1):
        tot = 0.0
        for blk in iter_word_blocks(n, model.alphabet, model.rule, budget):
            best = np.full(blk.shape[0], -np.inf)
            h = None
            for b in np.unique(blk[:, -1]):
                rows = blk[:, -1] == b
                lo, hi = model.ifs.domain(int(b))
                xs = np.linspace(lo, hi, grid)
                h = (hi - lo) / (grid - 1)
                sub = blk[rows]
                vals = np.full(sub.shape[0], -np.inf)
                for x in xs:
                    _, ld, lw = model.evaluate(sub, x)
                    vals = np.maximum(vals, lw + t * (ld + lam * n))
                best[rows] = vals
            dpot = abs(t) + (model.potential.delta or 0.0)
            pad = dpot * C * (0.5 * h) ** a / (1 - kap ** a) if C else 0.0
            tot += float(np.sum(np.exp(best + pad)))
        seq.append(np.log(tot) / n)
    gap = abs(seq[-1] - seq[-2])
    return PressureResult(float(seq[-1]), float(gap), [float(s) for s in seq], div)


def _tail_ratio_diverges(model: GibbsModel, t: float) -> bool:
    if not model.alphabet.tail_truncated or model.size < 4:
        return False
    terms = []
    for c in range(model.size - 3, model.size):
        lo, hi = model.ifs.domain(c)
        xs = np.linspace(lo, hi, 17)
        letters = np.full(xs.size, c)
        y, ld = model.ifs.apply(letters, xs)
        lw = model.potential.logweight(letters, xs, model.ifs, logderiv=ld, images=y)
        terms.append(np.max(lw + t * ld))
    return bool(terms[-1] - terms[-2] >= 0)


def pressure_limit(model: GibbsModel, t: float = 0.0, lam: float = 0.0, degree: int = 64) -> float:
    """Limit value of the pressure sequence via the spectral radius of the collocation operator."""
    return TransferMatrix(model, t, degree).log_spectral_radius() + t * lam


def bowen_root(pressure_of_delta: Callable[[float], float], lo: float = 1e-6, hi: float = 1.0,
               tol: float = 1e-10, max_iter: int = 200) -> float:
    """Bisection for P(-delta tau) = 0 (P decreasing in delta) to |P| <= tol."""
    plo, phi = pressure_of_delta(lo), pressure_of_delta(hi)
    it = 0
    while phi > 0 and it < 60:
        hi *= 2.0
        phi = pressure_of_delta(hi)
        it += 1
    if plo < 0 or phi > 0:
        raise ArithmeticError(f"no sign change for Bowen root on [{lo}, {hi}]")
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        pm = pressure_of_delta(mid)
        if abs(pm) <= tol:
            return mid
        if pm > 0:
            lo = mid
        else:
            hi = mid
    return mid


def bowen_model(ifs: MarkovIFS, alphabet: Alphabet | None = None, degree: int = 64,
                tol: float = 1e-10, hi: float = 1.0):
    """Solve P(-delta tau) = 0 and return (delta, normalized geometric Gibbs model)."""

    def P(delta):
        return pressure_limit(GibbsModel(ifs, geometric(min(delta, 1.0) if delta <= 1 else delta), alphabet),
                              0.0, 0.0, degree)

    # geometric() validates delta <= 1; for the root search allow any positive delta
    def P_raw(delta):
        pot = Potential("callable", fn=lambda letters, y, f, d=delta: d * f.apply(letters, y)[1])
        return pressure_limit(GibbsModel(ifs, pot, alphabet), 0.0, 0.0, degree)

    delta = bowen_root(P_raw, hi=hi, tol=tol)
    base = GibbsModel(ifs, Potential("geometric", delta=min(delta, 1.0)) if delta <= 1
                      else Potential("callable", fn=lambda letters, y, f, d=delta: d * f.apply(letters, y)[1]),
                      alphabet, name=ifs.name + "+bowen")
    return delta, normalize(base, degree)


# ---------------------------------------------------------------------------
# Lyapunov exponent


@dataclass
class LyapunovResult:
    value: float
    stderr: float
    method: str


def _expected_logderiv(model: GibbsModel, y: np.ndarray) -> np.ndarray:
    """F(y) = sum_c w_c(y) log|g_c'(y)|, so that int tau dmu = int F dmu."""
    y = np.asarray(y, dtype=float)
    tot = np.zeros_like(y)
    for c in range(model.size):
        letters = np.full(y.shape, c)
        img, ld = model.ifs.apply(letters, y)
        lw = model.potential.logweight(letters, y, model.ifs, logderiv=ld, images=img)
        tot += np.exp(lw) * ld
    return tot


def lyapunov(model: GibbsModel, method: str = "cylinder", samples: np.ndarray | None = None,
             depth: int = 4, degree: int = 64, budget: int | None = None) -> LyapunovResult:
    """Estimate lambda = -int tau dmu.

    monte_carlo: average of -F over supplied mu-samples, with stderr.
    cylinder: sum_a p_a (-F(x_a)) / sum_a p_a over words of length ``depth``.
    spectral: left eigenvector functional of the collocation operator.
    """
    if method == "monte_carlo":
        if samples is None:
            raise ValueError("monte_carlo needs samples")
        v = -_expected_logderiv(model, np.asarray(samples))
        return LyapunovResult(float(v.mean()), float(v.std(ddof=1) / np.sqrt(v.size)), method)
    if method == "cylinder":
        num = 0.0
        den = 0.0
        for blk in iter_word_blocks(depth, model.alphabet, model.rule, budget):
            p = model.p_weights(blk)
            xa = model.ref_points(blk)
            num += float(np.sum(p * -_expected_logderiv(model, xa)))
            den += float(np.sum(p))
        return LyapunovResult(num / den, 0.0, method)
    if method == "spectral":
        xn, wts, _ = invariant_functional(model, degree)
        return LyapunovResult(float(np.sum(wts * -_expected_logderiv(model, xn))), 0.0, method)
    raise ValueError(f"unknown method {method}")


# ---------------------------------------------------------------------------
# light tail


@dataclass
class LightTailResult:
    value: float
    tail_bound: float
    ratio: float
    divergent: bool


def light_tail_constant(model: GibbsModel, gamma0: float, grid: int = 65) -> LightTailResult:
    """sum_c sup_x w_c(x) |g_c'(x)|^{-gamma0} over the alphabet, plus a ratio-test tail bound."""
    if gamma0 <= 0:
        raise ValueError("gamma0 must be positive")
    terms = []
    for c in range(model.size):
        lo, hi = model.ifs.domain(c)
        xs = np.linspace(lo, hi, grid)
        letters = np.full(xs.size, c)
        y, ld = model.ifs.apply(letters, xs)
        lw = model.potential.logweight(letters, xs, model.ifs, logderiv=ld, images=y)
        terms.append(float(np.max(np.exp(lw - gamma0 * ld))))
    terms = np.array(terms)
    if model.size >= 3 and model.alphabet.tail_truncated:
        r = terms[-1] / terms[-2]
        div = r >= 1
        tail = np.inf if div else terms[-1] * r / (1 - r)
    else:
        r, div, tail = 0.0, False, 0.0
    return LightTailResult(float(terms.sum()), float(tail), float(r), bool(div))


# ---------------------------------------------------------------------------
# moment bounds


@dataclass
class MomentConstants:
    gamma0: float
    lam: float
    t_gamma0: float
    eps_gamma0: float
    second_derivative: float
    t_grid: list
    pressure_curve: list


def pressure_curve(model: GibbsModel, ts: np.ndarray, lam: float, degree: int = 64) -> np.ndarray:
    return np.array([pressure_limit(model, float(t), lam, degree) for t in ts])


def moment_constants(model: GibbsModel, gamma0: float, lam: float, n_t: int = 41,
                     degree: int = 64) -> MomentConstants:
    """t_gamma0 and eps_gamma0 from a polynomial fit of P(phi + t(tau+lam)) on |t| <= gamma0/2."""
    tmax = gamma0 / 2.0
    ts = np.linspace(-tmax, tmax, n_t)
    P = pressure_curve(model, ts, lam, degree)
    # quadratic + cubic fit through the origin; the quadratic coefficient is f''(0)/2
    A = np.stack([ts, ts ** 2, ts ** 3], axis=1)
    coef, *_ = np.linalg.lstsq(A, P, rcond=None)
    f2 = 2.0 * coef[1]
    ok = np.abs(P) <= 0.75 * f2 * ts ** 2 + 1e-15
    ok[ts == 0] = True
    t_g = 0.0
    for tt in np.sort(np.abs(ts)):
        sel = np.abs(ts) <= tt
        if np.all(ok[sel]):
            t_g = float(tt)
        else:
            break
    t_g = min(t_g, 0.99, gamma0 * (1 - 1e-9))
    sel = (np.abs(ts) <= t_g) & (ts != 0)
    ratios = np.abs(P[sel]) / ts[sel] ** 2 if sel.any() else np.array([])
    eps = float(max(np.max(ratios) if ratios.size else 0.0, abs(coef[1])))
    return MomentConstants(gamma0, lam, t_g, eps, float(f2), [float(v) for v in ts], [float(v) for v in P])


@dataclass
class MomentRow:
    n: int
    t: float
    lhs: float
    bound: float
    passed: bool
    worst_x: float


def moment_lhs(model: GibbsModel, n: int, t: float, lam: float, xs: np.ndarray,
               method: str = "auto", budget: int | None = None, degree: int = 64) -> np.ndarray:
    """sum_a w_a(x) (e^{lam n} |g_a'(x)|)^t at each x in xs."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if method == "auto":
        cap = DEFAULT_BUDGET if budget is None else budget
        method = "enumerate" if count_words(n, model.rule) * xs.size <= min(cap, 4_000_000) else "operator"
    if method == "enumerate":
        out = np.zeros(xs.size)
        for blk in iter_word_blocks(n, model.alphabet, model.rule, budget):
            for i, x in enumerate(xs):
                _, ld, lw = model.evaluate(blk, x)
                out[i] += float(np.sum(np.exp(lw + t * (ld + lam * n))))
        return out
    tm = TransferMatrix(model, t, degree)
    v = tm.apply(np.ones(len(tm.xn)), n)
    return _cheb.Interpolant(tm.xn, v)(xs) * np.exp(t * lam * n)


def moment_check(model: GibbsModel, n: int, t: float, consts: MomentConstants,
                 C_phi: float = 1.0, xs: np.ndarray | None = None, method: str = "auto",
                 budget: int | None = None) -> MomentRow:
    if abs(t) > consts.t_gamma0 + 1e-12:
        raise ValueError(f"|t|={abs(t)} exceeds t_gamma0={consts.t_gamma0}")
    if xs is None:
        xs = np.linspace(*model.ifs.ambient, 17)
    lhs = moment_lhs(model, n, t, consts.lam, xs, method, budget)
    i = int(np.argmax(lhs))
    bound = 2.0 * C_phi * np.exp(consts.eps_gamma0 * n * t * t)
    return MomentRow(n, float(t), float(lhs[i]), float(bound), bool(lhs[i] <= bound), float(xs[i]))


def gibbs_constant(model: GibbsModel, depth: int = 3, grid: int = 9, budget: int | None = None) -> float:
    """max over words of length ``depth`` and grid x of max(w/p, p/w)."""
    worst = 1.0
    for blk in iter_word_blocks(depth, model.alphabet, model.rule, budget):
        logp = np.log(model.p_weights(blk))
        for b in np.unique(blk[:, -1]):
            rows = blk[:, -1] == b
            for x in np.linspace(*model.ifs.domain(int(b)), grid):
                lw = model.evaluate(blk[rows], x)[2]
                worst = max(worst, float(np.exp(np.max(np.abs(lw - logp[rows])))))
    return worst


# ---------------------------------------------------------------------------
# upper regularity probe


class DegenerateMeasure(ValueError):
    pass


@dataclass
class RegularityResult:
    s_est: float
    C_est: float
    residual: float
    scales: list
    masses: list


def max_interval_mass(sorted_samples: np.ndarray, r: float) -> float:
    x = sorted_samples
    j = np.searchsorted(x, x + r, side="right")
    return float(np.max(j - np.arange(x.size)) / x.size)


def regularity_probe(samples: np.ndarray, scales: Sequence[float]) -> RegularityResult:
    x = np.sort(np.asarray(samples, dtype=float))
    if x.size < 10_000:
        raise ValueError("need at least 1e4 samples")
    scales = np.asarray(sorted(scales), dtype=float)
    if np.any(scales <= 0) or np.any(scales > 0.01 + 1e-15):
        raise ValueError("scales must lie in (0, 1/100]")
    m = np.array([max_interval_mass(x, r) for r in scales])
    if m[0] >= 0.5:
        raise DegenerateMeasure(f"mass {m[0]:.3f} in an interval of length {scales[0]:g}: atomic-looking sample")
    A = np.stack([np.ones_like(scales), np.log(scales)], axis=1)
    coef, *_ = np.linalg.lstsq(A, np.log(m), rcond=None)
    s = float(coef[1])
    res = float(np.sqrt(np.mean((A @ coef - np.log(m)) ** 2)))
    C = float(np.max(m / scales ** s))
    return RegularityResult(s, C, res, [float(v) for v in scales], [float(v) for v in m])


# ---------------------------------------------------------------------------
# report


@dataclass
class ThermoReport:
    pressure_estimates: list
    lyapunov: float
    lyapunov_stderr: float
    light_tail: dict
    moment_table: list
    gamma0: float | None = None
    eps_gamma0: float | None = None
    t_gamma0: float | None = None
    cauchy_tolerance: float | None = None

    def to_dict(self):
        return asdict(self)
