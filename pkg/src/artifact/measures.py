"""Empirical and cylinder realizations of Gibbs measures, pushforwards, distances."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from .symbolic import iter_word_blocks
from .thermo import GibbsModel


def make_rngs(seed: int, workers: int = 1) -> list[np.random.Generator]:
    """Counter-based Philox streams, one per worker, derived from a single seed."""
    ss = np.random.SeedSequence(int(seed))
    return [np.random.Generator(np.random.Philox(s)) for s in ss.spawn(int(workers))]


CHUNK = 1 << 16


def chunk_streams(seed: int, count: int):
    """(rng, size) per fixed-size chunk; the partition does not depend on worker count."""
    n = max(1, -(-int(count) // CHUNK))
    ss = np.random.SeedSequence(int(seed)).spawn(n)
    sizes = [CHUNK] * (n - 1) + [int(count) - CHUNK * (n - 1)]
    return [(np.random.Generator(np.random.Philox(s)), m) for s, m in zip(ss, sizes)]


def map_chunks(fn, seed: int, count: int, workers: int = 1) -> list:
    """Apply fn(rng, size) to every chunk, in a thread pool when workers > 1; order is preserved."""
    jobs = chunk_streams(seed, count)
    if workers <= 1 or len(jobs) == 1:
        return [fn(r, m) for r, m in jobs]
    from concurrent.futures import ThreadPoolExecutor
    with ThreadPoolExecutor(max_workers=int(workers)) as ex:
        return list(ex.map(lambda j: fn(*j), jobs))


def split_count(count: int, workers: int) -> list[int]:
    base, extra = divmod(int(count), int(workers))
    return [base + (1 if i < extra else 0) for i in range(int(workers))]


@dataclass
class EmpiricalMeasure:
    samples: np.ndarray
    seed: int | None = None
    gen_depth: int = 0

    def __post_init__(self):
        s = np.sort(np.asarray(self.samples, dtype=float).ravel())
        if s.size == 0:
            raise ValueError("empty sample set")
        self.samples = s

    @property
    def size(self) -> int:
        return self.samples.size

    def cdf(self, x):
        return np.searchsorted(self.samples, np.asarray(x, dtype=float), side="right") / self.size

    def interval_mass(self, lo: float, hi: float) -> float:
        i = np.searchsorted(self.samples, lo, side="left")
        j = np.searchsorted(self.samples, hi, side="right")
        return float(j - i) / self.size

    def mean(self) -> float:
        return float(self.samples.mean())

    def to_binary(self, path) -> None:
        self.samples.astype("<f8").tofile(str(path))

    @classmethod
    def from_binary(cls, path, seed=None, gen_depth=0) -> "EmpiricalMeasure":
        return cls(np.fromfile(str(path), dtype="<f8"), seed, gen_depth)

    def to_csv(self, path) -> None:
        Path(path).write_text("x\n" + "\n".join(repr(float(v)) for v in self.samples) + "\n")


def interval_mass(m: EmpiricalMeasure, lo: float, hi: float) -> float:
    return m.interval_mass(lo, hi)


def kolmogorov_distance(m1: EmpiricalMeasure, m2) -> float:
    """sup |F1 - F2|.  ``m2`` may be another EmpiricalMeasure or a CDF callable."""
    x = m1.samples
    if callable(m2):
        F = np.clip(np.asarray(m2(x), dtype=float), 0.0, 1.0)
        n = x.size
        # handle ties: evaluate empirical CDF at right and left limits
        hi = np.searchsorted(x, x, side="right") / n
        lo = np.searchsorted(x, x, side="left") / n
        return float(max(np.max(np.abs(hi - F)), np.max(np.abs(F - lo))))
    y = m2.samples
    pts = np.concatenate([x, y])
    return float(np.max(np.abs(m1.cdf(pts) - m2.cdf(pts))))


def dkw_bound(n: int, alpha: float = 0.01) -> float:
    """Dvoretzky-Kiefer-Wolfowitz radius: P(sup|F_n - F| > r) <= alpha."""
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * n))


def pushforward(m: EmpiricalMeasure, f: Callable) -> EmpiricalMeasure:
    y = np.asarray(f(m.samples), dtype=float)
    if y.shape == ():
        y = np.full(m.size, float(y))
    if not np.all(np.isfinite(y)):
        raise ValueError("pushforward function is not finite on the samples")
    return EmpiricalMeasure(y, m.seed, m.gen_depth)


# ---------------------------------------------------------------------------
# cylinder measures


@dataclass
class CylinderMeasure:
    depth: int
    words: np.ndarray
    weights: np.ndarray
    points: np.ndarray

    def total(self) -> float:
        return float(self.weights.sum())

    def entries(self):
        for w, p, x in zip(self.words, self.weights, self.points):
            yield tuple(int(v) for v in w), float(p), float(x)

    def as_empirical_weights(self):
        order = np.argsort(self.points, kind="stable")
        return self.points[order], self.weights[order]


def cylinder_measure(model: GibbsModel, depth: int, budget: int | None = None) -> CylinderMeasure:
    ws, ps, xs = [], [], []
    for blk in iter_word_blocks(depth, model.alphabet, model.rule, budget):
        ws.append(blk)
        ps.append(model.p_weights(blk))
        xs.append(model.ref_points(blk))
    return CylinderMeasure(depth, np.concatenate(ws), np.concatenate(ps), np.concatenate(xs))


# ---------------------------------------------------------------------------
# sampling


def _default_depth(model: GibbsModel) -> int:
    return int(math.ceil(math.log(1e-12) / math.log(model.ifs.kappa_plus)))


def sample(model: GibbsModel, count: int, depth: int | None = None, seed: int = 0,
           workers: int = 1, letter_sampler: Callable | None = None,
           start: float | None = None) -> EmpiricalMeasure:
    """Draw ``count`` points of the Gibbs measure.

    locally constant potential: i.i.d. letters (chaos game), exact up to truncation.
    normalized potential: Markov chain y -> g_c(y) with probability w_c(y), whose
    stationary law is the Gibbs measure; ``depth`` steps of burn-in per point.
    otherwise: words drawn from depth-n cylinder weights, emitting x_a.
    ``letter_sampler(rng, size)`` overrides the letter law in the i.i.d. case.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    depth = _default_depth(model) if depth is None else int(depth)
    x0 = model.ref_base_point(0) if start is None else float(start)
    pot = model.potential
    if not (pot.locally_constant or letter_sampler is not None or pot.kind == "normalized"):
        cm = cylinder_measure(model, depth)
        pc = cm.weights / cm.weights.sum()

    def one(rng, m):
        if pot.locally_constant or letter_sampler is not None:
            if letter_sampler is None:
                p = pot.weights / pot.weights.sum()
                draw = lambda r, k, p=p: r.choice(len(p), size=k, p=p)
            else:
                draw = letter_sampler
            y = np.full(m, x0)
            for _ in range(depth):
                y, _ = model.ifs.apply(draw(rng, m), y)
            return y
        elif pot.kind == "normalized":
            y = np.full(m, x0)
            for _ in range(depth):
                W = np.empty((m, model.size))
                imgs, lds = model.ifs.apply_all(y)
                for c in range(model.size):
                    W[:, c] = np.exp(pot.logweight(np.full(m, c), y, model.ifs, logderiv=lds[:, c],
                                                   images=imgs[:, c]))
                cum = np.cumsum(W, axis=1)
                u = rng.random(m) * cum[:, -1]
                pick = np.minimum((cum < u[:, None]).sum(axis=1), model.size - 1)
                y = imgs[np.arange(m), pick]
            return y
        return cm.points[rng.choice(pc.size, size=m, p=pc)]

    parts = map_chunks(one, seed, count, workers)
    return EmpiricalMeasure(np.concatenate(parts), seed, depth)


def refresh(m: EmpiricalMeasure, model: GibbsModel, seed: int = 1,
            letter_sampler: Callable | None = None) -> EmpiricalMeasure:
    """Apply one more random branch to each sample (invariance check)."""
    rng = make_rngs(seed, 1)[0]
    if letter_sampler is None:
        p = model.potential.weights / model.potential.weights.sum()
        letters = rng.choice(p.size, size=m.size, p=p)
    else:
        letters = letter_sampler(rng, m.size)
    y, _ = model.ifs.apply(letters, rng.permutation(m.samples))
    return EmpiricalMeasure(y, seed, m.gen_depth + 1)
