"""Oscillatory integrals against IFS measures and empirical decay exponents."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .measures import CylinderMeasure, EmpiricalMeasure
from .thermo import GibbsModel


class QuadratureRefused(ValueError):
    """Cylinder quadrature error bound exceeds 0.5 at this frequency."""


@dataclass
class Quadrature:
    """Weighted nodes with the largest cell length (for the error bound)."""

    points: np.ndarray
    weights: np.ndarray
    max_cell: float

    @classmethod
    def uniform(cls, cells: int, lo: float = 0.0, hi: float = 1.0) -> "Quadrature":
        h = (hi - lo) / cells
        return cls(lo + h * (np.arange(cells) + 0.5), np.full(cells, 1.0 / cells), h)


def cylinder_quadrature(model: GibbsModel, depth: int) -> Quadrature:
    """Depth-n nodes x_a with weights p_a.

    Locally constant potentials are built by pushing the level-k node set through
    every branch (no word arrays), so depth 20 on two letters is cheap.
    """
    ifs = model.ifs
    lo, hi = ifs.ambient
    if model.potential.locally_constant and model.rule.is_full:
        w0 = model.potential.weights
        pts = np.array([model.ref_base_point(0)])
        ends = np.array([[lo, hi]])
        wts = np.array([1.0])
        for _ in range(depth):
            P, E, Wn = [], [], []
            for c in range(ifs.size):
                lc = np.full(pts.size, c)
                P.append(ifs.apply(lc, pts)[0])
                e0 = ifs.apply(lc, ends[:, 0])[0]
                e1 = ifs.apply(lc, ends[:, 1])[0]
                E.append(np.stack([e0, e1], axis=1))
                Wn.append(wts * w0[c])
            pts, ends, wts = np.concatenate(P), np.concatenate(E), np.concatenate(Wn)
        return Quadrature(pts, wts, float(np.abs(ends[:, 1] - ends[:, 0]).max()))
    from .measures import cylinder_measure
    cm = cylinder_measure(model, depth)
    a = ifs.compose_arrays(cm.words, np.full(len(cm.words), lo))[0]
    b = ifs.compose_arrays(cm.words, np.full(len(cm.words), hi))[0]
    return Quadrature(cm.points, cm.weights, float(np.abs(b - a).max()))


def _as_quadrature(measure) -> Quadrature | None:
    if isinstance(measure, Quadrature):
        return measure
    if isinstance(measure, CylinderMeasure):
        raise TypeError("wrap cylinder measures with cylinder_quadrature to supply cell lengths")
    return None


def _psi_lipschitz(psi: Callable, pts: np.ndarray) -> float:
    if pts.size < 2:
        return 1.0
    x = np.sort(pts[:: max(1, pts.size // 4096)])
    d = np.diff(x)
    ok = d > 1e-12
    if not ok.any():
        return 1.0
    return float(np.max(np.abs(np.diff(psi(x))[ok] / d[ok])))


def oscillatory_integral(measure, chi: Callable | None, psi: Callable | None, xi: float,
                         method: str | None = None, psi_lip: float | None = None):
    """(value, error) for the integral of chi e^{i xi psi} against ``measure``.

    EmpiricalMeasure -> Monte Carlo, error = standard error.
    Quadrature       -> node sum, error = |xi| sup|psi'| max cell length.
    """
    q = _as_quadrature(measure)
    if method is None:
        method = "cylinder_quadrature" if q is not None else "monte_carlo"
    if method == "cylinder_quadrature":
        if q is None:
            raise TypeError("quadrature mode needs a Quadrature")
        x = q.points
        lip = psi_lip if psi_lip is not None else (1.0 if psi is None else _psi_lipschitz(psi, x))
        bound = abs(xi) * lip * q.max_cell
        if bound > 0.5:
            raise QuadratureRefused(f"error bound {bound:.3g} > 0.5 at xi={xi}; increase depth")
        ph = x if psi is None else psi(x)
        amp = 1.0 if chi is None else chi(x)
        return complex(np.sum(q.weights * amp * np.exp(1j * xi * ph))), bound
    if method != "monte_carlo":
        raise ValueError(f"unknown method {method!r}")
    x = measure.samples if isinstance(measure, EmpiricalMeasure) else np.asarray(measure, float)
    ph = x if psi is None else psi(x)
    amp = 1.0 if chi is None else chi(x)
    z = amp * np.exp(1j * xi * ph)
    mean = complex(z.mean())
    se = float(np.sqrt(np.mean(np.abs(z - mean) ** 2) / x.size))
    return mean, se


# ---------------------------------------------------------------------------


def xi_grid(xi_min: float, xi_max: float, points_per_octave: int = 8) -> np.ndarray:
    octaves = math.log2(xi_max / xi_min)
    k = int(round(octaves * points_per_octave))
    return xi_min * 2.0 ** (np.arange(k + 1) / points_per_octave)


@dataclass
class DecayReport:
    xi_grid: list
    magnitudes: list
    stderr: list
    windows: list
    window_sup: list
    beta_fit: float
    beta_band: tuple
    residual: float
    method: str
    decay_failure: bool
    meta: dict = field(default_factory=dict)
    intercept: float = 0.0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["beta_band"] = list(self.beta_band)
        return d

    def csv_rows(self):
        sup = dict(zip(self.windows, self.window_sup))
        for x, m, s in zip(self.xi_grid, self.magnitudes, self.stderr):
            j = int(math.floor(math.log2(x)))
            yield (x, m, s, j, sup.get(j, float("nan")))

    def to_csv(self, path) -> None:
        lines = ["xi,magnitude,stderr,window,window_sup"]
        lines += [f"{x!r},{m!r},{s!r},{j},{w!r}" for x, m, s, j, w in self.csv_rows()]
        Path(path).write_text("\n".join(lines) + "\n")


def fit_beta(windows: Sequence[int], sups: Sequence[float], level: float = 0.95):
    """Least squares of log sup on log xi at window centres.

    Returns (beta, band, residual, intercept); band is the t-quantile interval.
    """
    x = (np.asarray(windows, float) + 0.5) * math.log(2.0)
    y = np.log(np.maximum(np.asarray(sups, float), 1e-300))
    if x.size < 3:
        raise ValueError("need at least three dyadic windows for a fit")
    res = stats.linregress(x, y)
    tq = stats.t.ppf(0.5 + level / 2, x.size - 2)
    beta = -res.slope
    resid = float(np.sqrt(np.mean((y - (res.intercept + res.slope * x)) ** 2)))
    band = (float(beta - tq * res.stderr), float(beta + tq * res.stderr))
    return float(beta), band, resid, float(res.intercept)


def decay_profile(measure, chi: Callable | None = None, psi: Callable | None = None,
                  xi_min: float = 16.0, xi_max: float = 2.0 ** 20, points_per_octave: int = 8,
                  xis: Sequence[float] | None = None, method: str | None = None,
                  seed: int | None = None, meta: dict | None = None) -> DecayReport:
    """Magnitudes on a geometric grid, dyadic-window suprema and a beta fit.

    ``xis`` replaces the geometric grid (e.g. a lacunary subsequence).
    """
    if xis is None:
        if xi_max / xi_min < 2 ** 8 * (1 - 1e-12):
            raise ValueError("xi_max / xi_min must be at least 2^8")
        grid = xi_grid(xi_min, xi_max, points_per_octave)
    else:
        grid = np.asarray(xis, dtype=float)
    q = _as_quadrature(measure)
    method = method or ("cylinder_quadrature" if q is not None else "monte_carlo")
    lip = None
    if method == "cylinder_quadrature":
        lip = 1.0 if psi is None else _psi_lipschitz(psi, q.points)
    mags, errs = [], []
    for xi in grid:
        v, e = oscillatory_integral(measure, chi, psi, float(xi), method, lip)
        mags.append(abs(v))
        errs.append(e)
    win = np.floor(np.log2(grid) + 1e-12).astype(int)
    windows = sorted(set(int(j) for j in win))
    if xis is None:
        # a trailing window holding only its left edge is not a window supremum
        windows = [w for w in windows if np.count_nonzero(win == w) >= points_per_octave // 2]
    sups = [max(m for m, j in zip(mags, win) if j == w) for w in windows]
    beta, band, resid, icpt = fit_beta(windows, sups)
    m = {"points_per_octave": points_per_octave, "seed": seed}
    if meta:
        m.update(meta)
    return DecayReport([float(x) for x in grid], [float(v) for v in mags], [float(e) for e in errs],
                       windows, [float(s) for s in sups], beta, band, resid, method,
                       bool(beta < 0), m, icpt)


def cantor_riesz(xi: float, terms: int = 60) -> float:
    """|Fourier transform| of the middle-thirds Cantor measure (infinite Riesz product)."""
    return float(abs(np.prod(np.cos(xi / 3.0 ** np.arange(1, terms + 1)))))


def sinc_half(xi: float) -> float:
    """|Fourier transform| of Lebesgue measure on [0,1]."""
    return 1.0 if xi == 0 else abs(math.sin(xi / 2) / (xi / 2))
