"""Chebyshev collocation on an interval: nodes, barycentric interpolation."""

from __future__ import annotations

import numpy as np


def nodes(lo: float, hi: float, degree: int) -> np.ndarray:
    """Chebyshev points of the second kind mapped to [lo, hi], increasing."""
    k = np.arange(degree + 1)
    t = -np.cos(np.pi * k / degree)
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * t


def bary_weights(degree: int) -> np.ndarray:
    w = (-1.0) ** np.arange(degree + 1)
    w[0] *= 0.5
    w[-1] *= 0.5
    # sign convention for increasing nodes
    return w * (-1.0) ** degree


def interp_matrix(xn: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Matrix E with (E @ f(xn)) = interpolant evaluated at targets."""
    w = bary_weights(len(xn) - 1)
    t = np.asarray(targets, dtype=float).ravel()
    diff = t[:, None] - xn[None, :]
    exact = diff == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        q = w[None, :] / diff
        E = q / q.sum(axis=1, keepdims=True)
    rows = exact.any(axis=1)
    if rows.any():
        E[rows] = exact[rows].astype(float)
    return E


class Interpolant:
    """Callable polynomial interpolant given values at the Chebyshev nodes ``xn``.

    Coefficients are computed once; evaluation is Clenshaw (numpy.polynomial).
    """

    def __init__(self, xn: np.ndarray, values: np.ndarray):
        self.xn = np.asarray(xn, dtype=float)
        self.values = np.asarray(values, dtype=float)
        dom = [float(self.xn[0]), float(self.xn[-1])]
        self._poly = np.polynomial.Chebyshev.fit(self.xn, self.values, len(self.xn) - 1, domain=dom)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self._poly(x)
