"""Branch maps, composite maps, cylinders and distortion certificates."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .symbolic import TransitionRule


class CompositionError(ValueError):
    """A point left the domain of the next branch during composition."""

    def __init__(self, stage: int, letter: int, value: float, domain):
        self.stage = stage
        super().__init__(
            f"composition escaped domain at stage {stage} (letter {letter}): "
            f"{value!r} not in {tuple(domain)}")


class DistortionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# branches

BRANCH_KINDS: dict[str, type] = {}


def register_branch(cls):
    BRANCH_KINDS[cls.kind] = cls
    return cls


class Branch:
    """A monotone C^{1+alpha} contraction on a closed interval."""

    kind = "abstract"

    def __init__(self, domain=(0.0, 1.0), label: int = 0):
        self.domain = (float(domain[0]), float(domain[1]))
        self.label = int(label)

    def value(self, x):
        raise NotImplementedError

    def deriv(self, x):
        raise NotImplementedError

    def logderiv(self, x):
        return np.log(np.abs(self.deriv(x)))

    def value_logderiv(self, x):
        return self.value(x), self.logderiv(x)

    def dlogderiv(self, x):
        """d/dx log|g'(x)|; raise NotImplementedError when unavailable."""
        raise NotImplementedError

    @property
    def has_dlog(self) -> bool:
        try:
            self.dlogderiv(np.array([0.5 * (self.domain[0] + self.domain[1])]))
            return True
        except NotImplementedError:
            return False

    def params(self) -> dict:
        return {}

    def to_dict(self) -> dict:
        return {"kind": self.kind, "label": self.label, "domain": list(self.domain), **self.params()}

    @classmethod
    def from_dict(cls, d: dict) -> "Branch":
        d = dict(d)
        kind = d.pop("kind")
        return BRANCH_KINDS[kind]._from_params(d)

    @classmethod
    def _from_params(cls, d):
        return cls(**d)


@register_branch
class AffineBranch(Branch):
    kind = "affine"

    def __init__(self, slope: float, offset: float, domain=(0.0, 1.0), label: int = 0):
        super().__init__(domain, label)
        self.slope = float(slope)
        self.offset = float(offset)
        self._logd = float(np.log(abs(self.slope)))

    def value(self, x):
        return self.slope * np.asarray(x, dtype=float) + self.offset

    def deriv(self, x):
        return np.full(np.shape(x), self.slope)

    def logderiv(self, x):
        return np.full(np.shape(x), self._logd)

    def dlogderiv(self, x):
        return np.zeros(np.shape(x))

    def params(self):
        return {"slope": self.slope, "offset": self.offset}


@register_branch
class MoebiusBranch(Branch):
    """x -> (a x + b) / (c x + d)."""

    kind = "moebius"

    def __init__(self, a, b, c, d, domain=(0.0, 1.0), label: int = 0):
        super().__init__(domain, label)
        self.a, self.b, self.c, self.d = map(float, (a, b, c, d))
        self.det = self.a * self.d - self.b * self.c
        if self.det == 0:
            raise ValueError("degenerate Moebius map")

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return (self.a * x + self.b) / (self.c * x + self.d)

    def deriv(self, x):
        x = np.asarray(x, dtype=float)
        return self.det / (self.c * x + self.d) ** 2

    def logderiv(self, x):
        x = np.asarray(x, dtype=float)
        return np.log(abs(self.det)) - 2.0 * np.log(np.abs(self.c * x + self.d))

    def dlogderiv(self, x):
        x = np.asarray(x, dtype=float)
        return -2.0 * self.c / (self.c * x + self.d)

    def params(self):
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}


@register_branch
class LorenzInverseBranch(Branch):
    """Inverse branch of the Lorenz-like map.

    side=+1: y -> ((y + b)/a)^(1/alpha);  side=-1: y -> -((-b - y)/a)^(1/alpha).
    """

    kind = "lorenz_inverse"

    def __init__(self, a, alpha, b, side, domain=(-0.2, 0.2), label: int = 0):
        super().__init__(domain, label)
        self.a, self.alpha, self.b = float(a), float(alpha), float(b)
        self.side = int(side)
        if self.side not in (-1, 1):
            raise ValueError("side must be +1 or -1")
        self.p = 1.0 / self.alpha

    def _base(self, y):
        y = np.asarray(y, dtype=float)
        return (y + self.b) / self.a if self.side > 0 else (-self.b - y) / self.a

    def value(self, y):
        u = self._base(y)
        return self.side * u ** self.p

    def deriv(self, y):
        u = self._base(y)
        return (self.p / self.a) * u ** (self.p - 1.0)

    def logderiv(self, y):
        u = self._base(y)
        return np.log(self.p / self.a) + (self.p - 1.0) * np.log(u)

    def dlogderiv(self, y):
        u = self._base(y)
        return self.side * (self.p - 1.0) / (self.a * u)

    def params(self):
        return {"a": self.a, "alpha": self.alpha, "b": self.b, "side": self.side}


def _lsv_T(u, alpha):
    return u * (1.0 + (2.0 * u) ** alpha)


def lsv_left_inverse(x, alpha, tol=1e-15, max_iter=100):
    """Solve u(1 + 2^a u^a) = x for u in [0, 1/2].

    T is increasing and convex, so Newton started at min(x, 1/2) (where T >= x)
    decreases monotonically to the root.
    """
    x = np.asarray(x, dtype=float)
    if np.any((x < -tol) | (x > 1 + tol)):
        raise ValueError("lsv inverse needs x in [0, 1]")
    x = np.clip(x, 0.0, 1.0)
    c = 2.0 ** alpha
    u = np.minimum(x, 0.5)
    for _ in range(max_iter):
        ua = u ** alpha
        step = (u * (1.0 + c * ua) - x) / (1.0 + (alpha + 1.0) * c * ua)
        u = np.maximum(u - step, 0.0)
        if np.all(np.abs(step) <= tol * np.maximum(u, 1e-300)):
            break
    else:
        raise ArithmeticError(f"lsv Newton did not converge, last step {np.max(np.abs(step))}")
    return u


@register_branch
class LSVInverseBranch(Branch):
    """Left inverse branch f_1 of T(u) = u(1 + 2^a u^a) on [0, 1/2]."""

    kind = "lsv_inverse"

    def __init__(self, alpha, domain=(0.0, 1.0), label: int = 0):
        super().__init__(domain, label)
        self.alpha = float(alpha)
        self._k = (self.alpha + 1.0) * 2.0 ** self.alpha

    def value(self, x):
        return lsv_left_inverse(x, self.alpha)

    def _Tp(self, u):
        return 1.0 + self._k * u ** self.alpha

    def deriv(self, x):
        return 1.0 / self._Tp(self.value(x))

    def logderiv(self, x):
        return -np.log(self._Tp(self.value(x)))

    def value_logderiv(self, x):
        u = self.value(x)
        return u, -np.log(self._Tp(u))

    def dlogderiv(self, x):
        u = self.value(x)
        with np.errstate(divide="ignore"):
            Tpp = self.alpha * self._k * u ** (self.alpha - 1.0)
        return -Tpp / self._Tp(u) ** 2

    def params(self):
        return {"alpha": self.alpha}


@register_branch
class ChainBranch(Branch):
    """Composition parts[0] o parts[1] o ... o parts[-1] treated as one branch."""

    kind = "chain"

    def __init__(self, parts: Sequence[Branch], domain=None, label: int = 0):
        parts = list(parts)
        super().__init__(domain if domain is not None else parts[-1].domain, label)
        self.parts = parts

    def _walk(self, x):
        y = np.asarray(x, dtype=float)
        pts = []
        for p in reversed(self.parts):
            pts.append(y)
            y = p.value(y)
        return y, pts  # pts[i] is the input to reversed(parts)[i]

    def value(self, x):
        return self._walk(x)[0]

    def logderiv(self, x):
        return self.value_logderiv(x)[1]

    def value_logderiv(self, x):
        y = np.asarray(x, dtype=float)
        total = np.zeros(np.shape(y))
        for p in reversed(self.parts):
            y, ld = p.value_logderiv(y)
            total = total + ld
        return y, total

    def deriv(self, x):
        return np.exp(self.logderiv(x))

    def dlogderiv(self, x):
        _, pts = self._walk(x)
        total = np.zeros(np.shape(x))
        inner = np.ones(np.shape(x))
        for p, y in zip(reversed(self.parts), pts):
            total = total + p.dlogderiv(y) * inner
            inner = inner * p.deriv(y)
        return total

    def params(self):
        return {"parts": [p.to_dict() for p in self.parts]}

    @classmethod
    def _from_params(cls, d):
        parts = [Branch.from_dict(p) for p in d.pop("parts")]
        return cls(parts, **d)


# ---------------------------------------------------------------------------
# the IFS


@dataclass
class MarkovIFS:
    branches: list
    ambient: tuple = (0.0, 1.0)
    transition: TransitionRule | None = None
    kappa_plus: float | None = None
    distortion_C: float | None = None
    distortion_alpha: float = 1.0
    name: str = "ifs"
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.ambient = (float(self.ambient[0]), float(self.ambient[1]))
        if len(self.branches) < 1:
            raise ValueError("IFS needs at least one branch")
        for i, b in enumerate(self.branches):
            b.label = i
        if self.transition is None:
            self.transition = TransitionRule.full(max(2, len(self.branches)))
            if len(self.branches) == 1:
                # single-branch systems: keep a 1x1 rule semantics
                self.transition = None
        if self.kappa_plus is None:
            self.kappa_plus = self.estimate_kappa_plus()
        if not (0 < self.kappa_plus < 1):
            raise ValueError(f"kappa_plus={self.kappa_plus} not in (0,1)")

    @property
    def size(self) -> int:
        return len(self.branches)

    def domain(self, letter: int):
        return self.branches[letter].domain

    def grid(self, letter: int, m: int = 257):
        lo, hi = self.domain(letter)
        return np.linspace(lo, hi, m)

    def estimate_kappa_plus(self, m: int = 513) -> float:
        return float(max(np.max(np.abs(b.deriv(np.linspace(*b.domain, m)))) for b in self.branches))

    # -- vectorized application -------------------------------------------
    def apply(self, letters: np.ndarray, y: np.ndarray, want_dlog: bool = False):
        """Apply branch letters[i] to y[i]; return (values, logderivs[, dlogs, derivs])."""
        letters = np.asarray(letters)
        y = np.asarray(y, dtype=float)
        out = np.empty_like(y)
        ld = np.empty_like(y)
        dl = np.empty_like(y) if want_dlog else None
        for a in np.unique(letters):
            m = letters == a
            br = self.branches[int(a)]
            ys = y[m]
            out[m], ld[m] = br.value_logderiv(ys)
            if want_dlog:
                dl[m] = br.dlogderiv(ys)
        if want_dlog:
            return out, ld, dl
        return out, ld

    def apply_all(self, y: np.ndarray):
        """Images and log-derivatives of y under every branch, shape (len(y), size).

        Chain branches share evaluated inner segments, so nested families such as
        f_0 f_1^a cost one extra stage per letter instead of a full chain each.
        """
        y = np.asarray(y, dtype=float)
        imgs = np.empty((y.size, self.size))
        lds = np.empty((y.size, self.size))
        memo = {(): (y, np.zeros(y.shape))}
        for c, br in enumerate(self.branches):
            if not isinstance(br, ChainBranch):
                imgs[:, c], lds[:, c] = br.value_logderiv(y)
                continue
            key = ()
            cur = memo[()]
            for part in reversed(br.parts):
                key = key + (id(part),)
                if key not in memo:
                    v, ld = part.value_logderiv(cur[0])
                    memo[key] = (v, cur[1] + ld)
                cur = memo[key]
            imgs[:, c], lds[:, c] = cur
        return imgs, lds

    def compose_arrays(self, words: np.ndarray, x, want_dlog: bool = False,
                       step_hook: Callable | None = None, check_domain: bool = False):
        """Evaluate g_a(x) and log|g_a'(x)| for every row of ``words``.

        ``x`` is a scalar or an array broadcast against the rows.  The hook
        is called as step_hook(k, letters, y_in) before each stage so callers
        can accumulate Birkhoff sums of a potential.
        """
        words = np.atleast_2d(np.asarray(words))
        m, n = words.shape
        y = np.broadcast_to(np.asarray(x, dtype=float), (m,)).copy()
        L = np.zeros(m)
        D = np.zeros(m) if want_dlog else None
        inner = np.ones(m) if want_dlog else None
        for k in range(n - 1, -1, -1):
            letters = words[:, k]
            if check_domain:
                for a in np.unique(letters):
                    lo, hi = self.domain(int(a))
                    ys = y[letters == a]
                    bad = (ys < lo - 1e-12) | (ys > hi + 1e-12)
                    if bad.any():
                        raise CompositionError(n - k, int(a), float(ys[bad][0]), (lo, hi))
            if step_hook is not None:
                step_hook(k, letters, y)
            if want_dlog:
                y2, ld, dl = self.apply(letters, y, want_dlog=True)
                D = D + dl * inner
                inner = inner * np.exp(ld)
            else:
                y2, ld = self.apply(letters, y)
            L = L + ld
            y = y2
        if want_dlog:
            return y, L, D
        return y, L

    # -- serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ambient": list(self.ambient),
            "branches": [b.to_dict() for b in self.branches],
            "transition": None if self.transition is None else self.transition.to_json_dict(),
            "kappa_plus": self.kappa_plus,
            "distortion_C": self.distortion_C,
            "distortion_alpha": self.distortion_alpha,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MarkovIFS":
        br = [Branch.from_dict(b) for b in d["branches"]]
        tr = d.get("transition")
        rule = TransitionRule.from_json(tr) if tr else None
        return cls(br, ambient=tuple(d.get("ambient", (0.0, 1.0))), transition=rule,
                   kappa_plus=d.get("kappa_plus"), distortion_C=d.get("distortion_C"),
                   distortion_alpha=float(d.get("distortion_alpha", 1.0)),
                   name=d.get("name", "ifs"))


# ---------------------------------------------------------------------------
# composite maps and cylinders


@dataclass(frozen=True)
class CompositeMap:
    word: tuple
    ifs: MarkovIFS = field(repr=False)

    @property
    def n_comp(self) -> int:
        return len(self.word)

    def _run(self, x, check=False):
        w = np.asarray([self.word])
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        words = np.repeat(w, xs.size, axis=0)
        return self.ifs.compose_arrays(words, xs, check_domain=check)

    def value_fn(self, x):
        v = self._run(x)[0]
        return v if np.ndim(x) else float(v[0])

    def logderiv_fn(self, x):
        v = self._run(x)[1]
        return v if np.ndim(x) else float(v[0])

    def deriv_fn(self, x):
        return np.exp(self.logderiv_fn(x))


def compose(word: Sequence[int], ifs: MarkovIFS, check_at=None) -> CompositeMap:
    """Composite map g_a = g_{a1} o ... o g_{an}.

    If ``check_at`` is given, the composition is evaluated there with domain
    checks at every stage.
    """
    word = tuple(int(a) for a in word)
    if ifs.transition is not None and not ifs.transition.admissible(word):
        raise ValueError(f"word {word} is not admissible")
    cm = CompositeMap(word, ifs)
    if check_at is not None:
        cm._run(check_at, check=True)
    return cm


def nested_eval(word: Sequence[int], ifs: MarkovIFS, x: float):
    """Reference evaluation by direct nesting (scalar loop)."""
    y = float(x)
    ld = 0.0
    for a in reversed(tuple(word)):
        br = ifs.branches[a]
        ld += float(np.log(abs(br.deriv(np.array(y)))))
        y = float(br.value(np.array(y)))
    return y, ld


def cylinder(word: Sequence[int], ifs: MarkovIFS):
    """I_a = g_a(I_{b(a)}) as a (lo, hi) pair."""
    word = tuple(word)
    lo, hi = ifs.domain(word[-1])
    cm = compose(word, ifs)
    v = cm.value_fn(np.array([lo, hi]))
    return float(min(v)), float(max(v))


def cylinders_arrays(words: np.ndarray, ifs: MarkovIFS):
    """Vectorized cylinder endpoints for a full-shift style word array."""
    words = np.atleast_2d(words)
    last = words[:, -1]
    lo = np.array([ifs.domain(int(a))[0] for a in last])
    hi = np.array([ifs.domain(int(a))[1] for a in last])
    v0, _ = ifs.compose_arrays(words, lo)
    v1, _ = ifs.compose_arrays(words, hi)
    return np.minimum(v0, v1), np.maximum(v0, v1)


def verify_distortion(ifs: MarkovIFS, grid_size: int = 256, alpha: float | None = None):
    """Grid estimate of the smallest C with |log g'(x) - log g'(y)| <= C |x-y|^alpha.

    Returns (C_est, alpha, pass) where pass compares with the declared constant.
    """
    if grid_size < 16:
        raise ValueError("grid_size must be >= 16")
    alpha = ifs.distortion_alpha if alpha is None else float(alpha)
    C = 0.0
    for br in ifs.branches:
        xs = np.linspace(*br.domain, grid_size)
        L = br.logderiv(xs)
        if not np.all(np.isfinite(L)):
            bad = xs[~np.isfinite(L)][0]
            raise DistortionError(f"non-finite log-derivative of branch {br.label} at x={bad}")
        dx = np.abs(xs[:, None] - xs[None, :])
        dL = np.abs(L[:, None] - L[None, :])
        np.fill_diagonal(dx, 1.0)
        C = max(C, float(np.max(dL / dx ** alpha)))
        if alpha == 1.0:
            try:
                d = br.dlogderiv(xs)
                if np.all(np.isfinite(d)):
                    C = max(C, float(np.max(np.abs(d))))
            except NotImplementedError:
                pass
    declared = ifs.distortion_C
    ok = True if declared is None else C <= declared * (1 + 1e-12)
    return C, alpha, ok
