"""Command-line entry point: build models, run certifications, write reports.

Exit codes: 0 success, 1 invalid configuration, 2 a certification flag came
out false, 3 an enumeration budget was exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import report as rep
from .symbolic import BudgetExceeded, DEFAULT_BUDGET

OUT_ENV = "ARTIFACT_OUTPUT_DIR"
EXIT_OK, EXIT_CONFIG, EXIT_CERT, EXIT_BUDGET = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    model: str | None = None
    seed: int = 0
    budget: int = int(DEFAULT_BUDGET)
    samples: int = 1_000_000
    out: str = "."
    workers: int = 1
    svg: bool = False
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.budget <= 0 or self.samples <= 0:
            raise ConfigError("budgets must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


# ---------------------------------------------------------------------------
# model resolution


def builtin_model(spec: dict):
    """Return (GibbsModel, description) for a builtin spec such as {"builtin": "lyons-sub", "t": 0.5}."""
    from .models import affine, lyons, staircase
    name = spec.get("builtin")
    if name == "lyons-sub":
        return lyons.sub_model(float(spec.get("t", 0.5)))
    if name == "lyons":
        return lyons.lyons_model(float(spec.get("t", 0.5)), int(spec.get("letters", 20)),
                                 bool(spec.get("renormalize", False)))
    if name == "cantor":
        return affine.cantor_model()
    if name == "uniform":
        return affine.uniform_model()
    if name == "affine":
        return affine.equal_slope_model(float(spec.get("slope", 0.3)), int(spec.get("k", 2)))
    if name == "staircase":
        r = staircase.psi_iterate(staircase.FrostmanMeasure.uniform(int(spec.get("M", 4096))),
                                  int(spec.get("iterations", 200)))
        return r.system.model()
    raise ConfigError(f"unknown builtin model {name!r}")


def load_model(ref: str | None, default: dict):
    """``ref`` is a JSON file (a serialized model or a builtin spec), a builtin name, or None."""
    from .thermo import GibbsModel
    if ref is None:
        spec = default
        return builtin_model(spec), {"source": "builtin", "spec": spec,
                                     "content_hash": rep.blob_hash(rep.canonical_bytes(spec))}
    p = Path(ref)
    if p.is_file():
        data = p.read_bytes()
        try:
            d = json.loads(data)
        except json.JSONDecodeError as e:
            raise ConfigError(f"model file {ref} is not valid JSON: {e}") from e
        try:
            m = builtin_model(d) if "builtin" in d else GibbsModel.from_dict(d)
        except (KeyError, TypeError) as e:
            raise ConfigError(f"model file {ref} does not describe a model: {e}") from e
        return m, {"source": str(p.name), "content_hash": rep.blob_hash(data)}
    spec = {"builtin": ref}
    return builtin_model(spec), {"source": "builtin", "spec": spec,
                                 "content_hash": rep.blob_hash(rep.canonical_bytes(spec))}


# ---------------------------------------------------------------------------
# outputs


class Outputs:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.dir = Path(cfg.out)
        self.csv: dict = {}
        self.svg: dict = {}

    def table(self, name, header, rows):
        self.csv[name] = (header, [tuple(r) for r in rows])

    def plot(self, name, series, line=None, title=""):
        self.svg[name] = (series, line, title)

    def write(self, report: dict):
        stem = self.cfg.subcommand
        paths = [rep.write_json(self.dir / f"{stem}.json", report)]
        for name, (h, rows) in self.csv.items():
            paths.append(rep.write_csv(self.dir / f"{stem}_{name}.csv", h, rows))
        if self.cfg.svg:
            for name, (series, line, title) in self.svg.items():
                paths.append(rep.loglog_svg(self.dir / f"{stem}_{name}.svg", series, line, title))
        return paths


def _decay_outputs(out: Outputs, name: str, r):
    out.table(name, ["xi", "magnitude", "stderr", "window", "window_sup"], r.csv_rows())
    xs = [2.0 ** (w + 0.5) for w in r.windows]
    out.plot(name, {"|F|": (r.xi_grid, r.magnitudes), "window sup": (xs, r.window_sup)},
             (r.intercept, -r.beta_fit), f"beta = {r.beta_fit:.3f}")


# ---------------------------------------------------------------------------
# subcommands; each returns (params, results, passed, provenance)


def cmd_lorenz(cfg: RunConfig, out: Outputs):
    from .models.lorenz import lorenz_report
    o = cfg.options
    params = {k: float(o[k]) for k in ("a", "alpha", "b0", "b1")}
    r = lorenz_report(**params)
    out.table("table", ["quantity", "value"],
              [(k, v) for k, v in r.items() if isinstance(v, float)])
    return params, r, None, {}


def cmd_lyons(cfg: RunConfig, out: Outputs):
    from .fourier import decay_profile
    from .models import lyons
    from .nonconc import uni_margin
    from .thermo import light_tail_constant
    o = cfg.options
    t = float(o["t"])
    task = o.get("task") or "all"
    tasks = {"fixed-points", "Q", "light-tail", "uni", "decay"} if task == "all" else {task}
    res, ok = {}, True
    if "fixed-points" in tasks:
        x0, x1, x10 = lyons.lyons_fixed_points(t)
        res["fixed_points"] = {"x0": x0, "x1": x1, "x10": x10}
    if "Q" in tasks:
        grid = np.round(np.arange(1, 100) / 100.0, 2)
        rows = [(float(s), lyons.lyons_Q(float(s)), lyons.lyons_Q_fixed_point_route(float(s))) for s in grid]
        diff = max(abs(a - b) for _, a, b in rows)
        mn = min(abs(a) for _, a, _ in rows)
        res["Q"] = {"at_t": lyons.lyons_Q(t), "max_route_diff": diff, "min_abs_Q": mn,
                    "pass": bool(diff <= 1e-10 and mn > 0)}
        ok &= res["Q"]["pass"]
        out.table("Q", ["t", "Q_closed", "Q_fixed_point"], rows)
    if "light-tail" in tasks:
        rows = []
        for g in (0.5, 1.0, 2.0, 5.0):
            for s in (0.1, 0.5, 0.9):
                d = lyons.S_direct(g, s)
                e = lyons.S_extrapolated(g, s)
                rows.append((g, s, d, e, lyons.S_polylog(g, s), lyons.ratio_limit(g, s)))
        worst = max(abs(r[2] - r[3]) / abs(r[4]) for r in rows)
        rl = max(abs(r[5] - 0.5) for r in rows)
        m = lyons.lyons_model(t, 20)
        ltc = light_tail_constant(m, 1.0)
        res["light_tail"] = {"max_rel_diff_direct_vs_extrapolated": worst, "max_ratio_limit_error": rl,
                             "model_constant_gamma0_1": ltc.value, "model_tail_bound": ltc.tail_bound,
                             "pass": bool(worst <= 1e-8 and rl <= 1e-6)}
        ok &= res["light_tail"]["pass"]
        out.table("light_tail", ["gamma", "t", "S_direct", "S_extrapolated", "S_exact", "ratio_limit"], rows)
    if "uni" in tasks:
        u = uni_margin(lyons.sub_model(t), int(o.get("N", 2)), "exhaustive", budget=cfg.budget)
        res["uni"] = u.to_dict()
        ok &= u.c0 > 0
    if "decay" in tasks:
        m = lyons.sample_nu(t, cfg.samples, cfg.seed, workers=cfg.workers)
        r = decay_profile(m, xi_min=float(o.get("xi_min", 16)), xi_max=float(o.get("xi_max", 2 ** 20)),
                          seed=cfg.seed)
        res["decay"] = r.to_dict()
        res["decay"]["pass"] = bool(r.beta_fit > 0.05 and r.beta_band[0] > 0)
        ok &= res["decay"]["pass"]
        _decay_outputs(out, "decay", r)
    return {"t": t, "task": task, "samples": cfg.samples}, res, bool(ok), {}


def cmd_mp(cfg: RunConfig, out: Outputs):
    from .fourier import decay_profile
    from .measures import sample
    from .models import mp as mpm
    from .nonconc import uni_margin
    o = cfg.options
    alphas = [float(a) for a in o.get("alphas") or [o.get("alpha", 0.5)]]
    res, ok = {"systems": []}, True
    rows = []
    for a in alphas:
        s = mpm.mp_build(a, int(o.get("max_return", 30)))
        u = uni_margin(s.ifs(), 3, "suggested")
        cf = mpm.uni_closed_form(a)
        entry = {"alpha": a, "partition": [float(v) for v in s.points[:8]], "uni": u.to_dict(),
                 "uni_closed_form": cf, "uni_diff": abs(u.c0 - cf),
                 "pass": bool(abs(u.c0 - cf) <= 1e-8 and u.c0 > 0)}
        ok &= entry["pass"]
        rows.append((a, u.c0, cf, abs(u.c0 - cf)))
        if o.get("with_measure"):
            delta, norm = mpm.normalized_induced(s)
            ind = sample(norm, int(min(cfg.samples, 200_000)), depth=40, seed=cfg.seed,
                         workers=cfg.workers)
            proj = mpm.mp_project(ind, s)
            r = decay_profile(proj, xi_min=4.0, xi_max=4.0 * 2 ** 10, seed=cfg.seed)
            entry.update({"delta": delta, "projected_points": proj.size,
                          "projected_mass_below_half": proj.interval_mass(0.0, 0.5 - 1e-15),
                          "decay": r.to_dict()})
            _decay_outputs(out, f"decay_alpha{a:g}", r)
        res["systems"].append(entry)
    out.table("uni", ["alpha", "c0", "closed_form", "abs_diff"], rows)
    return {"alphas": alphas, "max_return": int(o.get("max_return", 30))}, res, bool(ok), {}


def cmd_staircase(cfg: RunConfig, out: Outputs):
    from .fourier import decay_profile
    from .measures import EmpiricalMeasure, make_rngs
    from .models import staircase as sc
    from .nonconc import mnl_statistic, qnl_fit
    o = cfg.options
    M, iters, N = int(o.get("M", 4096)), int(o.get("iterations", 200)), int(o.get("N", 4))
    r = sc.psi_iterate(sc.FrostmanMeasure.uniform(M), iters)
    sysm = r.system
    zeta_at_delta = sysm.zeta(sysm.delta)
    eps = r.mu.epsilon
    res = {"iterations": r.iterations, "final_residual": r.residual_trace[-1], "delta": sysm.delta,
           "zeta_at_delta_minus_1": zeta_at_delta - 1.0,
           "max_abs_zeta0_minus_2": max(abs(z - 2) for z in r.zeta0), "max_zeta1": max(r.zeta1),
           "frostman_violations": r.frostman_violations, "max_mass_drift": max(r.mass_drift),
           "frostman_epsilon": eps}
    fix_ok = (r.residual_trace[-1] <= 1e-3 and 3 * eps <= sysm.delta < 1 and abs(zeta_at_delta - 1) <= 1e-10
              and res["max_abs_zeta0_minus_2"] <= 1e-12 and res["max_zeta1"] <= 0.6)
    res["fixed_point_pass"] = bool(fix_ok)
    out.table("residual", ["iteration", "residual", "delta"],
              [(i + 1, v, d) for i, (v, d) in enumerate(zip(r.residual_trace, r.deltas))])
    rng = make_rngs(cfg.seed, 1)[0]
    xs = r.mu.sample(int(o.get("mnl_samples", 100_000)), rng)
    mnl = mnl_statistic(sysm.ifs(), (0,) * N + (1,), (0,) * (N - 1) + (1,), 0.0, xs)
    res["mnl"] = mnl.to_dict()
    res["mnl"]["pass"] = bool(mnl.ks_to_uniform <= 0.05 and not mnl.atom)
    q = qnl_fit(sysm.model(), [3, 4, 5, 6], [0.5, 0.2, 0.1, 0.05, 0.02], holdout=(7, 0.03),
                budget=cfg.budget)
    res["qnl"] = q.to_dict()
    ok = fix_ok and res["mnl"]["pass"] and q.passed
    if o.get("decay"):
        d = decay_profile(EmpiricalMeasure(r.mu.sample(cfg.samples, rng), cfg.seed), xi_min=4.0,
                          xi_max=4.0 * 2 ** 12, seed=cfg.seed)
        res["decay"] = d.to_dict()
        _decay_outputs(out, "decay", d)
    return {"M": M, "iterations": iters, "N": N, "kappa": sysm.kappa, "kappa0": sysm.kappa0,
            "b0": sysm.b0, "b1": sysm.b1}, res, bool(ok), {}


def cmd_qnl(cfg: RunConfig, out: Outputs):
    from .nonconc import qnl_fit
    o = cfg.options
    model, prov = load_model(cfg.model, {"builtin": "lyons-sub", "t": 0.5})
    ns = [int(v) for v in o.get("ns") or [3, 4, 5, 6]]
    sig = [float(v) for v in o.get("sigmas") or [0.5, 0.2, 0.1, 0.05, 0.02]]
    hold = (int(o.get("holdout_n") or max(ns) + 1), float(o.get("holdout_sigma") or 0.03))
    f = qnl_fit(model, ns, sig, holdout=hold, budget=cfg.budget)
    out.table("table", ["n", "sigma", "value"], [(r["n"], r["sigma"], r["value"]) for r in f.table])
    return {"ns": ns, "sigmas": sig, "holdout": list(hold)}, f.to_dict(), bool(f.passed), prov


def tree_experiment(seed: int = 0, ns=range(1, 13), factors=(8, 40, 200), tuples: int = 20,
                    gamma0: float = 0.5, t: float = 0.5, letters: int = 6):
    from .models import lyons
    from .nonconc import tree_constants, tree_loss
    from .thermo import lyapunov, moment_constants
    from .measures import make_rngs
    model = lyons.lyons_model(t, letters, renormalize=True)
    lam = lyapunov(model, "spectral").value
    mc = moment_constants(model, gamma0, lam)
    tc = tree_constants(model, gamma0, lam, mc.eps_gamma0, mc.t_gamma0)
    rng = make_rngs(seed, 1)[0]
    lo, hi = model.ifs.ambient
    pts = rng.uniform(lo, hi, size=(tuples, 3))
    # t = lambda_a(y, z) of a Gibbs-random depth-12 word, so the window is actually hit
    w = model.potential.weights / model.potential.weights.sum()
    words = rng.choice(w.size, size=(tuples, 12), p=w)
    ly = model.ifs.compose_arrays(words, pts[:, 1])[1]
    lz = model.ifs.compose_arrays(words, pts[:, 2])[1]
    ts = (ly - lz) / np.abs(pts[:, 1] - pts[:, 2]) ** tc.alpha
    rows = []
    for f in factors:
        s = tc.c0 / f
        for (x, y, z), tt in zip(pts, ts):
            for n in ns:
                rows.append(tree_loss(model, float(x), float(y), float(z), float(tt), s, tc.alpha, int(n), tc))
    return tc, mc, rows


def cmd_tree(cfg: RunConfig, out: Outputs):
    o = cfg.options
    nmax = int(o.get("n_max", 12))
    tc, mc, rows = tree_experiment(cfg.seed, range(1, nmax + 1), tuple(o.get("factors") or (8, 40, 200)),
                                   int(o.get("tuples", 20)), float(o.get("gamma0", 0.5)))
    ok = all(r.passed for r in rows)
    out.table("loss", ["n", "sigma", "t", "L", "bound", "pass", "case", "nodes"],
              [(r.n, r.sigma, r.t, r.L, r.bound, int(r.passed), r.case, r.nodes) for r in rows])
    res = {"constants": tc.to_dict(), "moment": {"t_gamma0": mc.t_gamma0, "eps_gamma0": mc.eps_gamma0},
           "rows": len(rows), "failures": sum(not r.passed for r in rows),
           "max_L_over_bound": max(r.L / r.bound for r in rows)}
    return {"n_max": nmax, "tuples": int(o.get("tuples", 20)), "gamma0": float(o.get("gamma0", 0.5))}, res, ok, {}


def moment_experiment(ns=range(5, 16), ts=(-0.1, -0.05, 0.05, 0.1), gamma0: float = 1.0,
                      t: float = 0.5, letters: int = 20):
    from .models import lyons
    from .thermo import lyapunov, moment_check, moment_constants
    model = lyons.lyons_model(t, letters)
    lam = lyapunov(model, "spectral").value
    mc = moment_constants(model, gamma0, lam)
    rows = [moment_check(model, int(n), float(s), mc, model.gibbs_constant or 1.0) for s in ts for n in ns]
    n0 = {}
    for s in ts:
        sub = sorted((r for r in rows if r.t == s), key=lambda r: r.n)
        k = len(sub)
        while k > 0 and sub[k - 1].passed:
            k -= 1
        n0[str(s)] = sub[k].n if k < len(sub) else None
    return mc, rows, n0


def cmd_moments(cfg: RunConfig, out: Outputs):
    mc, rows, n0 = moment_experiment()
    out.table("rows", ["n", "t", "lhs", "bound", "pass"], [(r.n, r.t, r.lhs, r.bound, int(r.passed)) for r in rows])
    ok = all(v is not None for v in n0.values())
    res = {"lambda": mc.lam, "t_gamma0": mc.t_gamma0, "eps_gamma0": mc.eps_gamma0, "n0": n0,
           "all_pass": all(r.passed for r in rows)}
    return {"ns": [5, 15], "ts": [-0.1, -0.05, 0.05, 0.1]}, res, bool(ok), {}


def cmd_census(cfg: RunConfig, out: Outputs):
    from .sumproduct import PhaseParameters, census_table
    from .thermo import lyapunov
    o = cfg.options
    model, prov = load_model(cfg.model, {"builtin": "lyons-sub", "t": 0.5})
    lam = float(o["lam"]) if o.get("lam") is not None else lyapunov(model).value
    P = PhaseParameters(float(o.get("xi", 1e6)), lam, float(o.get("epsilon0", 0.5)),
                        float(o.get("epsilon1", 0.1)), float(o.get("gamma2", 0.3)), int(o.get("k", 2)))
    ns = [int(v) for v in o.get("ns") or [2, 3, 4]]
    rows = census_table(model, ns, P, cfg.budget)
    out.table("census", ["n", "bad_mass", "bound", "pass"], [(r.n, r.bad_mass, r.threshold, int(r.passed)) for r in rows])
    bm = [r.bad_mass for r in rows]
    res = {"rows": [r.to_dict() for r in rows], "alpha_reg": P.alpha_reg,
           "nonincreasing": bool(all(b2 <= b1 + 1e-15 for b1, b2 in zip(bm, bm[1:])))}
    params = {"xi": P.xi, "lam": lam, "epsilon0": P.epsilon0, "epsilon1": P.epsilon1, "gamma2": P.gamma2,
              "k": P.k, "ns": ns}
    return params, res, bool(all(r.passed for r in rows)), prov


def cmd_fourier(cfg: RunConfig, out: Outputs):
    from .fourier import Quadrature, cylinder_quadrature, decay_profile
    from .measures import sample
    o = cfg.options
    name = cfg.model or "uniform"
    method = o.get("method") or ("cylinder_quadrature" if name in ("uniform", "cantor") else "monte_carlo")
    xi_min, xi_max = float(o.get("xi_min", 4.0)), float(o.get("xi_max", 4096.0))
    xis = None
    if name == "cantor" and o.get("lacunary", True):
        xis = [2 * math.pi * 3 ** m for m in range(7)]
    if name == "lyons-nu":
        from .models.lyons import sample_nu
        meas = sample_nu(float(o.get("t", 0.5)), cfg.samples, cfg.seed, workers=cfg.workers)
        prov = {"source": "builtin", "spec": {"builtin": "lyons-nu", "t": float(o.get("t", 0.5))}}
    elif method == "cylinder_quadrature":
        if name == "uniform":
            meas, prov = Quadrature.uniform(int(o.get("cells", 2 ** 20))), {"source": "builtin", "spec": "uniform"}
        else:
            model, prov = load_model(name, {})
            meas = cylinder_quadrature(model, int(o.get("depth", 20)))
    else:
        model, prov = load_model(name, {})
        meas = sample(model, cfg.samples, seed=cfg.seed, workers=cfg.workers)
    r = decay_profile(meas, xi_min=xi_min, xi_max=xi_max, xis=xis, method=method, seed=cfg.seed)
    _decay_outputs(out, "profile", r)
    res = r.to_dict()
    res["window_sup_spread"] = float(max(r.window_sup) - min(r.window_sup))
    return {"model": name, "method": method, "xi_min": xi_min, "xi_max": xi_max}, res, None, prov


COMMANDS = {"lorenz": cmd_lorenz, "lyons": cmd_lyons, "mp": cmd_mp, "staircase": cmd_staircase,
            "qnl": cmd_qnl, "tree": cmd_tree, "census": cmd_census, "fourier": cmd_fourier,
            "moments": cmd_moments}


# ---------------------------------------------------------------------------


def _csv_floats(s):
    return [float(v) for v in s.split(",")] if s else None


def _csv_ints(s):
    return [int(v) for v in s.split(",")] if s else None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="artifact", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model JSON file or builtin name")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=float, default=DEFAULT_BUDGET)
    common.add_argument("--samples", type=int, default=1_000_000)
    common.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or .)")
    common.add_argument("--workers", type=int, default=None, help="default: available CPUs")
    common.add_argument("--svg", action="store_true", help="also write SVG plots")
    common.add_argument("--config", help="JSON file; its keys override flags")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("lorenz", parents=[common])
    s.add_argument("--a", type=float, default=1.1)
    s.add_argument("--alpha", type=float, default=0.25)
    s.add_argument("--b0", type=float, default=-0.5)
    s.add_argument("--b1", type=float, default=0.5)

    s = sub.add_parser("lyons", parents=[common])
    s.add_argument("--t", type=float, default=0.5)
    s.add_argument("--task", "--subcommand", dest="task", default="all",
                   choices=["all", "fixed-points", "Q", "light-tail", "uni", "decay"])
    s.add_argument("--N", type=int, default=2)
    s.add_argument("--xi-min", type=float, default=16.0)
    s.add_argument("--xi-max", type=float, default=2.0 ** 20)

    s = sub.add_parser("mp", parents=[common])
    s.add_argument("--alpha", type=float, default=0.5)
    s.add_argument("--alphas", type=_csv_floats, default=None)
    s.add_argument("--max-return", type=int, default=30)
    s.add_argument("--with-measure", action="store_true")

    s = sub.add_parser("staircase", parents=[common])
    s.add_argument("--M", type=int, default=4096)
    s.add_argument("--iterations", type=int, default=200)
    s.add_argument("--N", type=int, default=4)
    s.add_argument("--mnl-samples", type=int, default=100_000)
    s.add_argument("--decay", action="store_true")

    s = sub.add_parser("qnl", parents=[common])
    s.add_argument("--ns", type=_csv_ints, default=None)
    s.add_argument("--sigmas", type=_csv_floats, default=None)
    s.add_argument("--holdout-n", type=int, default=None)
    s.add_argument("--holdout-sigma", type=float, default=0.03)

    s = sub.add_parser("tree", parents=[common])
    s.add_argument("--n-max", type=int, default=12)
    s.add_argument("--tuples", type=int, default=20)
    s.add_argument("--gamma0", type=float, default=0.5)
    s.add_argument("--factors", type=_csv_floats, default=None)

    sub.add_parser("moments", parents=[common])

    s = sub.add_parser("census", parents=[common])
    s.add_argument("--ns", type=_csv_ints, default=None)
    s.add_argument("--xi", type=float, default=1e6)
    s.add_argument("--lam", type=float, default=None)
    s.add_argument("--epsilon0", type=float, default=0.5)
    s.add_argument("--epsilon1", type=float, default=0.1)
    s.add_argument("--gamma2", type=float, default=0.3)
    s.add_argument("--k", type=int, default=2)

    s = sub.add_parser("fourier", parents=[common])
    s.add_argument("--method", choices=["monte_carlo", "cylinder_quadrature"], default=None)
    s.add_argument("--xi-min", type=float, default=4.0)
    s.add_argument("--xi-max", type=float, default=4096.0)
    s.add_argument("--depth", type=int, default=20)
    s.add_argument("--t", type=float, default=0.5)
    return p


_COMMON = {"model", "seed", "budget", "samples", "out", "workers", "svg", "config", "subcommand"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = vars(ns).copy()
    if d.get("config"):
        try:
            over = json.loads(Path(d["config"]).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read config {d['config']}: {e}") from e
        if not isinstance(over, dict):
            raise ConfigError("config file must hold a JSON object")
        d.update({k.replace("-", "_"): v for k, v in over.items()})
    out = d.get("out") or os.environ.get(OUT_ENV) or "."
    workers = d.get("workers") or (os.cpu_count() or 1)
    opts = {k: v for k, v in d.items() if k not in _COMMON}
    return RunConfig(d["subcommand"], d.get("model"), int(d.get("seed", 0)), int(d.get("budget", DEFAULT_BUDGET)),
                     int(d.get("samples", 1_000_000)), str(out), int(workers), bool(d.get("svg")), opts)


def run(cfg: RunConfig) -> tuple[int, dict | None]:
    out = Outputs(cfg)
    t0 = time.time()
    try:
        params, results, passed, prov = COMMANDS[cfg.subcommand](cfg, out)
    except BudgetExceeded as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET, None
    except ArithmeticError as e:
        print(f"certification failure: {e}", file=sys.stderr)
        return EXIT_CERT, None
    except (ConfigError, FileNotFoundError, ValueError) as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG, None
    prov = dict(prov)
    prov.update({"seed": cfg.seed, "workers": cfg.workers, "budget": cfg.budget, "samples": cfg.samples})
    r = rep.build_report(cfg.subcommand, params, results, passed, prov)
    r["metadata"]["runtime_s"] = round(time.time() - t0, 3)
    out.write(r)
    if passed is False:
        return EXIT_CERT, r
    return EXIT_OK, r


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
    except ConfigError as e:
        print(f"invalid configuration: {e}", file=sys.stderr)
        return EXIT_CONFIG
    code, r = run(cfg)
    if r is not None:
        verdict = {None: "done", True: "PASS", False: "FAIL"}[r["pass"]]
        print(f"{cfg.subcommand}: {verdict} -> {Path(cfg.out) / (cfg.subcommand + '.json')}")
    return code


if __name__ == "__main__":
    sys.exit(main())
