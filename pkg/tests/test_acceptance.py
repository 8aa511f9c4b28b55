"""Acceptance criteria 1-13, each reported as one PASS/FAIL line at the end of the run."""

import json
import math
import time

import numpy as np
import pytest

from artifact import cli
from artifact.models.affine import equal_slope_model
from artifact.nonconc import mnl_statistic, qnl_statistic, uni_margin
from artifact.report import deterministic_view, dumps

_RUNS: dict = {}


@pytest.fixture(scope="module")
def runner(tmp_path_factory):
    base = tmp_path_factory.mktemp("acceptance")

    def go(*args):
        if args not in _RUNS:
            out = base / f"run{len(_RUNS)}"
            t0 = time.perf_counter()
            code = cli.main(list(args) + ["--out", str(out), "--seed", "0", "--workers", "2"])
            dt = time.perf_counter() - t0
            rep = json.loads((out / f"{args[0]}.json").read_text())
            _RUNS[args] = (code, rep, dt)
        return _RUNS[args]
    return go


def test_c01_lorenz(runner, record):
    code, rep, dt = runner("lorenz")
    r = rep["results"]
    want = {"x0": -0.07429, "g0_prime_x0": 0.51748, "x1": 0.07429, "g1_prime_x1": 0.51748,
            "product": 0.26779, "x10": 0.03259, "abs_defect": 1.23572}
    err = max(abs(r[k] - v) for k, v in want.items())
    derr = abs(r["g10_prime_x10"] - 0.077825)
    ok = code == 0 and err <= 1e-4 and derr <= 1e-5 and dt < 1
    record(1, ok, f"max err {err:.2e}, derivative err {derr:.2e}, {dt:.2f}s")
    assert ok


def test_c02_lyons_Q(runner, record):
    code, rep, dt = runner("lyons", "--task", "Q")
    q = rep["results"]["Q"]
    ok = code == 0 and q["max_route_diff"] <= 1e-10 and q["min_abs_Q"] > 0 and dt < 1
    record(2, ok, f"route diff {q['max_route_diff']:.1e}, min|Q| {q['min_abs_Q']:.4g}, {dt:.2f}s")
    assert ok


def test_c03_affine_controls(runner, record):
    t0 = time.perf_counter()
    m = equal_slope_model(0.3, 2)
    qvals = [qnl_statistic(m, n, iv).value for n in range(1, 7)
             for iv in ((-1e-12, 1e-12), (0.0, 0.5), (-0.3, 0.01))]
    c0 = uni_margin(m, 2).c0
    rng = np.random.default_rng(0)
    mnl = mnl_statistic(m.ifs, (0, 0, 1), (0, 1), 0.5, rng.uniform(0, 1, 1000))
    code, rep, _ = runner("qnl", "--model", "affine")
    dt = time.perf_counter() - t0
    ok = all(v == 1.0 for v in qvals) and c0 == 0.0 and mnl.atom and code == 2 and dt < 10
    record(3, ok, f"qnl=1 on {len(qvals)} cases, c0={c0}, atom={mnl.atom}, cli exit {code}, {dt:.2f}s")
    assert ok


def test_c04_tree_lemma(runner, record):
    code, rep, dt = runner("tree")
    r = rep["results"]
    ok = code == 0 and r["rows"] == 12 * 3 * 20 and r["failures"] == 0 and dt < 300
    record(4, ok, f"{r['rows']} rows, {r['failures']} failures, max L/bound {r['max_L_over_bound']:.3f}, {dt:.1f}s")
    assert ok


def test_c05_moments(runner, record):
    code, rep, dt = runner("moments")
    n0 = rep["results"]["n0"]
    ok = code == 0 and all(v is not None for v in n0.values()) and dt < 60
    record(5, ok, f"n0 {n0}, {dt:.2f}s")
    assert ok


def test_c06_staircase_fixed_point(runner, record):
    code, rep, dt = runner("staircase")
    r = rep["results"]
    ok = (r["iterations"] <= 200 and r["final_residual"] <= 1e-3
          and 3 * r["frostman_epsilon"] <= r["delta"] < 1 and abs(r["zeta_at_delta_minus_1"]) <= 1e-10
          and r["max_abs_zeta0_minus_2"] <= 1e-12 and r["max_zeta1"] <= 0.6
          and r["fixed_point_pass"] and dt < 120)
    record(6, ok, f"residual {r['final_residual']:.2e} after {r['iterations']} it, delta {r['delta']:.6f}, "
                  f"max zeta(1) {r['max_zeta1']:.3f}, {dt:.1f}s")
    assert ok


def test_c07_mnl(runner, record):
    code, rep, dt = runner("staircase")
    m = rep["results"]["mnl"]
    ok = m["ks_to_uniform"] <= 0.05 and not m["atom"] and dt < 60
    record(7, ok, f"KS {m['ks_to_uniform']:.4f}")
    assert ok


def test_c08_mp_uni(runner, record):
    code, rep, dt = runner("mp", "--alphas", "0.1,0.3,0.5,0.7,0.9")
    sys_ = rep["results"]["systems"]
    worst = max(s["uni_diff"] for s in sys_)
    ok = code == 0 and len(sys_) == 5 and worst <= 1e-8 and all(s["uni"]["c0"] > 0 for s in sys_) and dt < 10
    record(8, ok, f"max |c0 - closed form| {worst:.1e}, {dt:.2f}s")
    assert ok


def test_c09_light_tail(runner, record):
    code, rep, dt = runner("lyons", "--task", "light-tail")
    lt = rep["results"]["light_tail"]
    ok = (code == 0 and lt["max_rel_diff_direct_vs_extrapolated"] <= 1e-8
          and lt["max_ratio_limit_error"] <= 1e-6 and dt < 1)
    record(9, ok, f"rel diff {lt['max_rel_diff_direct_vs_extrapolated']:.1e}, "
                  f"ratio err {lt['max_ratio_limit_error']:.1e}, {dt:.2f}s")
    assert ok


def test_c10_fourier_oracles(runner, record):
    _, u, du = runner("fourier", "--model", "uniform", "--xi-min", "4", "--xi-max", "4096")
    _, c, dc = runner("fourier", "--model", "cantor")
    b = u["results"]["beta_fit"]
    spread = c["results"]["window_sup_spread"]
    ok = abs(b - 1) <= 0.1 and spread <= 1e-10 and du + dc < 60
    record(10, ok, f"uniform beta {b:.4f}, Cantor window spread {spread:.1e}, {du + dc:.1f}s")
    assert ok


def test_c11_lyons_decay(runner, record):
    code, rep, dt = runner("lyons", "--task", "decay", "--samples", "1000000")
    d = rep["results"]["decay"]
    ok = code == 0 and d["beta_fit"] > 0.05 and d["beta_band"][0] > 0 and dt < 180
    record(11, ok, f"beta {d['beta_fit']:.3f} band ({d['beta_band'][0]:.3f}, {d['beta_band'][1]:.3f}), {dt:.1f}s")
    assert ok


def test_c12_qnl_fit(runner, record):
    code, rep, dt = runner("qnl", "--model", "lyons-sub")
    _, st, ds = runner("staircase")
    a, b = rep["results"], st["results"]["qnl"]

    def good(f):
        return 0 < f["theta"] < 1 and 0 < f["rho"] < 1 and f["holdout_residual"] <= 0.25
    ok = code == 0 and good(a) and good(b) and dt + ds < 600
    record(12, ok, f"lyons-sub theta {a['theta']:.3f} rho {a['rho']:.1e} holdout {a['holdout_residual']:.1%}; "
                   f"staircase theta {b['theta']:.3f} rho {b['rho']:.3f} holdout {b['holdout_residual']:.1%}")
    assert ok


def test_c13_determinism(tmp_path, record):
    assert _RUNS, "criterion commands must run first"
    diffs = []
    for args, (_, rep, _) in _RUNS.items():
        out = tmp_path / str(abs(hash(args)))
        cli.main(list(args) + ["--out", str(out), "--seed", "0", "--workers", "2"])
        again = json.loads((out / f"{args[0]}.json").read_text())
        if dumps(deterministic_view(again)) != dumps(deterministic_view(rep)):
            diffs.append(" ".join(args))
    ok = not diffs
    record(13, ok, f"{len(_RUNS)} commands rerun, mismatches: {diffs or 'none'}")
    assert ok
