#!/usr/bin/env python3
"""Iterate the staircase map from the uniform seed and report convergence and MNL."""

import argparse

from artifact.measures import make_rngs
from artifact.models import staircase as sc
from artifact.nonconc import mnl_statistic


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--M", type=int, default=4096)
    ap.add_argument("--iterations", type=int, default=200)
    ap.add_argument("--N", type=int, default=4)
    ap.add_argument("--samples", type=int, default=100_000)
    a = ap.parse_args()
    r = sc.psi_iterate(sc.FrostmanMeasure.uniform(a.M), a.iterations)
    for i, (res, d) in enumerate(zip(r.residual_trace, r.deltas), 1):
        print(f"iter {i:3d}  residual {res:.3e}  delta {d:.10f}")
    s = r.system
    xs = r.mu.sample(a.samples, make_rngs(0, 1)[0])
    m = mnl_statistic(s.ifs(), (0,) * a.N + (1,), (0,) * (a.N - 1) + (1,), 0.0, xs)
    print(f"zeta(delta)-1 = {s.zeta(s.delta) - 1:.2e}, max zeta(1) = {max(r.zeta1):.4f}")
    print(f"MNL N={a.N}: KS to uniform {m.ks_to_uniform:.4f}, atom={m.atom}")


if __name__ == "__main__":
    main()
