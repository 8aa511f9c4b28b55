#!/usr/bin/env python3
"""Empirical Fourier decay exponent of the conductance measure for several t."""

import argparse

from artifact.fourier import decay_profile
from artifact.models.lyons import sample_nu


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ts", default="0.1,0.3,0.5,0.7,0.9")
    ap.add_argument("--samples", type=int, default=1_000_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    a = ap.parse_args()
    print("t      beta    band")
    for t in (float(v) for v in a.ts.split(",")):
        nu = sample_nu(t, a.samples, a.seed, workers=a.workers)
        r = decay_profile(nu, xi_min=16, xi_max=2 ** 20, seed=a.seed)
        print(f"{t:.2f}  {r.beta_fit:.3f}  ({r.beta_band[0]:.3f}, {r.beta_band[1]:.3f})")


if __name__ == "__main__":
    main()
