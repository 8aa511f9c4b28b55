#!/usr/bin/env python3
"""Bad-block mass against depth for the two-branch conductance sub-system and an affine control."""

import argparse

from artifact.models.affine import equal_slope_model
from artifact.models.lyons import sub_model
from artifact.sumproduct import PhaseParameters, census_table
from artifact.thermo import lyapunov


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", default="2,3,4,5")
    ap.add_argument("--epsilon0", type=float, default=0.5)
    ap.add_argument("--epsilon1", type=float, default=0.1)
    ap.add_argument("--gamma2", type=float, default=0.3)
    a = ap.parse_args()
    ns = [int(v) for v in a.ns.split(",")]
    for name, m in (("lyons-sub", sub_model(0.5)), ("affine", equal_slope_model(0.3, 2))):
        P = PhaseParameters(1e6, lyapunov(m).value, a.epsilon0, a.epsilon1, a.gamma2)
        for r in census_table(m, ns, P):
            print(f"{name:10s} n={r.n}  bad={r.bad_mass:.4f}  bound={r.threshold:.4f}  pass={r.passed}")


if __name__ == "__main__":
    main()
