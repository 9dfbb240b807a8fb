#!/usr/bin/env python3
"""Activity factor of the secondary network vs the restriction threshold.

Writes one CSV row per (rho, M_p, M_s) combination, mirroring the
threshold-sweep figures: directional sensing lifts the activity factor
until it saturates at 1 once the restriction stops binding.
"""

import argparse
import csv
import sys

import numpy as np

from cognet.access import activity_factor_sectorized
from cognet.scenario import default_scenario


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="af_vs_threshold.csv")
    ap.add_argument("--lo", type=float, default=1e-13)
    ap.add_argument("--hi", type=float, default=1e-5)
    ap.add_argument("--points", type=int, default=49)
    ap.add_argument("--m-values", type=int, nargs="+", default=[1, 4])
    ap.add_argument("--region-radius", type=float, default=4000.0)
    args = ap.parse_args()

    rhos = np.logspace(np.log10(args.lo), np.log10(args.hi), args.points)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rho_w", "m_p", "m_s", "af"])
        for m_p in args.m_values:
            for m_s in args.m_values:
                sc0 = default_scenario().with_ula(m_p, m_s)
                for rho in rhos:
                    af = activity_factor_sectorized(sc0.with_rho(float(rho)))
                    w.writerow([f"{rho:.17g}", m_p, m_s, f"{af:.17g}"])
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
