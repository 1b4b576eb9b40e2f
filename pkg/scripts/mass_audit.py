"""Compare formula masses with sum of 1/|Aut| over traversed genera.

    python3 scripts/mass_audit.py --rank-max 5
"""
import argparse
from fractions import Fraction

from qflat.lattice import local_profile
from qflat.mass import mass_from_profile
from qflat.pipeline import RunConfig, enumerate_maximal, scan_ranks


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=Fraction, default=Fraction(1))
    ap.add_argument("--rank-max", type=int, default=5)
    a = ap.parse_args()

    bad = 0
    for n in scan_ranks(RunConfig(rank_max=a.rank_max, bound=a.bound)):
        res = enumerate_maximal(n, a.bound)
        for rec in res.genera:
            formula = mass_from_profile(local_profile(rec.representatives[0])).proper_mass / 2
            found = sum(Fraction(1, x) for x in rec.aut_orders)
            if formula != found:
                bad += 1
                print(f"rank {n} det {rec.representatives[0].det_H}: formula {formula}, found {found}")
        print(f"rank {n}: {len(res.genera)} genera checked")
    print("all masses agree" if not bad else f"{bad} mismatches")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
