"""Class number distribution of the genera visited in one rank.

Every genus whose formula mass allows class number <= B is traversed, so the
census lists class numbers of all of them, not only those with h <= B.

    python3 scripts/genus_census.py --rank 5 --bound 1
"""
import argparse
from collections import Counter
from fractions import Fraction

from qflat.pipeline import enumerate_maximal


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--rank", type=int, required=True)
    ap.add_argument("--bound", type=Fraction, default=Fraction(1))
    a = ap.parse_args()

    res = enumerate_maximal(a.rank, a.bound)
    hist = Counter(rec.class_number for rec in res.genera)
    print(f"rank {a.rank}: {len(res.genera)} genera traversed, {len(res)} forms with h <= {a.bound}")
    print("h  genera")
    for h in sorted(hist):
        print(f"{h:<3}{hist[h]}")
    print()
    print("det_H  h  |Aut| of representatives")
    for rec in res.genera:
        print(f"{rec.representatives[0].det_H:<6} {rec.class_number:<2} {list(rec.aut_orders)}")


if __name__ == "__main__":
    main()
