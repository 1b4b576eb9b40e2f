"""Full scan for class number <= B; writes per-rank tables and genus records.

    python3 scripts/run_scan.py --bound 1 --out results/
"""
import argparse
import json
import logging
import time
from fractions import Fraction
from pathlib import Path

from qflat.pipeline import RunConfig, enumerate_maximal, genus_records_json, render_table, scan_ranks, scan_summary


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--bound", type=Fraction, default=Fraction(1))
    ap.add_argument("--rank-min", type=int, default=3)
    ap.add_argument("--rank-max", type=int)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", default="results")
    a = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    cfg = RunConfig(rank_min=a.rank_min, rank_max=a.rank_max, bound=a.bound, jobs=a.jobs)
    out = Path(a.out)
    out.mkdir(parents=True, exist_ok=True)
    results, timing = [], {}
    for n in scan_ranks(cfg):
        t = time.time()
        res = enumerate_maximal(n, a.bound, cfg)
        timing[n] = round(time.time() - t, 1)
        results.append(res)
        logging.info("rank %d: %d forms from %d genera in %.1fs", n, len(res), len(res.genera), timing[n])
        if res.entries:
            (out / f"rank{n}.txt").write_text(render_table(res))
            (out / f"rank{n}.json").write_text(render_table(res, "json"))
        (out / f"genera{n}.json").write_text(json.dumps(genus_records_json(res)))
    (out / "summary.txt").write_text(scan_summary(results))
    (out / "timing.json").write_text(json.dumps(timing, indent=1))
    print(scan_summary(results), end="")


if __name__ == "__main__":
    main()
