#!/usr/bin/env python3
"""Run the two exhaustive worst-case sweeps and print their reports.

Two-agent sweep: m <= 6, level pairs (2,1) (3,1) (3,2) (4,3) (5,4) (6,5).
Three-agent sweep: m <= 5, level pairs (2,1) (3,1) (3,2) (4,3).

Each sweep writes one CSV row per enumerated normalized ternary instance;
reruns are byte-identical regardless of --jobs.
"""

import argparse
import time
from pathlib import Path

from ef1price.generators import EnumerationParams
from ef1price.oracle import decimal6, worst_case_search

SWEEPS = {
    "n2": EnumerationParams(
        n=2, m_max=6, level_pairs=((2, 1), (3, 1), (3, 2), (4, 3), (5, 4), (6, 5))
    ),
    "n3": EnumerationParams(n=3, m_max=5, level_pairs=((2, 1), (3, 1), (3, 2), (4, 3))),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out-dir", default="sweeps")
    parser.add_argument("--only", choices=sorted(SWEEPS), help="run a single sweep")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    for name, params in SWEEPS.items():
        if args.only and name != args.only:
            continue
        path = out_dir / f"sweep_{name}.csv"
        start = time.perf_counter()
        report = worst_case_search(params, csv_path=str(path), jobs=args.jobs)
        elapsed = time.perf_counter() - start
        ratios = ", ".join(f"{alg}={r} ({decimal6(r)})" for alg, r in report.alg_worst_ratios)
        print(f"[{name}] {report.instances_checked} instances in {elapsed:.1f}s -> {path}")
        print(
            f"[{name}] worst price {report.worst_price} ({decimal6(report.worst_price)}) "
            f"at instance #{report.worst_instance_id}; worst algorithm ratios: {ratios}"
        )
        print(f"[{name}] worst instance rows: "
              + "; ".join(" ".join(str(v) for v in row) for row in report.worst_instance.values))


if __name__ == "__main__":
    main()
