"""Success rate of the randomized seeded fixer across n, s and the random model.

    python scripts/seeded_success_sweep.py --n 16 32 64 --trials 50 --out sweep.csv
"""

from __future__ import annotations

import argparse
import csv
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from seedfix.probabilistic import CSV_HEADER, run_trial


@dataclass
class SweepConfig:
    sizes: list[int] = field(default_factory=lambda: [16, 32, 64])
    model: str = "UNIFORM"
    p: float = 0.5
    trials: int = 50
    seed: int = 0
    restarts: int = 200
    workers: int | None = None


def _job(args):
    return run_trial(*args)


def sweep(cfg: SweepConfig):
    jobs = []
    for n in cfg.sizes:
        s_values = [0] + [1 << k for k in range(1, n.bit_length() - 1)]
        for s in s_values:
            jobs += [(n, s, cfg.model, cfg.p, t, cfg.seed, cfg.restarts) for t in range(cfg.trials)]
    with ProcessPoolExecutor(cfg.workers) as pool:
        for rows in pool.map(_job, jobs, chunksize=4):
            yield from rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[16, 32, 64])
    ap.add_argument("--model", default="UNIFORM")
    ap.add_argument("--p", type=float, default=0.5)
    ap.add_argument("--trials", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--out")
    a = ap.parse_args()
    cfg = SweepConfig(a.n, a.model.upper(), a.p, a.trials, a.seed, workers=a.workers)
    tally = defaultdict(lambda: [0, 0])
    out = open(a.out, "w", newline="") if a.out else None
    writer = csv.writer(out, lineterminator="\n") if out else None
    if writer:
        writer.writerow(CSV_HEADER)
    for row in sweep(cfg):
        if writer:
            writer.writerow(row)
        cell = tally[row[0], row[1]]
        cell[0] += row[6]
        cell[1] += 1
    if out:
        out.close()
    print("n,s,success_rate,pairs")
    for (n, s), (hits, total) in sorted(tally.items()):
        print(f"{n},{s},{hits / total:.4f},{total}")


if __name__ == "__main__":
    main()
