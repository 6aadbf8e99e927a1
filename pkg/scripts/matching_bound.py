"""Perfect-matching frequency in m-by-m random bipartite graphs against 1 - delta**(m/4)."""

import argparse

from seedfix.probabilistic import matching_probability_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--m", type=int, nargs="+", default=[4, 8, 16, 32])
    ap.add_argument("--delta", type=float, nargs="+", default=[0.05, 0.2, 0.4, 0.6])
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    print("m,delta,frequency,std_error,bound,hypothesis_holds")
    for m in a.m:
        for d in a.delta:
            e = matching_probability_experiment(m, d, a.trials, a.seed)
            print(f"{m},{d},{e.frequency:.4f},{e.std_error:.4f},{e.bound:.4f},{int(e.hypothesis_holds)}")


if __name__ == "__main__":
    main()
