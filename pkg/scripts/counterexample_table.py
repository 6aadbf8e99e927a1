"""Exact winning-bracket counts for every player on each hard instance.

The target's count is 0 by construction; the rest of the row shows who can win.
"""

import argparse

from seedfix.counting import count_valid_winning_brackets
from seedfix.structural import MIN_N, Counterexample, classify_player, make_counterexample


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, nargs="+", default=[8, 16])
    a = ap.parse_args()
    for kind in Counterexample:
        for n in a.n:
            if n < MIN_N[kind]:
                continue
            inst = make_counterexample(kind, n)
            prof = classify_player(inst.graph, inst.target)
            counts = count_valid_winning_brackets(inst)
            flags = "".join(c for c, on in zip("KSU", (prof.is_king, prof.is_superking, prof.is_ultraking)) if on)
            print(f"{kind.value:18s} n={n:<3d} s={inst.seeds.s:<2d} outdeg={prof.outdegree:<3d} [{flags or '-'}] "
                  f"target={counts[inst.target]} total={counts.total}")


if __name__ == "__main__":
    main()
