"""Exhaustive ground truth: enumerate every unordered valid bracket and replay it.

Deliberately unclever.  A bracket is counted once per unordered match tree;
the canonical representative puts the subtree with the smaller minimum id on
the left at every internal node.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .core import Bracket, SizeCapError, TfpInstance, is_valid_bracket, replay_bracket

DEFAULT_MAX_N = 8


@dataclass(frozen=True)
class WinnerCounts:
    counts: tuple[int, ...]

    def __getitem__(self, player: int) -> int:
        return self.counts[player]

    @property
    def total(self) -> int:
        return sum(self.counts)


def _halves(players):
    # the smallest id always goes left
    first, rest = players[0], players[1:]
    for combo in itertools.combinations(rest, len(players) // 2 - 1):
        left = (first,) + combo
        yield left, tuple(p for p in rest if p not in combo)


def canonical_trees(players: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    if len(players) == 1:
        yield players
        return
    for left, right in _halves(players):
        for lt in canonical_trees(left):
            for rt in canonical_trees(right):
                yield lt + rt


def _check_cap(n, max_n):
    if n > max_n:
        raise SizeCapError(f"oracle enumeration capped at n={max_n}, got n={n}")


def enumerate_valid_brackets(instance: TfpInstance, max_n: int = DEFAULT_MAX_N) -> Iterator[Bracket]:
    _check_cap(instance.n, max_n)
    for leaves in canonical_trees(tuple(range(instance.n))):
        bracket = Bracket(leaves)
        if is_valid_bracket(bracket, instance.seeds):
            yield bracket


def count_winners_bruteforce(instance: TfpInstance, max_n: int = DEFAULT_MAX_N) -> WinnerCounts:
    counts = [0] * instance.n
    for bracket in enumerate_valid_brackets(instance, max_n):
        winner, _ = replay_bracket(bracket, instance.graph)
        counts[winner] += 1
    return WinnerCounts(tuple(counts))


def is_knockout_winner_bruteforce(instance: TfpInstance, max_n: int = DEFAULT_MAX_N) -> bool:
    return count_winners_bruteforce(instance, max_n)[instance.target] > 0
