"""Tournament graphs, seeds, brackets, bracket validity and match replay.

Players and leaf positions are 0-indexed throughout.  A level-k section of a
bracket of size n is one of the 2**k contiguous blocks of n / 2**k leaves;
section ``w`` (0-indexed) covers positions ``w * n // 2**k`` up to (but not
including) ``(w + 1) * n // 2**k``.  :func:`section_range` is the only place
that formula lives.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np


class TfpError(ValueError):
    """Base class for invalid inputs to the library."""


class PreconditionError(TfpError):
    """An algorithm was called on an input outside its guarantee."""


class SizeCapError(TfpError):
    """An exponential-time routine was asked for a size above its cap."""


def is_power_of_two(k: int) -> bool:
    return k >= 1 and k & (k - 1) == 0


def log2(n: int) -> int:
    if not is_power_of_two(n):
        raise TfpError(f"{n} is not a power of two")
    return n.bit_length() - 1


def section_range(n: int, level: int, index: int) -> range:
    """Leaf positions of the level-``level`` section number ``index``."""
    width = n >> level
    return range(index * width, (index + 1) * width)


@dataclass(frozen=True, eq=False)
class TournamentGraph:
    """Complete pairwise outcomes: ``adj[i, j]`` is true iff i beats j."""

    adj: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adj, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1] or adj.shape[0] < 1:
            raise TfpError("adjacency must be a non-empty square matrix")
        if adj.diagonal().any():
            raise TfpError("a player cannot beat itself")
        off = ~np.eye(adj.shape[0], dtype=bool)
        if not np.array_equal((adj ^ adj.T)[off], np.ones(off.sum(), dtype=bool)):
            raise TfpError("exactly one of beats(i, j), beats(j, i) must hold for i != j")
        adj.flags.writeable = False
        object.__setattr__(self, "adj", adj)

    @cached_property
    def table(self) -> list[list[bool]]:
        """Plain nested lists; much faster than ndarray indexing in hot loops."""
        return self.adj.tolist()

    @cached_property
    def out_masks(self) -> tuple[int, ...]:
        """Bitmask of the players each player beats."""
        return tuple(sum(1 << j for j, w in enumerate(row) if w) for row in self.table)

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def beats(self, i: int, j: int) -> bool:
        return self.table[i][j]

    def winner(self, i: int, j: int) -> int:
        return i if self.table[i][j] else j

    def outdegree(self, i: int) -> int:
        return int(self.adj[i].sum())

    def out_neighbours(self, i: int) -> list[int]:
        """Players that i beats."""
        return [int(j) for j in np.flatnonzero(self.adj[i])]

    def induced(self, players: Sequence[int]) -> "TournamentGraph":
        """Subtournament on ``players``; local id ``k`` is ``players[k]``."""
        idx = np.asarray(players, dtype=int)
        return TournamentGraph(self.adj[np.ix_(idx, idx)])

    def __eq__(self, other):
        return isinstance(other, TournamentGraph) and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash(self.adj.tobytes())

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "TournamentGraph":
        """Transitive tournament where earlier players in ``order`` win."""
        n = len(order)
        rank = np.empty(n, dtype=int)
        rank[list(order)] = np.arange(n)
        return cls(rank[:, None] < rank[None, :])

    @classmethod
    def from_function(cls, n: int, beats: Callable[[int, int], bool]) -> "TournamentGraph":
        """Build from a predicate consulted once per pair i < j."""
        adj = np.zeros((n, n), dtype=bool)
        for i in range(n):
            for j in range(i + 1, n):
                if beats(i, j):
                    adj[i, j] = True
                else:
                    adj[j, i] = True
        return cls(adj)


@dataclass(frozen=True)
class SeedAssignment:
    """``seeded[r - 1]`` holds seed r.  An empty tuple is the non-seeded setting."""

    seeded: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "seeded", tuple(int(p) for p in self.seeded))
        if len(set(self.seeded)) != len(self.seeded):
            raise TfpError("seeded players must be distinct")
        if self.s and (self.s < 2 or not is_power_of_two(self.s)):
            raise TfpError(f"seed count must be 0 or a power of two >= 2, got {self.s}")

    @property
    def s(self) -> int:
        return len(self.seeded)

    def rank(self, player: int) -> int | None:
        try:
            return self.seeded.index(player) + 1
        except ValueError:
            return None

    def top(self, ell: int) -> tuple[int, ...]:
        return self.seeded[:ell]

    def check(self, n: int) -> None:
        if any(not 0 <= p < n for p in self.seeded):
            raise TfpError("seeded player out of range")
        if self.s and self.s > n // 2:
            raise TfpError(f"seed count {self.s} exceeds n/2 = {n // 2}")

    def extended(self, n: int, exclude: Iterable[int] = ()) -> "SeedAssignment":
        """Add fresh lowest ranks until n/2 players are seeded.

        New ranks go to the lowest-id unseeded players, skipping ``exclude``
        while possible.  Any bracket valid for the result is valid for self.
        """
        want = n // 2
        if self.s >= want:
            return self
        taken = set(self.seeded)
        skip = set(exclude)
        pool = [p for p in range(n) if p not in taken and p not in skip]
        pool += [p for p in range(n) if p not in taken and p in skip]
        return SeedAssignment(self.seeded + tuple(pool[: want - self.s]))


@dataclass(frozen=True)
class Bracket:
    """Leaf order of a balanced match tree; leaves 2i and 2i+1 meet in round 1."""

    leaves: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "leaves", tuple(int(p) for p in self.leaves))
        if not is_power_of_two(len(self.leaves)):
            raise TfpError("bracket size must be a power of two")
        if len(set(self.leaves)) != len(self.leaves):
            raise TfpError("bracket repeats a player")

    @property
    def n(self) -> int:
        return len(self.leaves)

    def position(self, player: int) -> int:
        return self.leaves.index(player)


@dataclass(frozen=True)
class TfpInstance:
    graph: TournamentGraph
    seeds: SeedAssignment
    target: int

    def __post_init__(self):
        n = self.graph.n
        if not is_power_of_two(n):
            raise TfpError(f"player count {n} is not a power of two")
        if not 0 <= self.target < n:
            raise TfpError("target out of range")
        self.seeds.check(n)

    @property
    def n(self) -> int:
        return self.graph.n


@dataclass(frozen=True)
class Matching:
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        lefts = [a for a, _ in self.pairs]
        rights = [b for _, b in self.pairs]
        if len(set(lefts)) != len(lefts) or len(set(rights)) != len(rights):
            raise TfpError("matching repeats a vertex")

    def __len__(self):
        return len(self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


@dataclass(frozen=True)
class MatchLog:
    """``rounds[r]`` lists the (player, player, winner) triples of round r + 1."""

    rounds: tuple[tuple[tuple[int, int, int], ...], ...]


def is_valid_bracket(bracket: Bracket, seeds: SeedAssignment) -> bool:
    """Every level-log(ell) section holds exactly one of the top ell seeds."""
    n = bracket.n
    if seeds.s and seeds.s > n:
        raise TfpError("seed assignment does not fit the bracket size")
    pos = {p: i for i, p in enumerate(bracket.leaves)}
    try:
        seed_pos = [pos[p] for p in seeds.seeded]
    except KeyError:
        raise TfpError("seeded player missing from bracket") from None
    ell = 2
    while ell <= seeds.s:
        width = n // ell
        sections = {p // width for p in seed_pos[:ell]}
        if len(sections) != ell:
            return False
        ell *= 2
    return True


def replay_bracket(bracket: Bracket, graph: TournamentGraph) -> tuple[int, MatchLog]:
    if bracket.n != graph.n:
        raise TfpError("bracket and graph sizes differ")
    alive = list(bracket.leaves)
    rounds = []
    while len(alive) > 1:
        played = tuple((a, b, graph.winner(a, b)) for a, b in zip(alive[::2], alive[1::2]))
        rounds.append(played)
        alive = [w for _, _, w in played]
    return alive[0], MatchLog(tuple(rounds))


def canonicalize(bracket: Bracket) -> Bracket:
    """Reorder children so the left subtree always holds the smaller minimum id."""

    def walk(leaves):
        if len(leaves) == 1:
            return leaves
        half = len(leaves) // 2
        left, right = walk(leaves[:half]), walk(leaves[half:])
        return left + right if min(left) < min(right) else right + left

    return Bracket(walk(bracket.leaves))


def swap_children(bracket: Bracket, level: int, index: int) -> Bracket:
    """Swap the two halves of the level-``level`` section number ``index``."""
    span = section_range(bracket.n, level, index)
    leaves = list(bracket.leaves)
    mid = (span.start + span.stop) // 2
    leaves[span.start:span.stop] = leaves[mid:span.stop] + leaves[span.start:mid]
    return Bracket(tuple(leaves))


def _seed_tier(rank: int) -> int:
    # 1 -> 0, 2 -> 1, 3..4 -> 2, 5..8 -> 3, ...
    return (rank - 1).bit_length()


def _place(players, ranked, depth, rng):
    """Split ``ranked`` (sorted (rank, player) pairs) and unseeded ``players``."""
    size = len(players) + len(ranked)
    if size == 1:
        return [ranked[0][1]] if ranked else list(players)
    if rng is None:
        left_r, right_r = ranked[0::2], ranked[1::2]
    else:
        groups: dict[int, list] = {}
        for item in ranked:
            groups.setdefault(max(_seed_tier(item[0]), depth + 1), []).append(item)
        left_r, right_r = [], []
        for tier in sorted(groups):
            group = groups[tier]
            rng.shuffle(group)
            left_r += group[: len(group) // 2]
            right_r += group[len(group) // 2:]
        left_r.sort()
        right_r.sort()
    half = size // 2
    cut = half - len(left_r)
    if cut < 0 or len(right_r) > half:
        raise TfpError("more seeds than leaf positions")
    left = _place(players[:cut], left_r, depth + 1, rng)
    right = _place(players[cut:], right_r, depth + 1, rng)
    if rng is not None and rng.random() < 0.5:
        left, right = right, left
    return left + right


def any_valid_bracket(
    players: Sequence[int], seeds: SeedAssignment, rng: random.Random | None = None
) -> Bracket:
    """A valid bracket over ``players``.

    Without ``rng`` the seed ranks are split alternately (even positions of the
    sorted rank list to the left half) and the unseeded fill in ascending id.
    With ``rng`` a random valid split is drawn at every node (seeds shuffled
    within their tier, children swapped at random), so every valid leaf order
    can come out.  ``seeds`` may seed every player here, which
    is how units of a pre-paired first round are arranged.
    """
    players = list(players)
    if not is_power_of_two(len(players)):
        raise TfpError("player count must be a power of two")
    present = set(players)
    missing = [p for p in seeds.seeded if p not in present]
    if missing:
        raise TfpError(f"seeded players {missing} are not in the player set")
    seeded = set(seeds.seeded)
    unseeded = sorted(p for p in players if p not in seeded)
    if rng is not None:
        rng.shuffle(unseeded)
    ranked = [(r + 1, p) for r, p in enumerate(seeds.seeded)]
    return Bracket(tuple(_place(unseeded, ranked, 0, rng)))


def assemble_rounds(graph: TournamentGraph, rounds: Sequence[Sequence[tuple[int, int]]]) -> Bracket:
    """Turn round-by-round pairings into a leaf order.

    Each survivor stands for the subtree it won; pairing two survivors
    concatenates their subtrees.
    """
    subtree: dict[int, tuple[int, ...]] = {}
    for a, b in rounds[0]:
        subtree[a], subtree[b] = (a,), (b,)
    for pairs in rounds:
        merged = {}
        for a, b in pairs:
            merged[graph.winner(a, b)] = subtree[a] + subtree[b]
        subtree = merged
    if len(subtree) != 1:
        raise AssertionError("rounds do not end in a single winner")
    (leaves,) = subtree.values()
    return Bracket(leaves)


def max_bipartite_matching(
    left: Iterable[int], right: Iterable[int], edge: Callable[[int, int], bool]
) -> Matching:
    """Maximum-cardinality matching by augmenting paths (Kuhn).

    Vertices are scanned in ascending id, so the result is deterministic.
    """
    left = sorted(left)
    right = sorted(right)
    adj = {a: [b for b in right if edge(a, b)] for a in left}
    match_right: dict[int, int] = {}

    def augment(a, seen):
        for b in adj[a]:
            if b in seen:
                continue
            seen.add(b)
            if b not in match_right or augment(match_right[b], seen):
                match_right[b] = a
                return True
        return False

    for a in left:
        augment(a, set())
    return Matching(frozenset((a, b) for b, a in match_right.items()))


def iter_pairs(seq: Sequence[int]) -> Iterator[tuple[int, int]]:
    it = iter(seq)
    return zip(it, it)
