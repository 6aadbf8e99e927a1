"""Random tournaments and the randomized seeded fixer.

The seeded fixer first fixes the tournament among the unseeded players (plus
x when x is seeded), puts that bracket on the odd leaf positions, and then
drops the seeds block by block into the even positions so that every seed
loses its first match.  Block k holds seeds 2**(k-1)+1 .. 2**k (seeds 1 and 2
for k = 1) and is matched to the level-k sections that no seed of rank at
most 2**k occupies yet.

Randomness: graphs are drawn with numpy's PCG64 generator; trial t of an
experiment with base seed S uses :func:`trial_seed` (S, t), a pure function,
so trials can run in any order or in parallel.
"""

from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .core import (
    Bracket,
    SeedAssignment,
    TfpError,
    TfpInstance,
    TournamentGraph,
    is_power_of_two,
    is_valid_bracket,
    log2,
    max_bipartite_matching,
    replay_bracket,
    section_range,
)
from .counting import extract_winning_bracket
from .structural import classify_player

DEFAULT_RESTARTS = 200


class Model(str, enum.Enum):
    GENERALIZED = "GENERALIZED"
    CONDORCET = "CONDORCET"
    UNIFORM = "UNIFORM"


@dataclass(frozen=True)
class RandomModelConfig:
    """``probs[i][j]`` is the chance that i beats j (GENERALIZED only).

    CONDORCET: the lower id wins each match with probability 1 - p.
    """

    model: Model
    n: int
    p: float = 0.5
    probs: np.ndarray | None = field(default=None, compare=False)
    rng_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "model", Model(self.model))
        if self.n < 1:
            raise TfpError("n must be positive")
        if not 0 <= self.p <= 0.5:
            raise TfpError(f"p must lie in [0, 1/2], got {self.p}")
        if self.model is Model.GENERALIZED:
            if self.probs is None:
                raise TfpError("GENERALIZED needs a probability matrix")
            probs = np.asarray(self.probs, dtype=float)
            if probs.shape != (self.n, self.n):
                raise TfpError("probability matrix has the wrong shape")
            off = ~np.eye(self.n, dtype=bool)
            if not np.allclose((probs + probs.T)[off], 1.0):
                raise TfpError("p_ij + p_ji must equal 1")
            if (probs[off] < self.p - 1e-12).any() or (probs[off] > 1 - self.p + 1e-12).any():
                raise TfpError("some p_ij falls outside [p, 1 - p]")
            object.__setattr__(self, "probs", probs)
        elif self.probs is not None:
            raise TfpError(f"{self.model.value} does not take a probability matrix")

    def win_probabilities(self) -> np.ndarray:
        if self.model is Model.GENERALIZED:
            return self.probs
        if self.model is Model.UNIFORM:
            return np.full((self.n, self.n), 0.5)
        i, j = np.indices((self.n, self.n))
        return np.where(i < j, 1 - self.p, self.p)


def sample_tournament(config: RandomModelConfig) -> TournamentGraph:
    """One independent coin per unordered pair, from PCG64 seeded by ``rng_seed``."""
    rng = np.random.default_rng(config.rng_seed)
    probs = config.win_probabilities()
    coins = rng.random((config.n, config.n))
    upper = np.triu(coins < probs, 1)
    lower = np.triu(~upper, 1).T
    return TournamentGraph(upper | lower)


def trial_seed(rng_seed: int, trial: int) -> int:
    state = np.random.SeedSequence([rng_seed, trial]).generate_state(2, np.uint32)
    return int(state[0]) << 32 | int(state[1])


# --- non-seeded subroutine -------------------------------------------------


def _verify_plain(graph, x, leaves):
    alive = list(leaves)
    while len(alive) > 1:
        alive = [graph.winner(a, b) for a, b in zip(alive[::2], alive[1::2])]
    if alive[0] != x:
        raise AssertionError("non-seeded bracket does not make the target win")
    return Bracket(tuple(leaves))


def _merge(subtree, pairs, t):
    merged = {}
    for a, b in pairs:
        merged[a if t[a][b] else b] = subtree[a] + subtree[b]
    return merged


def _king_rounds(graph, x, players):
    """Matching-based construction for a king of outdegree >= half the field.

    Returns None as soon as the king condition breaks in some round.
    """
    t = graph.table
    alive = list(players)
    subtree = {p: (p,) for p in alive}
    while len(alive) > 1:
        prof = classify_player(graph, x, alive)
        if not prof.is_king or prof.outdegree < len(alive) // 2:
            return None
        A = [p for p in alive if p != x and t[x][p]]
        B = [p for p in alive if p != x and not t[x][p]]
        M = dict(sorted(max_bipartite_matching(A, B, lambda a, b: t[a][b]).pairs))
        rem_a = [a for a in A if a not in M]
        matched_b = set(M.values())
        rem_b = [b for b in B if b not in matched_b]
        if not rem_a:
            return None
        pairs = list(M.items()) + [(x, rem_a.pop(0))]
        if len(rem_a) % 2:
            pairs.append((rem_a.pop(), rem_b.pop()))
        pairs += list(zip(rem_a[::2], rem_a[1::2])) + list(zip(rem_b[::2], rem_b[1::2]))
        subtree = _merge(subtree, pairs, t)
        alive = list(subtree)
    return subtree[x]


def _random_rounds(graph, x, players, rng):
    """One randomized attempt: x meets its least useful victim, A knocks out B."""
    t = graph.table
    alive = list(players)
    subtree = {p: (p,) for p in alive}
    while len(alive) > 1:
        A = [p for p in alive if p != x and t[x][p]]
        if not A:
            return None
        B = [p for p in alive if p != x and not t[x][p]]
        rng.shuffle(A)
        rng.shuffle(B)
        m = max_bipartite_matching(range(len(A)), range(len(B)), lambda i, j: t[A[i]][B[j]])
        M = {A[i]: B[j] for i, j in m.pairs}
        free = [a for a in A if a not in M]
        pool = free or A
        # sacrifice the victim that beats the fewest players still in B
        w = min(pool, key=lambda a: sum(t[a][b] for b in B))
        M.pop(w, None)
        matched_b = set(M.values())
        rem_a = [a for a in A if a != w and a not in M]
        rem_b = [b for b in B if b not in matched_b]
        pairs = list(M.items()) + [(x, w)]
        if len(rem_a) % 2:
            pairs.append((rem_a.pop(), rem_b.pop()))
        pairs += list(zip(rem_a[::2], rem_a[1::2])) + list(zip(rem_b[::2], rem_b[1::2]))
        subtree = _merge(subtree, pairs, t)
        alive = list(subtree)
    return subtree[x]


def fix_nonseeded(
    graph: TournamentGraph,
    x: int,
    players: Sequence[int] | None = None,
    rng: random.Random | None = None,
    restarts: int = DEFAULT_RESTARTS,
    exact_max_n: int = 16,
) -> Bracket | None:
    """A bracket (no seeds) over ``players`` that x wins, or None.

    Tries, in order: x beats everyone; the king-of-high-outdegree matching
    construction; ``restarts`` randomized round-by-round attempts; and for at
    most ``exact_max_n`` players the exact counting DP, which also settles
    impossibility.  The result covers ``players`` only and is always replayed
    before it is returned.
    """
    players = sorted(range(graph.n) if players is None else players)
    m = len(players)
    if not is_power_of_two(m):
        raise TfpError(f"{m} players is not a power of two")
    if x not in players:
        raise TfpError("target is not among the players")
    if m == 1:
        return Bracket((x,))
    t = graph.table
    others = [p for p in players if p != x]
    if all(t[x][p] for p in others):
        return _verify_plain(graph, x, [x] + others)

    leaves = _king_rounds(graph, x, players)
    if leaves is not None:
        return _verify_plain(graph, x, leaves)

    rng = rng or random.Random(0)
    for _ in range(restarts):
        leaves = _random_rounds(graph, x, players, rng)
        if leaves is not None:
            return _verify_plain(graph, x, leaves)

    if m <= exact_max_n:
        local = TfpInstance(graph.induced(players), SeedAssignment(), players.index(x))
        found = extract_winning_bracket(local)
        if found is not None:
            return _verify_plain(graph, x, [players[p] for p in found.leaves])
    return None


def fix_nonseeded_with_spare(
    graph: TournamentGraph,
    x: int,
    players: Sequence[int] | None = None,
    rng: random.Random | None = None,
    restarts: int = DEFAULT_RESTARTS,
    exact_max_n: int = 16,
) -> tuple[int, Bracket] | None:
    """Drop one player y that x beats so that x wins the remaining 2**r players.

    Candidates are tried by descending outdegree within ``players``.
    """
    players = sorted(range(graph.n) if players is None else players)
    if not is_power_of_two(len(players) - 1):
        raise TfpError("need 2**r + 1 players")
    t = graph.table
    outdeg = {p: sum(t[p][q] for q in players) for p in players}
    candidates = sorted((p for p in players if p != x and t[x][p]), key=lambda p: (-outdeg[p], p))
    for y in candidates:
        rest = [p for p in players if p != y]
        bracket = fix_nonseeded(graph, x, rest, rng, restarts, exact_max_n)
        if bracket is not None:
            return y, bracket
    return None


# --- seeded embedding ------------------------------------------------------


@dataclass(frozen=True)
class SeedBlockAssignment:
    """What happened while placing one block of seeds."""

    level: int
    block: tuple[int, ...]
    free_sections: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    matching: dict[int, int]
    opponents: dict[int, int]


def _block(k: int) -> range:
    return range(1, 3) if k == 1 else range((1 << (k - 1)) + 1, (1 << k) + 1)


def embed_seeds(
    instance: TfpInstance, inner: Bracket, spare: int | None = None
) -> tuple[Bracket | None, list[SeedBlockAssignment]]:
    """Extend ``inner`` (the bracket among the unseeded) to a full valid bracket.

    ``instance`` must seed exactly n/2 players.  If the target is unseeded,
    ``inner`` covers the unseeded players.  If it is seeded, ``inner`` covers
    the target plus every unseeded player except ``spare``, whom the target
    meets in round one.  Returns (None, stages so far) when some block has no
    perfect matching.
    """
    graph, x, n = instance.graph, instance.target, instance.n
    seeds = instance.seeds
    if seeds.s != n // 2:
        raise TfpError("embedding needs exactly n/2 seeds")
    if inner.n != n // 2:
        raise TfpError("inner bracket must have n/2 players")
    t = graph.table
    rank = {p: r + 1 for r, p in enumerate(seeds.seeded)}
    x_seeded = x in rank
    if x_seeded != (spare is not None):
        raise TfpError("a spare player is needed exactly when the target is seeded")

    slots: list[int | None] = [None] * n
    for j, p in enumerate(inner.leaves):
        slots[2 * j + 1] = p
    placed: dict[int, int] = {}  # seeded player -> slot
    if x_seeded:
        if spare in rank or not t[x][spare]:
            raise TfpError("spare must be unseeded and lose to the target")
        x_slot = inner.leaves.index(x) * 2 + 1
        slots[x_slot - 1] = spare
        placed[x] = x_slot

    stages = []
    rounds = log2(n)
    for k in range(1, rounds):
        width = n >> k
        block = [seeds.seeded[r - 1] for r in _block(k) if seeds.seeded[r - 1] != x]
        taken = {placed[p] // width for p in placed if rank[p] <= 1 << k}
        free = [w for w in range(1 << k) if w not in taken]
        if len(free) != len(block):
            raise AssertionError(f"level {k}: {len(free)} free sections for {len(block)} seeds")

        def opponents_in(w):
            span = section_range(n, k, w)
            found = []
            for pos in span[1::2]:
                v = slots[pos]
                if v is None or v in rank or slots[pos - 1] is not None:
                    continue
                if x_seeded and (pos >> (rounds - k - 1)) == (placed[x] >> (rounds - k - 1)):
                    continue
                found.append(v)
            return found

        cands = {w: opponents_in(w) for w in free}
        edges = tuple((u, w) for u in block for w in free if any(t[v][u] for v in cands[w]))
        edge_set = set(edges)
        matching = max_bipartite_matching(block, free, lambda u, w: (u, w) in edge_set).as_dict()
        opponents = {}
        if len(matching) == len(block):
            for u, w in matching.items():
                v = min(v for v in cands[w] if t[v][u])
                pos = inner.leaves.index(v) * 2 + 1
                slots[pos - 1] = u
                placed[u] = pos - 1
                opponents[u] = v
        stages.append(SeedBlockAssignment(k, tuple(block), tuple(free), edges, matching, opponents))
        if len(matching) < len(block):
            return None, stages

    if any(p is None for p in slots):
        raise AssertionError("unfilled leaf after placing every seed block")
    bracket = Bracket(tuple(slots))
    winner, log = replay_bracket(bracket, graph)
    if not is_valid_bracket(bracket, seeds) or winner != x:
        raise AssertionError("embedded bracket failed verification")
    survivors = [w for _, _, w in log.rounds[0]]
    if not x_seeded and tuple(survivors) != inner.leaves:
        raise AssertionError("round one did not reduce the bracket to the inner bracket")
    return bracket, stages


def fix_seeded_random(
    instance: TfpInstance,
    rng: random.Random | None = None,
    restarts: int = DEFAULT_RESTARTS,
    exact_max_n: int = 16,
) -> Bracket | None:
    """Randomized fixer for any seeding; fewer than n/2 seeds are first topped up."""
    graph, x, n = instance.graph, instance.target, instance.n
    if n == 2:
        return Bracket((x, 1 - x)) if graph.beats(x, 1 - x) else None
    seeds = instance.seeds.extended(n, exclude=(x,))
    full = TfpInstance(graph, seeds, x)
    unseeded = [p for p in range(n) if p not in seeds.seeded]
    if x not in seeds.seeded:
        inner = fix_nonseeded(graph, x, unseeded, rng, restarts, exact_max_n)
        if inner is None:
            return None
        bracket, _ = embed_seeds(full, inner)
    else:
        found = fix_nonseeded_with_spare(graph, x, unseeded + [x], rng, restarts, exact_max_n)
        if found is None:
            return None
        spare, inner = found
        bracket, _ = embed_seeds(full, inner, spare)
    if bracket is not None and not is_valid_bracket(bracket, instance.seeds):
        raise AssertionError("bracket valid for the extended seeds but not the original")
    return bracket


# --- perfect matchings in random bipartite graphs --------------------------


@dataclass(frozen=True)
class MatchingExperiment:
    m: int
    delta: float
    trials: int
    frequency: float
    bound: float
    hypothesis_holds: bool

    @property
    def std_error(self) -> float:
        f = self.frequency
        return math.sqrt(max(f * (1 - f), 0.0) / self.trials)


def matching_probability_experiment(m: int, delta: float, trials: int, rng_seed: int = 0) -> MatchingExperiment:
    """Share of m-by-m bipartite graphs (edge probability 1 - delta) with a perfect matching."""
    if m < 1 or trials < 1 or not 0 <= delta <= 1:
        raise TfpError("need m >= 1, trials >= 1 and delta in [0, 1]")
    rng = np.random.default_rng(rng_seed)
    hits = 0
    for _ in range(trials):
        edges = (rng.random((m, m)) >= delta).tolist()
        if all(any(row) for row in edges):
            size = len(max_bipartite_matching(range(m), range(m), lambda a, b: edges[a][b]))
            hits += size == m
    return MatchingExperiment(
        m=m,
        delta=delta,
        trials=trials,
        frequency=hits / trials,
        bound=1 - delta ** (m / 4),
        hypothesis_holds=delta ** (m / 8) <= 1 / m,
    )


# --- experiment trials -----------------------------------------------------

CSV_HEADER = ("n", "s", "model", "p", "trial", "target", "success", "seed")


def sample_instance(n: int, s: int, model: Model | str, p: float, seed: int) -> tuple[TournamentGraph, SeedAssignment]:
    """A tournament from ``model`` plus s seeds on a random set of players.

    GENERALIZED draws each p_ij uniformly from [p, 1 - p] first.
    """
    model = Model(model)
    probs = None
    if model is Model.GENERALIZED:
        gen = np.random.default_rng(seed ^ 0x5EED)
        upper = gen.uniform(p, 1 - p, size=(n, n))
        probs = np.triu(upper, 1) + np.triu(1 - upper, 1).T + 0.5 * np.eye(n)
    graph = sample_tournament(RandomModelConfig(model, n, p, probs, seed))
    order = np.random.default_rng(seed).permutation(n)
    seeds = SeedAssignment(tuple(int(q) for q in order[:s]))
    seeds.check(n)
    return graph, seeds


def run_trial(
    n: int,
    s: int,
    model: Model | str,
    p: float,
    trial: int,
    rng_seed: int,
    restarts: int = DEFAULT_RESTARTS,
    targets: Sequence[int] | None = None,
) -> list[tuple]:
    """Sample one tournament and try every target; one CSV row per target."""
    model = Model(model)
    seed = trial_seed(rng_seed, trial)
    graph, seeds = sample_instance(n, s, model, p, seed)
    rows = []
    for x in range(n) if targets is None else targets:
        inst = TfpInstance(graph, seeds, x)
        bracket = fix_seeded_random(inst, random.Random(seed * 1000003 + x), restarts)
        if bracket is not None:
            winner, _ = replay_bracket(bracket, graph)
            if winner != x or not is_valid_bracket(bracket, seeds):
                raise AssertionError("fixer reported an unverified success")
        rows.append((n, s, model.value, p, trial, x, int(bracket is not None), seed))
    return rows
