"""Random instances that meet the preconditions of the structural fixers."""

from __future__ import annotations

import random

import numpy as np

from .core import SeedAssignment, TfpInstance, TournamentGraph, log2
from .structural import build_special_tournament


def random_adjacency(n: int, rng: random.Random) -> np.ndarray:
    upper = np.triu(np.array([[rng.random() < 0.5 for _ in range(n)] for _ in range(n)]), 1)
    lower = np.triu(~upper, 1).T
    return upper | lower


def set_winner(adj: np.ndarray, a: int, b: int) -> None:
    adj[a, b], adj[b, a] = True, False


def relabel(instance: TfpInstance, perm) -> TfpInstance:
    """Rename player p to ``perm[p]``."""
    perm = np.asarray(perm)
    inv = np.argsort(perm)
    adj = instance.graph.adj[np.ix_(inv, inv)]
    seeded = tuple(int(perm[p]) for p in instance.seeds.seeded)
    return TfpInstance(TournamentGraph(adj), SeedAssignment(seeded), int(perm[instance.target]))


def _with_out_set(n, x, a_size, rng):
    adj = random_adjacency(n, rng)
    others = [p for p in range(n) if p != x]
    rng.shuffle(others)
    A, B = others[:a_size], others[a_size:]
    for a in A:
        set_winner(adj, x, a)
    for b in B:
        set_winner(adj, b, x)
    return adj, A, B


def _cover(adj, A, B, need, rng):
    """Make every b in B lose to at least ``need`` members of A."""
    for b in B:
        beaters = [a for a in A if adj[a, b]]
        spare = [a for a in A if not adj[a, b]]
        rng.shuffle(spare)
        for a in spare[: max(0, need - len(beaters))]:
            set_winner(adj, a, b)


def random_king_instance(n: int, rng: random.Random) -> TfpInstance:
    """Seeded king with outdegree >= n/2 + 1, or the special outdegree-n/2 case."""
    if n >= 4 and rng.random() < 0.25:
        plan = ("x", rng.choice(("z", "y")))
        if rng.random() < 0.5:
            plan = plan[::-1]
        inst, _ = build_special_tournament(n, n // 2, plan, rng)
        perm = list(range(n))
        rng.shuffle(perm)
        return relabel(inst, perm)
    x = rng.randrange(n)
    adj, A, B = _with_out_set(n, x, rng.randint(n // 2 + 1, n - 1), rng)
    _cover(adj, A, B, 1, rng)
    other = rng.choice([p for p in range(n) if p != x])
    seeded = (x, other) if rng.random() < 0.5 else (other, x)
    return TfpInstance(TournamentGraph(adj), SeedAssignment(seeded), x)


def random_superking_instance(n: int, rng: random.Random) -> TfpInstance:
    """Superking with two seeds placed to hit every branch of the construction."""
    lg = log2(n)
    x = rng.randrange(n)
    a_size = rng.randint(lg, n - 1) if rng.random() < 0.5 else rng.randint(lg, max(lg, n // 4))
    adj, A, B = _with_out_set(n, x, a_size, rng)
    _cover(adj, A, B, lg, rng)
    mode = rng.choice(("x", "a", "bb", "any"))
    if mode == "x" or (mode == "a" and not A) or (mode == "bb" and len(B) < 2):
        seeded = (x, rng.choice([p for p in range(n) if p != x]))
    elif mode == "a":
        seeded = (rng.choice(A), rng.choice([p for p in range(n) if p != x]))
        if seeded[0] == seeded[1]:
            seeded = (seeded[0], x)
    elif mode == "bb":
        seeded = tuple(rng.sample(B, 2))
    else:
        seeded = tuple(rng.sample(range(n), 2))
    if rng.random() < 0.5:
        seeded = seeded[::-1]
    return TfpInstance(TournamentGraph(adj), SeedAssignment(seeded), x)


def random_ultraking_instance(n: int, rng: random.Random) -> TfpInstance:
    """Ultraking with a random seed count in {0, 2, 4, ..., n/2}."""
    x = rng.randrange(n)
    adj, A, B = _with_out_set(n, x, rng.randint(n // 2, n - 1), rng)
    _cover(adj, A, B, n // 2, rng)
    choices = [0] + [1 << k for k in range(1, log2(n))]
    s = rng.choice(choices)
    seeded = tuple(rng.sample(range(n), s))
    return TfpInstance(TournamentGraph(adj), SeedAssignment(seeded), x)
