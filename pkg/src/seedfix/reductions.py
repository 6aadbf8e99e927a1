"""Seeded TFP instances built from non-seeded ones, preserving whether the target wins.

``reduce_to_seeded_constant`` adds gadget groups V_1..V_t of sizes n, 2n, ...,
2**(t-1) n.  Each group has an apex x_i (its lowest id) that beats the rest of
the group; every gadget player beats every original player except that the
target beats each apex.  ``reduce_to_seeded_half`` adds n players who lose
to every original player and seeds all of them.

Outcomes the constructions leave open are fixed so that the lower id wins,
unless an ``rng`` is passed to randomize them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .core import SeedAssignment, TfpError, TfpInstance, TournamentGraph, is_power_of_two, log2

ORIGINAL = "original"
GADGET = "gadget"
APEX = "apex"
PADDING = "padding"


@dataclass(frozen=True)
class ReductionOutput:
    """``provenance[p]`` is (role, group): group i >= 1 for gadget members and apexes."""

    instance: TfpInstance
    provenance: tuple[tuple[str, int], ...]
    source_n: int

    def members(self, role: str, group: int | None = None) -> list[int]:
        return [p for p, (r, g) in enumerate(self.provenance) if r == role and (group is None or g == group)]

    def group(self, i: int) -> list[int]:
        return [p for p, (r, g) in enumerate(self.provenance) if g == i and r in (GADGET, APEX)]


def _fill_free(adj, free, rng):
    """Orient every still-undecided pair: lower id wins, or a coin flip with ``rng``."""
    n = adj.shape[0]
    for u in range(n):
        for v in range(u + 1, n):
            if free[u, v]:
                if rng is not None and rng.random() < 0.5:
                    adj[v, u] = True
                else:
                    adj[u, v] = True


def _check_source(source):
    if source.seeds.s:
        raise TfpError("the source instance must be non-seeded")


def reduce_to_seeded_constant(
    source: TfpInstance, s_target: int, rng: random.Random | None = None
) -> ReductionOutput:
    _check_source(source)
    if s_target < 2 or not is_power_of_two(s_target):
        raise TfpError(f"s_target must be a power of two >= 2, got {s_target}")
    t = log2(s_target)
    n, x = source.n, source.target
    total = n << t
    adj = np.zeros((total, total), dtype=bool)
    free = np.zeros((total, total), dtype=bool)
    adj[:n, :n] = source.graph.adj
    provenance = [(ORIGINAL, 0)] * n
    groups = []
    start = n
    for i in range(1, t + 1):
        members = list(range(start, start + (n << (i - 1))))
        groups.append(members)
        provenance += [(APEX, i)] + [(GADGET, i)] * (len(members) - 1)
        start += len(members)

    for i, members in enumerate(groups, start=1):
        apex = members[0]
        adj[apex, members[1:]] = True
        adj[np.ix_(members, range(n))] = True
        adj[apex, x] = False
        adj[x, apex] = True
        # inside the group, apart from the apex
        for a_idx, u in enumerate(members[1:]):
            free[u, members[2 + a_idx:]] = True
        # against later groups
        later = [p for g in groups[i:] for p in g]
        free[np.ix_(members, later)] = True
    _fill_free(adj, free, rng)

    # seed ladder: tier j (ranks 2**j + 1 .. 2**(j+1)) holds x_{t-j}, then
    # 1, 2, ..., 2**(j-1) fresh members of V_{t-j+1}, ..., V_t
    cursor = {i: 1 for i in range(1, t + 1)}

    def take(i, k):
        got = groups[i - 1][cursor[i]: cursor[i] + k]
        cursor[i] += k
        return got

    seeded = [x, groups[t - 1][0]]
    for j in range(1, t):
        seeded.append(groups[t - j - 1][0])
        for step, i in enumerate(range(t - j + 1, t + 1)):
            seeded += take(i, 1 << step)
    instance = TfpInstance(TournamentGraph(adj), SeedAssignment(tuple(seeded)), x)
    return ReductionOutput(instance, tuple(provenance), n)


def reduce_to_seeded_half(source: TfpInstance, rng: random.Random | None = None) -> ReductionOutput:
    _check_source(source)
    n = source.n
    adj = np.zeros((2 * n, 2 * n), dtype=bool)
    free = np.zeros((2 * n, 2 * n), dtype=bool)
    adj[:n, :n] = source.graph.adj
    adj[:n, n:] = True
    free[n:, n:] = np.triu(np.ones((n, n), dtype=bool), 1)
    _fill_free(adj, free, rng)
    seeds = SeedAssignment(tuple(range(n, 2 * n)))
    provenance = ((ORIGINAL, 0),) * n + ((PADDING, 1),) * n
    return ReductionOutput(TfpInstance(TournamentGraph(adj), seeds, source.target), provenance, n)


def audit(output: ReductionOutput) -> list[str]:
    """Structural problems with a reduction output (empty when it is sound)."""
    problems = []
    inst = output.instance
    t = inst.graph.table
    n, x = output.source_n, inst.target
    originals = output.members(ORIGINAL)
    if len(originals) != n:
        problems.append("wrong number of original players")
    paddings = output.members(PADDING)
    if paddings:
        if len(paddings) != n:
            problems.append(f"|V'| = {len(paddings)}, expected {n}")
        if any(t[q][v] for q in paddings for v in originals):
            problems.append("a padding player beats an original player")
        if set(inst.seeds.seeded) != set(paddings):
            problems.append("seeds are not exactly the padding players")
        return problems
    i = 1
    while output.group(i):
        members = output.group(i)
        if len(members) != n << (i - 1):
            problems.append(f"|V_{i}| = {len(members)}, expected {n << (i - 1)}")
        (apex,) = output.members(APEX, i)
        if any(not t[apex][p] for p in members if p != apex):
            problems.append(f"x_{i} does not beat all of V_{i}")
        for p in members:
            for v in originals:
                expected = not (p == apex and v == x)
                if t[p][v] != expected:
                    problems.append(f"edge {p} vs {v} breaks the gadget")
        i += 1
    return problems
