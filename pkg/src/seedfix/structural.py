"""Kings, superkings and ultrakings: classification, bracket construction, counterexamples.

Throughout, for a target x, ``A`` is the set of players x beats and ``B`` the
set of players who beat x.  A graph is *special* when some y in A beats all
of B while B beats the rest of A.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import (
    Bracket,
    PreconditionError,
    SeedAssignment,
    TfpError,
    TfpInstance,
    TournamentGraph,
    any_valid_bracket,
    assemble_rounds,
    is_valid_bracket,
    iter_pairs,
    log2,
    max_bipartite_matching,
    replay_bracket,
)


@dataclass(frozen=True)
class KingPartition:
    target: int
    A: frozenset[int]
    B: frozenset[int]
    y: int | None = None

    @property
    def special(self) -> bool:
        return self.y is not None


@dataclass(frozen=True)
class PlayerProfile:
    outdegree: int
    is_king: bool
    is_superking: bool
    is_ultraking: bool


def partition(graph: TournamentGraph, x: int, players: Sequence[int] | None = None) -> KingPartition:
    players = range(graph.n) if players is None else players
    win = graph.table[x]
    A = frozenset(p for p in players if p != x and win[p])
    B = frozenset(p for p in players if p != x and not win[p])
    return KingPartition(x, A, B, special_y(graph, A, B))


def special_y(graph: TournamentGraph, A, B) -> int | None:
    """The y making (x, A, B) special, if any.  Needs B nonempty."""
    if not B:
        return None
    t = graph.table
    for y in sorted(A):
        if all(t[y][b] for b in B) and all(t[b][a] for b in B for a in A if a != y):
            return y
    return None


def classify_player(graph: TournamentGraph, x: int, players: Sequence[int] | None = None) -> PlayerProfile:
    """Profile of x within ``players`` (default: everyone)."""
    players = list(range(graph.n)) if players is None else list(players)
    m = len(players)
    part = partition(graph, x, players)
    t = graph.table
    # fewest members of A beating a single member of B
    cover = min((sum(t[a][b] for a in part.A) for b in part.B), default=m)
    log_m = m.bit_length() - 1
    return PlayerProfile(
        outdegree=len(part.A),
        is_king=cover >= 1,
        is_superking=cover >= log_m,
        is_ultraking=cover >= m // 2,
    )


def build_special_tournament(
    n: int, a_size: int, seed_plan: Sequence[str] = (), rng: random.Random | None = None
) -> tuple[TfpInstance, KingPartition]:
    """A special tournament with x = 0, A = 1..a_size, y = a_size, B = the rest.

    Edges inside A and inside B go to the lower id unless ``rng`` is given, in
    which case they are random.  With ascending ids y loses to the rest of A.
    ``seed_plan`` lists the holders of seeds 1, 2, ... by role: ``"x"``,
    ``"y"``, ``"w"`` (next member of A without y) or ``"z"`` (next member of B).
    """
    if not 1 <= a_size <= n - 2:
        raise TfpError(f"a_size must be in [1, {n - 2}], got {a_size}")
    x, y = 0, a_size
    A = list(range(1, a_size + 1))
    B = list(range(a_size + 1, n))
    adj = np.zeros((n, n), dtype=bool)
    for group in (A, B):
        for i, u in enumerate(group):
            for v in group[i + 1:]:
                if rng is not None and rng.random() < 0.5:
                    adj[v, u] = True
                else:
                    adj[u, v] = True
    adj[x, A] = True
    adj[np.ix_(B, [x])] = True
    adj[y, B] = True
    adj[np.ix_(B, A[:-1])] = True
    graph = TournamentGraph(adj)

    pools = {"w": [a for a in A if a != y], "z": list(B)}
    seeded = []
    for role in seed_plan:
        if role == "x":
            seeded.append(x)
        elif role == "y":
            seeded.append(y)
        elif role in pools:
            if not pools[role]:
                raise TfpError(f"seed plan {tuple(seed_plan)} runs out of {role!r} players")
            seeded.append(pools[role].pop(0))
        else:
            raise TfpError(f"unknown seed role {role!r}")
    instance = TfpInstance(graph, SeedAssignment(tuple(seeded)), x)
    return instance, KingPartition(x, frozenset(A), frozenset(B), y)


def _matching(left, right, edge, rng):
    if rng is None:
        return dict(sorted(max_bipartite_matching(left, right, edge).pairs))
    left, right = list(left), list(right)
    rng.shuffle(left)
    rng.shuffle(right)
    m = max_bipartite_matching(range(len(left)), range(len(right)), lambda i, j: edge(left[i], right[j]))
    return {left[i]: right[j] for i, j in m.pairs}


def _ordered(items, rng):
    items = sorted(items)
    if rng is not None:
        rng.shuffle(items)
    return items


def _play(graph, pairs, rank):
    """Play one round; winners inherit the stronger seed rank of the match."""
    winners = []
    for a, b in pairs:
        w = graph.winner(a, b)
        r = min(rank.pop(a, np.inf), rank.pop(b, np.inf))
        if r != np.inf:
            rank[w] = r
        winners.append(w)
    return winners


def _verified(instance, rounds):
    bracket = assemble_rounds(instance.graph, rounds)
    winner, _ = replay_bracket(bracket, instance.graph)
    if winner != instance.target or not is_valid_bracket(bracket, instance.seeds):
        raise AssertionError("constructed bracket failed verification")
    return bracket


def _king_case(graph, x, alive, other):
    """'a' (outdegree >= m/2 + 1), 'b' (special, outdegree m/2, other seed in B or y) or None."""
    m = len(alive)
    part = partition(graph, x, alive)
    if not classify_player(graph, x, alive).is_king:
        return None, part
    if len(part.A) >= m // 2 + 1:
        return "a", part
    if len(part.A) == m // 2 and part.special and (other in part.B or other == part.y):
        return "b", part
    return None, part


def fix_king_two_seeds(instance: TfpInstance, rng: random.Random | None = None) -> Bracket:
    """Valid winning bracket for a seeded king x when s = 2.

    Needs outdegree >= n/2 + 1, or a special graph with outdegree n/2 whose
    other seed lies in B or is y.
    """
    graph, x, n = instance.graph, instance.target, instance.n
    if instance.seeds.s != 2:
        raise PreconditionError("fix_king_two_seeds needs exactly two seeds")
    if x not in instance.seeds.seeded:
        raise PreconditionError("target is not seeded")
    if not classify_player(graph, x).is_king:
        raise PreconditionError("target is not a king")
    (other,) = [p for p in instance.seeds.seeded if p != x]
    case, _ = _king_case(graph, x, range(n), other)
    if case is None:
        raise PreconditionError(
            "target needs outdegree >= n/2 + 1, or a special graph with outdegree n/2 "
            "and the other seed in B or equal to y"
        )

    t = graph.table
    rank = {p: r + 1 for r, p in enumerate(instance.seeds.seeded)}
    alive = list(range(n))
    rounds = []
    while len(alive) > 2:
        m = len(alive)
        case, part = _king_case(graph, x, alive, other)
        if case is None:
            raise AssertionError(f"king invariant lost with {m} players left")
        M = _matching(part.A, part.B, lambda a, b: t[a][b], rng)
        pairs = list(M.items())
        rem_a = _ordered(part.A - M.keys(), rng)
        rem_b = _ordered(part.B - set(M.values()), rng)
        hold = None
        if len(part.A) == m // 2 + 1 and len(M) == 1 and other in rem_a:
            # special graph: keep the other seed back so a member of B takes it over
            hold = other
            rem_a.remove(other)
        partner = next((a for a in rem_a if a != other), None)
        if partner is None:
            raise AssertionError("no unseeded member of A left for x")
        rem_a.remove(partner)
        pairs.append((x, partner))
        if hold is not None:
            if len(rem_a) % 2 or len(rem_b) % 2 != 1:
                raise AssertionError("parity of the held-seed round is off")
            pairs.append((hold, rem_b.pop()))
        else:
            if len(rem_a) % 2 != len(rem_b) % 2:
                raise AssertionError("leftover parity mismatch between A and B")
            if len(rem_a) % 2:
                pairs.append((rem_a.pop(), rem_b.pop()))
        pairs += list(iter_pairs(rem_a)) + list(iter_pairs(rem_b))
        alive = _play(graph, pairs, rank)
        (other,) = [p for p in rank if p != x]
        rounds.append(pairs)
    (last,) = [p for p in alive if p != x]
    rounds.append([(x, last)])
    return _verified(instance, rounds)


def fix_superking_two_seeds(instance: TfpInstance, rng: random.Random | None = None) -> Bracket:
    """Valid winning bracket for a superking when s = 2 (x seeded or not)."""
    graph, x, n = instance.graph, instance.target, instance.n
    if instance.seeds.s != 2:
        raise PreconditionError("fix_superking_two_seeds needs exactly two seeds")
    if not classify_player(graph, x).is_superking:
        raise PreconditionError("target is not a superking")

    t = graph.table
    rank = {p: r + 1 for r, p in enumerate(instance.seeds.seeded)}
    alive = list(range(n))
    rounds = []
    while len(alive) > 2:
        if not classify_player(graph, x, alive).is_superking:
            raise AssertionError(f"superking invariant lost with {len(alive)} players left")
        part = partition(graph, x, alive)
        carriers = set(rank)
        A = _ordered(part.A, rng)
        if x in carriers:
            w = next((a for a in A if a not in carriers), None)
        else:
            w = next((a for a in A if a in carriers), A[0] if A else None)
        if w is None:
            raise AssertionError("no usable opponent for x in A")
        M = _matching([a for a in A if a != w], part.B, lambda a, b: t[a][b], rng)
        used = set(M) | set(M.values()) | {x, w}
        rem = _ordered((p for p in alive if p not in used), rng)
        stuck = [c for c in rem if c in carriers]
        if len(stuck) == 2:
            c1, c2 = stuck
            if len(rem) == 2:
                # both seeds unmatched in B with nobody else left: reroute one pair of M
                a = next((a for a in M if t[a][c1]), None)
                if a is None:
                    raise AssertionError("seed in B is beaten by no matched member of A")
                freed = M[a]
                M[a] = c1
                rem = [freed, c2]
            else:
                rem = [c1] + [p for p in rem if p not in stuck] + [c2]
        pairs = [(x, w)] + list(M.items()) + list(iter_pairs(rem))
        alive = _play(graph, pairs, rank)
        rounds.append(pairs)
    (last,) = [p for p in alive if p != x]
    rounds.append([(x, last)])
    return _verified(instance, rounds)


def fix_ultraking(instance: TfpInstance, rng: random.Random | None = None) -> Bracket:
    """Valid winning bracket for an ultraking, for any number of seeds.

    Seeds are first extended to n/2 (that only adds constraints).  Round one
    pairs every seeded player with an unseeded one so that all of B loses;
    the resulting pairs are then arranged by their seed ranks.
    """
    graph, x, n = instance.graph, instance.target, instance.n
    if not classify_player(graph, x).is_ultraking:
        raise PreconditionError("target is not an ultraking")
    if n == 2:
        return _verified(instance, [[(x, 1 - x)]])

    seeds = instance.seeds
    if rng is not None and seeds.s < n // 2:
        pool = [p for p in range(n) if p not in seeds.seeded]
        rng.shuffle(pool)
        seeds = SeedAssignment(seeds.seeded + tuple(pool[: n // 2 - seeds.s]))
    else:
        seeds = seeds.extended(n)
    rank = {p: r + 1 for r, p in enumerate(seeds.seeded)}
    t = graph.table
    part = partition(graph, x, range(n))
    seeded_a = _ordered((a for a in part.A if a in rank), rng)
    unseeded_a = _ordered((a for a in part.A if a not in rank), rng)

    pairs = []
    used = set()
    for b in _ordered(part.B, rng):
        pool = unseeded_a if b in rank else seeded_a
        a = next((a for a in pool if a not in used and t[a][b]), None)
        if a is None:
            raise AssertionError(f"greedy matching found no eliminator for {b}")
        used.add(a)
        pairs.append((a, b))
    rest = [x] + [a for a in part.A if a not in used]
    rest_seeded = _ordered((p for p in rest if p in rank), rng)
    rest_unseeded = _ordered((p for p in rest if p not in rank), rng)
    if len(rest_seeded) != len(rest_unseeded):
        raise AssertionError("seeded and unseeded leftovers differ in number")
    pairs += list(zip(rest_seeded, rest_unseeded))

    head = {}
    for a, b in pairs:
        s_, u = (a, b) if a in rank else (b, a)
        head[s_] = u
    units = SeedAssignment(tuple(sorted(head, key=rank.get)))
    layout = any_valid_bracket(list(head), units, rng)
    leaves = []
    for s_ in layout.leaves:
        pair = [s_, head[s_]]
        if rng is not None:
            rng.shuffle(pair)
        leaves += pair
    bracket = Bracket(tuple(leaves))
    winner, log = replay_bracket(bracket, graph)
    if any(w in part.B for _, _, w in log.rounds[0]):
        raise AssertionError("a member of B survived round one")
    if winner != x or not is_valid_bracket(bracket, instance.seeds):
        raise AssertionError("constructed bracket failed verification")
    return bracket


class Counterexample(str, enum.Enum):
    KING_N2_UNSEEDED = "KING_N2_UNSEEDED"
    KING_HALF_S2 = "KING_HALF_S2"
    KING_N2_TOPSEED = "KING_N2_TOPSEED"
    SUPERKING_S4 = "SUPERKING_S4"
    ULTRAKING_TIGHT = "ULTRAKING_TIGHT"


MIN_N = {
    Counterexample.KING_N2_UNSEEDED: 4,
    Counterexample.KING_HALF_S2: 4,
    Counterexample.KING_N2_TOPSEED: 8,
    Counterexample.SUPERKING_S4: 8,
    Counterexample.ULTRAKING_TIGHT: 4,
}


def _layered(n, x, A, B):
    """x beats A, A beats B, B beats x; inside A and B the lower id wins."""
    adj = np.zeros((n, n), dtype=bool)
    for group in (A, B):
        for i, u in enumerate(group):
            adj[u, group[i + 1:]] = True
    adj[x, A] = True
    adj[np.ix_(A, B)] = True
    adj[B, x] = True
    return TournamentGraph(adj)


def make_counterexample(kind: Counterexample | str, n: int, s: int | None = None) -> TfpInstance:
    """An instance on which the target provably cannot win.

    ``s`` overrides the seed count where the construction allows it.
    """
    kind = Counterexample(kind)
    log2(n)
    if n < MIN_N[kind]:
        raise TfpError(f"{kind.value} needs n >= {MIN_N[kind]}, got {n}")
    if kind is Counterexample.KING_N2_UNSEEDED:
        s = 2 if s is None else s
        plan = ("y", "z") + ("w",) * (s - 2)
        return build_special_tournament(n, n - 2, plan)[0]
    if kind is Counterexample.KING_HALF_S2:
        if s not in (None, 2):
            raise TfpError("KING_HALF_S2 has exactly two seeds")
        return build_special_tournament(n, n // 2, ("x", "w"))[0]
    if kind is Counterexample.KING_N2_TOPSEED:
        s = 4 if s is None else s
        if s < 4:
            raise TfpError("KING_N2_TOPSEED needs at least four seeds")
        # y = n - 2 is the highest id in A, so it loses to the rest of A
        plan = ("x", "z", "y") + ("w",) * (s - 3)
        return build_special_tournament(n, n - 2, plan)[0]
    if kind is Counterexample.SUPERKING_S4:
        s = 4 if s is None else s
        if s < 4:
            raise TfpError("SUPERKING_S4 needs at least four seeds")
        k = log2(n)
        A, B = list(range(1, k + 1)), list(range(k + 1, n))
        seeded = (0, 1, 2, 3) + tuple(B[: s - 4])
        return TfpInstance(_layered(n, 0, A, B), SeedAssignment(seeded), 0)
    if kind is Counterexample.ULTRAKING_TIGHT:
        if s not in (None, n // 2):
            raise TfpError("ULTRAKING_TIGHT seeds exactly n/2 players")
        A, B = list(range(1, n // 2)), list(range(n // 2, n))
        return TfpInstance(_layered(n, 0, A, B), SeedAssignment(tuple([0] + A)), 0)
    raise AssertionError(kind)
