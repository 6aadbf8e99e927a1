import itertools
import random

import numpy as np
import pytest
from hypothesis import strategies as st

from seedfix.core import SeedAssignment, TfpInstance, TournamentGraph


def all_tournaments(n):
    pairs = list(itertools.combinations(range(n), 2))
    for bits in range(1 << len(pairs)):
        adj = np.zeros((n, n), dtype=bool)
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                adj[i, j] = True
            else:
                adj[j, i] = True
        yield TournamentGraph(adj)


def random_graph(n, rng):
    adj = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.5:
                adj[i, j] = True
            else:
                adj[j, i] = True
    return TournamentGraph(adj)


@st.composite
def tournaments(draw, sizes=(2, 4, 8)):
    n = draw(st.sampled_from(sizes))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_graph(n, random.Random(seed))


@st.composite
def instances(draw, sizes=(4, 8)):
    graph = draw(tournaments(sizes))
    n = graph.n
    s = draw(st.sampled_from([k for k in (0, 2, 4) if k <= n // 2]))
    seeded = tuple(draw(st.permutations(range(n)))[:s])
    target = draw(st.integers(0, n - 1))
    return TfpInstance(graph, SeedAssignment(seeded), target)


@pytest.fixture
def rng():
    return random.Random(20240611)
